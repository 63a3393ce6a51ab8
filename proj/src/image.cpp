#include "rlrp/image.hpp"

#include <cmath>
#include <string>

#include "rlrp/errors.hpp"

namespace rlrp {

namespace {

std::string shape_string(const Shape& s) {
    return std::to_string(s.height) + "x" + std::to_string(s.width) + "x" + std::to_string(s.channels);
}

void check_dims(std::size_t height, std::size_t width, std::size_t channels) {
    if (height == 0 || width == 0 || channels == 0) {
        throw ShapeMismatch("image dimensions must be positive, got " +
                            shape_string({height, width, channels}));
    }
}

bool finite_span(std::span<const double> xs) {
    for (double x : xs) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

}  // namespace

Image::Image(std::size_t height, std::size_t width, std::size_t channels, double fill)
    : shape_{height, width, channels}, data_(height * width * channels, fill) {
    check_dims(height, width, channels);
}

Image::Image(std::size_t height, std::size_t width, std::size_t channels, std::vector<double> data)
    : shape_{height, width, channels}, data_(std::move(data)) {
    check_dims(height, width, channels);
    if (data_.size() != shape_.size()) {
        throw ShapeMismatch("image data length " + std::to_string(data_.size()) +
                            " does not match " + shape_string(shape_));
    }
}

std::span<double> Image::channel(std::size_t c) {
    return std::span<double>(data_).subspan(c * shape_.plane(), shape_.plane());
}

std::span<const double> Image::channel(std::size_t c) const {
    return std::span<const double>(data_).subspan(c * shape_.plane(), shape_.plane());
}

MatrixMap Image::matrix(std::size_t c) {
    return MatrixMap(data_.data() + c * shape_.plane(), static_cast<Eigen::Index>(shape_.height),
                     static_cast<Eigen::Index>(shape_.width));
}

ConstMatrixMap Image::matrix(std::size_t c) const {
    return ConstMatrixMap(data_.data() + c * shape_.plane(), static_cast<Eigen::Index>(shape_.height),
                          static_cast<Eigen::Index>(shape_.width));
}

bool Image::all_finite() const noexcept { return finite_span(data_); }

Image& Image::operator+=(const Image& rhs) {
    require_same_shape(shape_, rhs.shape_, "image addition");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
    return *this;
}

Image& Image::operator-=(const Image& rhs) {
    require_same_shape(shape_, rhs.shape_, "image subtraction");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
    return *this;
}

Image& Image::operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
}

bool GradientField::all_finite() const noexcept { return finite_span(dx_) && finite_span(dy_); }

GradientField& GradientField::operator+=(const GradientField& rhs) {
    require_same_shape(shape_, rhs.shape_, "gradient addition");
    for (std::size_t k = 0; k < dx_.size(); ++k) {
        dx_[k] += rhs.dx_[k];
        dy_[k] += rhs.dy_[k];
    }
    return *this;
}

GradientField& GradientField::operator-=(const GradientField& rhs) {
    require_same_shape(shape_, rhs.shape_, "gradient subtraction");
    for (std::size_t k = 0; k < dx_.size(); ++k) {
        dx_[k] -= rhs.dx_[k];
        dy_[k] -= rhs.dy_[k];
    }
    return *this;
}

GradientField& GradientField::operator*=(double s) {
    for (double& x : dx_) x *= s;
    for (double& x : dy_) x *= s;
    return *this;
}

void require_same_shape(const Shape& a, const Shape& b, const char* what) {
    if (!(a == b)) {
        throw ShapeMismatch(std::string(what) + ": " + shape_string(a) + " vs " + shape_string(b));
    }
}

double dot(const Image& a, const Image& b) {
    require_same_shape(a.shape(), b.shape(), "dot");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

double dot(const GradientField& a, const GradientField& b) {
    require_same_shape(a.shape(), b.shape(), "dot");
    double s = 0.0;
    auto ax = a.dx(), ay = a.dy(), bx = b.dx(), by = b.dy();
    for (std::size_t k = 0; k < a.size(); ++k) s += ax[k] * bx[k] + ay[k] * by[k];
    return s;
}

double squared_norm(const Image& a) {
    double s = 0.0;
    for (double x : a.data()) s += x * x;
    return s;
}

double squared_norm(const GradientField& a) {
    double s = 0.0;
    for (double x : a.dx()) s += x * x;
    for (double x : a.dy()) s += x * x;
    return s;
}

double norm(const Image& a) { return std::sqrt(squared_norm(a)); }
double norm(const GradientField& a) { return std::sqrt(squared_norm(a)); }

double distance(const Image& a, const Image& b) {
    require_same_shape(a.shape(), b.shape(), "distance");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace rlrp
