#ifndef RLRP_IMAGE_HPP
#define RLRP_IMAGE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace rlrp {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixMap = Eigen::Map<RowMatrix>;
using ConstMatrixMap = Eigen::Map<const RowMatrix>;

/// Height/width/channel triple shared by images and gradient fields.
struct Shape {
    std::size_t height = 0;
    std::size_t width = 0;
    std::size_t channels = 0;

    std::size_t plane() const noexcept { return height * width; }
    std::size_t size() const noexcept { return height * width * channels; }

    friend bool operator==(const Shape&, const Shape&) = default;
};

/// H x W x C raster of doubles.
///
/// Storage is planar: channel c occupies the contiguous block
/// [c*H*W, (c+1)*H*W), and inside a channel pixels are row-major, so pixel
/// (c, i, j) lives at c*H*W + i*W + j. Every operator and solver in the
/// library processes channels independently.
class Image {
public:
    Image() = default;
    Image(std::size_t height, std::size_t width, std::size_t channels, double fill = 0.0);
    Image(std::size_t height, std::size_t width, std::size_t channels, std::vector<double> data);
    explicit Image(Shape shape, double fill = 0.0)
        : Image(shape.height, shape.width, shape.channels, fill) {}

    static Image zeros_like(const Image& other) { return Image(other.shape()); }

    std::size_t height() const noexcept { return shape_.height; }
    std::size_t width() const noexcept { return shape_.width; }
    std::size_t channels() const noexcept { return shape_.channels; }
    std::size_t size() const noexcept { return data_.size(); }
    const Shape& shape() const noexcept { return shape_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t c, std::size_t i, std::size_t j) {
        return data_[(c * shape_.height + i) * shape_.width + j];
    }
    double operator()(std::size_t c, std::size_t i, std::size_t j) const {
        return data_[(c * shape_.height + i) * shape_.width + j];
    }
    double& operator[](std::size_t k) { return data_[k]; }
    double operator[](std::size_t k) const { return data_[k]; }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }
    const std::vector<double>& values() const noexcept { return data_; }

    std::span<double> channel(std::size_t c);
    std::span<const double> channel(std::size_t c) const;

    /// Channel c viewed as an H x W row-major matrix.
    MatrixMap matrix(std::size_t c);
    ConstMatrixMap matrix(std::size_t c) const;

    bool all_finite() const noexcept;

    Image& operator+=(const Image& rhs);
    Image& operator-=(const Image& rhs);
    Image& operator*=(double s);

    friend Image operator+(Image lhs, const Image& rhs) { return lhs += rhs; }
    friend Image operator-(Image lhs, const Image& rhs) { return lhs -= rhs; }
    friend Image operator*(Image lhs, double s) { return lhs *= s; }
    friend Image operator*(double s, Image rhs) { return rhs *= s; }

    friend bool operator==(const Image&, const Image&) = default;

private:
    Shape shape_{};
    std::vector<double> data_;
};

/// Forward differences of an image: dx along columns, dy along rows.
/// Same planar layout as Image.
class GradientField {
public:
    GradientField() = default;
    explicit GradientField(Shape shape)
        : shape_(shape), dx_(shape.size(), 0.0), dy_(shape.size(), 0.0) {}

    const Shape& shape() const noexcept { return shape_; }
    std::size_t size() const noexcept { return dx_.size(); }

    std::span<double> dx() noexcept { return dx_; }
    std::span<const double> dx() const noexcept { return dx_; }
    std::span<double> dy() noexcept { return dy_; }
    std::span<const double> dy() const noexcept { return dy_; }

    bool all_finite() const noexcept;

    GradientField& operator+=(const GradientField& rhs);
    GradientField& operator-=(const GradientField& rhs);
    GradientField& operator*=(double s);

    friend GradientField operator+(GradientField lhs, const GradientField& rhs) { return lhs += rhs; }
    friend GradientField operator-(GradientField lhs, const GradientField& rhs) { return lhs -= rhs; }
    friend GradientField operator*(GradientField lhs, double s) { return lhs *= s; }
    friend GradientField operator*(double s, GradientField rhs) { return rhs *= s; }

    friend bool operator==(const GradientField&, const GradientField&) = default;

private:
    Shape shape_{};
    std::vector<double> dx_;
    std::vector<double> dy_;
};

void require_same_shape(const Shape& a, const Shape& b, const char* what);

double dot(const Image& a, const Image& b);
double dot(const GradientField& a, const GradientField& b);

/// Frobenius norm over all channels.
double norm(const Image& a);
double norm(const GradientField& a);

double squared_norm(const Image& a);
double squared_norm(const GradientField& a);

/// ||a - b|| without materializing the difference.
double distance(const Image& a, const Image& b);

}  // namespace rlrp

#endif  // RLRP_IMAGE_HPP
