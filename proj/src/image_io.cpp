#include "rlrp/image_io.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>

#include "rlrp/errors.hpp"

namespace rlrp {

namespace {

class HeaderReader {
public:
    explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const char ch = bytes_[pos_];
            if (ch == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(ch))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::size_t number(const char* what) {
        skip_space_and_comments();
        const std::size_t start = pos_;
        std::size_t value = 0;
        while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
            value = value * 10 + static_cast<std::size_t>(bytes_[pos_] - '0');
            if (value > (1u << 24)) throw FormatError(std::string(what) + " too large", start);
            ++pos_;
        }
        if (pos_ == start) throw FormatError(std::string("expected ") + what, start);
        return value;
    }

    // Exactly one whitespace byte separates maxval from the raster.
    void single_whitespace() {
        if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
            throw FormatError("expected whitespace after maxval", pos_);
        }
        ++pos_;
    }

    std::size_t pos() const { return pos_; }

private:
    std::string_view bytes_;
    std::size_t pos_ = 2;
};

std::uint32_t load_u32(const char* p) {
    std::uint32_t v = 0;
    for (int k = 3; k >= 0; --k) v = (v << 8) | static_cast<unsigned char>(p[k]);
    return v;
}

void store_u32(std::string& out, std::uint32_t v) {
    for (int k = 0; k < 4; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
}

bool has_extension(const std::string& path, const char* ext) {
    std::string e = std::filesystem::path(path).extension().string();
    for (char& ch : e) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return e == ext;
}

}  // namespace

std::uint8_t quantize_8bit(double x) {
    if (std::isnan(x)) return 0;
    const double clamped = std::min(1.0, std::max(0.0, x));
    return static_cast<std::uint8_t>(std::floor(clamped * 255.0 + 0.5));
}

Image decode_netpbm(std::string_view bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
        throw FormatError("not a binary PGM/PPM file", 0);
    }
    const std::size_t channels = bytes[1] == '5' ? 1 : 3;
    HeaderReader header(bytes);
    const std::size_t width = header.number("width");
    const std::size_t height = header.number("height");
    header.skip_space_and_comments();
    const std::size_t maxval_at = header.pos();
    const std::size_t maxval = header.number("maxval");
    if (width == 0 || height == 0) throw FormatError("zero image dimension", maxval_at);
    if (maxval == 0 || maxval > 255) throw FormatError("only 8-bit maxval in [1,255] is supported", maxval_at);
    header.single_whitespace();

    const std::size_t start = header.pos();
    const std::size_t need = width * height * channels;
    if (bytes.size() - start < need) throw FormatError("truncated raster", bytes.size());

    Image img(height, width, channels);
    const double scale = static_cast<double>(maxval);
    for (std::size_t i = 0; i < height; ++i) {
        for (std::size_t j = 0; j < width; ++j) {
            for (std::size_t c = 0; c < channels; ++c) {
                const auto byte = static_cast<unsigned char>(bytes[start + (i * width + j) * channels + c]);
                if (byte > maxval) throw FormatError("sample exceeds maxval", start + (i * width + j) * channels + c);
                img(c, i, j) = byte / scale;
            }
        }
    }
    return img;
}

std::string encode_netpbm(const Image& img) {
    const std::size_t channels = img.channels();
    if (channels != 1 && channels != 3) throw IoError("PGM/PPM needs 1 or 3 channels, got " + std::to_string(channels));
    std::string out = (channels == 1 ? "P5\n" : "P6\n") + std::to_string(img.width()) + " " +
                      std::to_string(img.height()) + "\n255\n";
    out.reserve(out.size() + img.size());
    for (std::size_t i = 0; i < img.height(); ++i) {
        for (std::size_t j = 0; j < img.width(); ++j) {
            for (std::size_t c = 0; c < channels; ++c) out.push_back(static_cast<char>(quantize_8bit(img(c, i, j))));
        }
    }
    return out;
}

Image decode_native(std::string_view bytes) {
    const std::size_t header = kNativeMagic.size() + 12;
    if (bytes.substr(0, kNativeMagic.size()) != kNativeMagic) throw FormatError("bad native magic", 0);
    if (bytes.size() < header) throw FormatError("truncated native header", bytes.size());
    const std::size_t height = load_u32(bytes.data() + 8);
    const std::size_t width = load_u32(bytes.data() + 12);
    const std::size_t channels = load_u32(bytes.data() + 16);
    if (height == 0 || width == 0 || channels == 0) throw FormatError("zero image dimension", 8);
    const std::size_t count = height * width * channels;
    if ((bytes.size() - header) / 8 < count) throw FormatError("truncated native data", bytes.size());
    if (bytes.size() - header != count * 8) throw FormatError("trailing bytes after native data", header + count * 8);

    Image img(height, width, channels);
    auto data = img.data();
    for (std::size_t k = 0; k < count; ++k) {
        std::uint64_t bits = 0;
        const char* p = bytes.data() + header + 8 * k;
        for (int b = 7; b >= 0; --b) bits = (bits << 8) | static_cast<unsigned char>(p[b]);
        data[k] = std::bit_cast<double>(bits);
    }
    return img;
}

std::string encode_native(const Image& img) {
    std::string out(kNativeMagic);
    store_u32(out, static_cast<std::uint32_t>(img.height()));
    store_u32(out, static_cast<std::uint32_t>(img.width()));
    store_u32(out, static_cast<std::uint32_t>(img.channels()));
    out.reserve(out.size() + 8 * img.size());
    for (double x : img.data()) {
        const auto bits = std::bit_cast<std::uint64_t>(x);
        for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed: " + path);
    return bytes;
}

void write_file(const std::string& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path);
}

Image read_image(const std::string& path) {
    const std::string bytes = read_file(path);
    if (bytes.starts_with(kNativeMagic)) return decode_native(bytes);
    return decode_netpbm(bytes);
}

void write_image(const Image& img, const std::string& path) {
    if (has_extension(path, ".pgm")) {
        if (img.channels() != 1) throw IoError(".pgm needs a single-channel image");
        write_file(path, encode_netpbm(img));
    } else if (has_extension(path, ".ppm")) {
        if (img.channels() != 3) throw IoError(".ppm needs a three-channel image");
        write_file(path, encode_netpbm(img));
    } else {
        write_file(path, encode_native(img));
    }
}

}  // namespace rlrp
