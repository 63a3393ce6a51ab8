#ifndef RLRP_IMAGE_IO_HPP
#define RLRP_IMAGE_IO_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include "rlrp/image.hpp"

namespace rlrp {

/// Magic bytes that open a native container file.
inline constexpr std::string_view kNativeMagic = "RLRPIMG1";

/// Reads a binary PGM (P5), binary PPM (P6) or native container, chosen by
/// the leading bytes. 8-bit samples map to [0,1] by x / maxval.
/// Throws IoError when the file cannot be opened, FormatError on bad contents.
Image read_image(const std::string& path);

/// Writes by extension: ".pgm" (1 channel), ".ppm" (3 channels), anything
/// else uses the native container. 8-bit output clamps to [0,1] and rounds
/// half up: byte = floor(255 x + 0.5).
void write_image(const Image& img, const std::string& path);

Image decode_netpbm(std::string_view bytes);
std::string encode_netpbm(const Image& img);

/// Native layout: "RLRPIMG1", then height, width, channels as little-endian
/// u32, then height*width*channels little-endian IEEE-754 doubles in planar
/// order (channel, row, column). Round-trips bit for bit.
Image decode_native(std::string_view bytes);
std::string encode_native(const Image& img);

/// 8-bit quantization used by the netpbm writer.
std::uint8_t quantize_8bit(double x);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view bytes);

}  // namespace rlrp

#endif  // RLRP_IMAGE_IO_HPP
