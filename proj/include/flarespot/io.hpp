#pragma once

#include <string>

#include "flarespot/image.hpp"
#include "flarespot/morphology.hpp"

namespace flarespot {

/// Decode a PNG or JPEG file (detected by magic bytes) to 8-bit RGB.
/// Throws IoError on unreadable or unsupported files.
RgbImage read_image(const std::string& path);

/// Decode a mask image: any pixel with value >= 128 (first channel) is set.
BinaryMask read_mask(const std::string& path);

/// Write an 8-bit RGB PNG.
void write_png(const std::string& path, const RgbImage& img);

/// Write a mask as a single-channel PNG (0 = background, 255 = set).
void write_png(const std::string& path, const BinaryMask& mask);

/// Write a gray plane min-max normalized to 8 bits (debug artifacts).
void write_png_normalized(const std::string& path, const GrayPlane& plane);

}  // namespace flarespot
