#pragma once

#include <array>

#include "flarespot/image.hpp"

namespace flarespot {

/// sRGB (D65) -> CIELab conversion of a full image.
LabImage rgb_to_lab(const RgbImage& img);

/// Per-pixel conversions. RGB channels are in [0, 255].
std::array<double, 3> rgb_to_lab(double r, double g, double b);

/// Inverse transform. Out-of-gamut colors are reported through `inGamut`
/// (when non-null) and clamped to the sRGB cube.
std::array<double, 3> lab_to_rgb(double L, double a, double b, bool* inGamut = nullptr);

/// CIELab -> sRGB image conversion, clamping to gamut.
RgbImage lab_to_rgb(const LabImage& lab);

}  // namespace flarespot
