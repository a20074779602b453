#include "flarespot/color.hpp"

#include <algorithm>
#include <cmath>

namespace flarespot {

namespace {

// sRGB <-> XYZ matrices for the D65 white point.
constexpr double kRgbToXyz[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};

constexpr double kXyzToRgb[3][3] = {
    {3.2404542, -1.5371385, -0.4985314},
    {-0.9692660, 1.8760108, 0.0415560},
    {0.0556434, -0.2040259, 1.0572252},
};

constexpr double kD65X = 0.95047;
constexpr double kD65Y = 1.00000;
constexpr double kD65Z = 1.08883;

constexpr double kLabEpsilon = 216.0 / 24389.0;  // (6/29)^3
constexpr double kLabKappa = 24389.0 / 27.0;     // (29/3)^3

double srgbToLinear(double v) {
    return (v <= 0.04045) ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

double linearToSrgb(double v) {
    return (v <= 0.0031308) ? v * 12.92 : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

double labF(double t) {
    return (t > kLabEpsilon) ? std::cbrt(t) : (kLabKappa * t + 16.0) / 116.0;
}

double labFInv(double t) {
    const double t3 = t * t * t;
    return (t3 > kLabEpsilon) ? t3 : (116.0 * t - 16.0) / kLabKappa;
}

}  // namespace

std::array<double, 3> rgb_to_lab(double r, double g, double b) {
    const double rl = srgbToLinear(r / 255.0);
    const double gl = srgbToLinear(g / 255.0);
    const double bl = srgbToLinear(b / 255.0);

    const double x = kRgbToXyz[0][0] * rl + kRgbToXyz[0][1] * gl + kRgbToXyz[0][2] * bl;
    const double y = kRgbToXyz[1][0] * rl + kRgbToXyz[1][1] * gl + kRgbToXyz[1][2] * bl;
    const double z = kRgbToXyz[2][0] * rl + kRgbToXyz[2][1] * gl + kRgbToXyz[2][2] * bl;

    const double fx = labF(x / kD65X);
    const double fy = labF(y / kD65Y);
    const double fz = labF(z / kD65Z);

    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

std::array<double, 3> lab_to_rgb(double L, double a, double b, bool* inGamut) {
    const double fy = (L + 16.0) / 116.0;
    const double fx = fy + a / 500.0;
    const double fz = fy - b / 200.0;

    const double x = kD65X * labFInv(fx);
    const double y = kD65Y * ((L > kLabKappa * kLabEpsilon) ? fy * fy * fy : L / kLabKappa);
    const double z = kD65Z * labFInv(fz);

    double rl = kXyzToRgb[0][0] * x + kXyzToRgb[0][1] * y + kXyzToRgb[0][2] * z;
    double gl = kXyzToRgb[1][0] * x + kXyzToRgb[1][1] * y + kXyzToRgb[1][2] * z;
    double bl = kXyzToRgb[2][0] * x + kXyzToRgb[2][1] * y + kXyzToRgb[2][2] * z;

    constexpr double kTol = 1e-6;
    if (inGamut != nullptr) {
        *inGamut = rl >= -kTol && rl <= 1.0 + kTol && gl >= -kTol && gl <= 1.0 + kTol &&
                   bl >= -kTol && bl <= 1.0 + kTol;
    }

    rl = std::clamp(rl, 0.0, 1.0);
    gl = std::clamp(gl, 0.0, 1.0);
    bl = std::clamp(bl, 0.0, 1.0);

    return {255.0 * linearToSrgb(rl), 255.0 * linearToSrgb(gl), 255.0 * linearToSrgb(bl)};
}

LabImage rgb_to_lab(const RgbImage& img) {
    LabImage out;
    out.L = GrayPlane(img.width(), img.height());
    out.a = GrayPlane(img.width(), img.height());
    out.b = GrayPlane(img.width(), img.height());

    const std::size_t n = img.pixelCount();
    const std::uint8_t* p = img.data().data();
    for (std::size_t i = 0; i < n; ++i) {
        const auto lab = rgb_to_lab(p[3 * i], p[3 * i + 1], p[3 * i + 2]);
        out.L.values()[i] = lab[0];
        out.a.values()[i] = lab[1];
        out.b.values()[i] = lab[2];
    }
    return out;
}

RgbImage lab_to_rgb(const LabImage& lab) {
    RgbImage out(lab.width(), lab.height());
    const std::size_t n = out.pixelCount();
    for (std::size_t i = 0; i < n; ++i) {
        const auto rgb =
            lab_to_rgb(lab.L.values()[i], lab.a.values()[i], lab.b.values()[i]);
        for (int c = 0; c < 3; ++c) {
            out.data()[3 * i + c] =
                static_cast<std::uint8_t>(std::lround(std::clamp(rgb[c], 0.0, 255.0)));
        }
    }
    return out;
}

}  // namespace flarespot
