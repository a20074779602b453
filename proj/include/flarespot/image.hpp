#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "flarespot/errors.hpp"

namespace flarespot {

/// Integer pixel coordinate (x = column, y = row).
struct Pixel {
    int x = 0;
    int y = 0;

    friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// Continuous image-plane coordinate.
struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Inclusive axis-aligned pixel rectangle.
struct Rect {
    int x0 = 0;
    int y0 = 0;
    int x1 = -1;  // empty by default
    int y1 = -1;

    bool empty() const { return x1 < x0 || y1 < y0; }
    int width() const { return empty() ? 0 : x1 - x0 + 1; }
    int height() const { return empty() ? 0 : y1 - y0 + 1; }
    long long area() const { return static_cast<long long>(width()) * height(); }
    bool contains(int x, int y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
};

/// 8-bit interleaved RGB image.
class RgbImage {
public:
    RgbImage() = default;
    RgbImage(int width, int height, std::uint8_t fill = 0)
        : width_(width), height_(height),
          data_(static_cast<std::size_t>(width) * height * 3, fill) {
        if (width < 1 || height < 1)
            throw OutOfBoundsError("RgbImage dimensions must be positive");
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t pixelCount() const { return static_cast<std::size_t>(width_) * height_; }

    std::uint8_t& at(int x, int y, int c) {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * 3 + c];
    }
    std::uint8_t at(int x, int y, int c) const {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * 3 + c];
    }

    std::vector<std::uint8_t>& data() { return data_; }
    const std::vector<std::uint8_t>& data() const { return data_; }

    bool inside(int x, int y) const { return x >= 0 && x < width_ && y >= 0 && y < height_; }

    friend bool operator==(const RgbImage&, const RgbImage&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Single-channel double-precision plane, row-major.
class GrayPlane {
public:
    GrayPlane() = default;
    GrayPlane(int width, int height, double fill = 0.0)
        : width_(width), height_(height),
          values_(static_cast<std::size_t>(width) * height, fill) {
        if (width < 1 || height < 1)
            throw OutOfBoundsError("GrayPlane dimensions must be positive");
    }

    int width() const { return width_; }
    int height() const { return height_; }

    double& at(int x, int y) { return values_[static_cast<std::size_t>(y) * width_ + x]; }
    double at(int x, int y) const { return values_[static_cast<std::size_t>(y) * width_ + x]; }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    bool inside(int x, int y) const { return x >= 0 && x < width_ && y >= 0 && y < height_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> values_;
};

/// CIELab image as three planes. L is in [0, 100]; a and b are signed.
struct LabImage {
    GrayPlane L;
    GrayPlane a;
    GrayPlane b;

    int width() const { return L.width(); }
    int height() const { return L.height(); }
};

/// Square search window: center plus half-size ("radius") in pixels.
struct Window {
    Point center;
    double radius = 0.0;

    bool contains(int x, int y) const {
        return std::abs(x - center.x) <= radius && std::abs(y - center.y) <= radius;
    }
};

/// Intersection of a window with the [0,w)x[0,h) pixel domain.
Rect window_rect(const Window& w, int imageWidth, int imageHeight);

/// Min-max normalization of a luminance plane restricted to a window.
///
/// Returns the normalized values over the clipped window rect (row-major,
/// dimensions of window_rect). A constant window normalizes to all zeros.
/// Throws EmptyWindowError when the clipped window has no pixels.
GrayPlane normalize_window(const GrayPlane& plane, const Window& w);

}  // namespace flarespot
