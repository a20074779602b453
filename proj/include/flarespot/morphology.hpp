#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "flarespot/image.hpp"

namespace flarespot {

/// Binary pixel mask stored as one byte per pixel (0 or 1), row-major.
class BinaryMask {
public:
    BinaryMask() = default;
    BinaryMask(int width, int height, bool fill = false)
        : width_(width), height_(height),
          bits_(static_cast<std::size_t>(width) * height, fill ? 1 : 0) {
        if (width < 1 || height < 1)
            throw OutOfBoundsError("BinaryMask dimensions must be positive");
    }

    int width() const { return width_; }
    int height() const { return height_; }

    bool get(int x, int y) const { return bits_[static_cast<std::size_t>(y) * width_ + x] != 0; }
    void set(int x, int y, bool v = true) {
        bits_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0;
    }

    bool inside(int x, int y) const { return x >= 0 && x < width_ && y >= 0 && y < height_; }

    std::size_t count() const;

    std::vector<std::uint8_t>& bits() { return bits_; }
    const std::vector<std::uint8_t>& bits() const { return bits_; }

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bits_;
};

/// 8-connected component of a mask.
struct Component {
    std::vector<Pixel> pixels;
    std::size_t area = 0;
    Point centroid;
};

/// Upper level set [plane >= iota].
BinaryMask upper_level_set(const GrayPlane& plane, double iota);

/// Bi-level set [|plane - seedValue| <= delta].
BinaryMask bilevel_set(const GrayPlane& plane, double seedValue, double delta);

/// All maximal 8-connected components, ordered by decreasing area with ties
/// broken by the raster-first pixel.
std::vector<Component> connected_components(const BinaryMask& mask);

/// The 8-connected component containing p, or nullopt when p is unset.
/// Throws OutOfBoundsError when p lies outside the mask domain.
std::optional<Component> component_containing(const BinaryMask& mask, Pixel p);

/// Lattice offsets of the disc structuring element {(dx,dy) : dx^2+dy^2 <= r^2}.
std::vector<Pixel> disc_offsets(double radius);

/// Erosion with the disc element; pixels outside the domain count as unset.
BinaryMask erosion(const BinaryMask& mask, double radius);

/// Minkowski dilation with the disc element, clipped to the domain.
BinaryMask dilation(const BinaryMask& mask, double radius);

/// Morphological opening: erosion followed by dilation.
BinaryMask opening(const BinaryMask& mask, double radius);

}  // namespace flarespot
