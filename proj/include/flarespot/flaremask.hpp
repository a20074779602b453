#pragma once

#include <optional>
#include <vector>

#include "flarespot/detector.hpp"
#include "flarespot/image.hpp"
#include "flarespot/morphology.hpp"

namespace flarespot {

/// Binary flare region grown from one detection.
struct FlareRegion {
    BinaryMask mask;
    FlareDetection detection;
};

/// Grow the flare region of a detection:
///   1. the connected component of the bi-level set of u^L around the flare
///      point (radius delta),
///   2. dilated with a disc of radius epsilon,
///   3. intersected with the upper level set [u^L_norm >= alpha], where
///      u^L_norm is normalized over the given search window.
/// Returns nullopt when the intersection is empty (the detection is dropped).
std::optional<FlareRegion> build_flare_region(const LabImage& lab, const FlareDetection& det,
                                              double delta, double epsilon, double alpha,
                                              const Window& window);

/// Pixel-wise union of region masks.
BinaryMask merge_masks(const std::vector<FlareRegion>& regions, int width, int height);

}  // namespace flarespot
