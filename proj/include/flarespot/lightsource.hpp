#pragma once

#include <vector>

#include "flarespot/image.hpp"
#include "flarespot/morphology.hpp"

namespace flarespot {

/// A bright region of the image likely to be a light source.
struct LightSource {
    Component region;
    Point centroid;
    std::size_t area = 0;
};

/// Detect light sources as the connected components of the upper level set
/// [u^L >= iota] after an opening with a disc of radius 1.5. The largest
/// component is always kept; other components are kept when their area is at
/// least secondaryRatio times the largest. At most maxSources sources are
/// returned, largest first. An empty result is a valid outcome.
std::vector<LightSource> find_light_sources(const LabImage& lab, double iota,
                                            double secondaryRatio,
                                            double openingRadius = 1.5,
                                            std::size_t maxSources = 8);

}  // namespace flarespot
