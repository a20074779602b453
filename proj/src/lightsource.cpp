#include "flarespot/lightsource.hpp"

namespace flarespot {

std::vector<LightSource> find_light_sources(const LabImage& lab, double iota,
                                            double secondaryRatio, double openingRadius,
                                            std::size_t maxSources) {
    const BinaryMask bright = opening(upper_level_set(lab.L, iota), openingRadius);
    std::vector<Component> comps = connected_components(bright);

    std::vector<LightSource> out;
    if (comps.empty()) return out;

    const double minArea = secondaryRatio * static_cast<double>(comps.front().area);
    for (Component& c : comps) {
        if (static_cast<double>(c.area) < minArea) break;  // components are area-sorted
        if (out.size() >= maxSources) break;
        LightSource s;
        s.centroid = c.centroid;
        s.area = c.area;
        s.region = std::move(c);
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace flarespot
