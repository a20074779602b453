#include "flarespot/morphology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace flarespot {

namespace {

Component flood_component(const BinaryMask& mask, Pixel seed, std::vector<std::uint8_t>& visited) {
    const int w = mask.width();
    Component comp;
    std::vector<Pixel> stack{seed};
    visited[static_cast<std::size_t>(seed.y) * w + seed.x] = 1;
    while (!stack.empty()) {
        const Pixel p = stack.back();
        stack.pop_back();
        comp.pixels.push_back(p);
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                const int nx = p.x + dx;
                const int ny = p.y + dy;
                if (!mask.inside(nx, ny)) continue;
                const std::size_t idx = static_cast<std::size_t>(ny) * w + nx;
                if (visited[idx] || !mask.get(nx, ny)) continue;
                visited[idx] = 1;
                stack.push_back({nx, ny});
            }
        }
    }
    comp.area = comp.pixels.size();
    double sx = 0.0, sy = 0.0;
    for (const Pixel& p : comp.pixels) {
        sx += p.x;
        sy += p.y;
    }
    comp.centroid = {sx / comp.area, sy / comp.area};
    return comp;
}

std::size_t raster_index(const Component& c, int width) {
    std::size_t best = static_cast<std::size_t>(-1);
    for (const Pixel& p : c.pixels)
        best = std::min(best, static_cast<std::size_t>(p.y) * width + p.x);
    return best;
}

}  // namespace

std::size_t BinaryMask::count() const {
    return static_cast<std::size_t>(std::accumulate(bits_.begin(), bits_.end(), 0LL));
}

BinaryMask upper_level_set(const GrayPlane& plane, double iota) {
    BinaryMask out(plane.width(), plane.height());
    const std::size_t n = plane.values().size();
    for (std::size_t i = 0; i < n; ++i)
        out.bits()[i] = plane.values()[i] >= iota ? 1 : 0;
    return out;
}

BinaryMask bilevel_set(const GrayPlane& plane, double seedValue, double delta) {
    BinaryMask out(plane.width(), plane.height());
    const std::size_t n = plane.values().size();
    for (std::size_t i = 0; i < n; ++i)
        out.bits()[i] = std::abs(plane.values()[i] - seedValue) <= delta ? 1 : 0;
    return out;
}

std::vector<Component> connected_components(const BinaryMask& mask) {
    std::vector<Component> comps;
    std::vector<std::uint8_t> visited(mask.bits().size(), 0);
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            const std::size_t idx = static_cast<std::size_t>(y) * mask.width() + x;
            if (!mask.get(x, y) || visited[idx]) continue;
            comps.push_back(flood_component(mask, {x, y}, visited));
        }
    }
    std::sort(comps.begin(), comps.end(), [&](const Component& a, const Component& b) {
        if (a.area != b.area) return a.area > b.area;
        return raster_index(a, mask.width()) < raster_index(b, mask.width());
    });
    return comps;
}

std::optional<Component> component_containing(const BinaryMask& mask, Pixel p) {
    if (!mask.inside(p.x, p.y))
        throw OutOfBoundsError("component_containing: pixel outside the mask domain");
    if (!mask.get(p.x, p.y))
        return std::nullopt;
    std::vector<std::uint8_t> visited(mask.bits().size(), 0);
    return flood_component(mask, p, visited);
}

std::vector<Pixel> disc_offsets(double radius) {
    const int r = static_cast<int>(std::floor(radius));
    const double r2 = radius * radius;
    std::vector<Pixel> offs;
    for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx)
            if (dx * dx + dy * dy <= r2) offs.push_back({dx, dy});
    return offs;
}

BinaryMask erosion(const BinaryMask& mask, double radius) {
    const auto offs = disc_offsets(radius);
    BinaryMask out(mask.width(), mask.height());
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            bool all = true;
            for (const Pixel& d : offs) {
                const int nx = x + d.x;
                const int ny = y + d.y;
                if (!mask.inside(nx, ny) || !mask.get(nx, ny)) {
                    all = false;
                    break;
                }
            }
            if (all) out.set(x, y);
        }
    }
    return out;
}

BinaryMask dilation(const BinaryMask& mask, double radius) {
    const auto offs = disc_offsets(radius);
    BinaryMask out(mask.width(), mask.height());
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask.get(x, y)) continue;
            for (const Pixel& d : offs) {
                const int nx = x + d.x;
                const int ny = y + d.y;
                if (mask.inside(nx, ny)) out.set(nx, ny);
            }
        }
    }
    return out;
}

BinaryMask opening(const BinaryMask& mask, double radius) {
    return dilation(erosion(mask, radius), radius);
}

}  // namespace flarespot
