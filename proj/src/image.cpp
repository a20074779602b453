#include "flarespot/image.hpp"

#include <algorithm>
#include <cmath>

namespace flarespot {

Rect window_rect(const Window& w, int imageWidth, int imageHeight) {
    Rect r;
    r.x0 = std::max(0, static_cast<int>(std::ceil(w.center.x - w.radius)));
    r.y0 = std::max(0, static_cast<int>(std::ceil(w.center.y - w.radius)));
    r.x1 = std::min(imageWidth - 1, static_cast<int>(std::floor(w.center.x + w.radius)));
    r.y1 = std::min(imageHeight - 1, static_cast<int>(std::floor(w.center.y + w.radius)));
    return r;
}

GrayPlane normalize_window(const GrayPlane& plane, const Window& w) {
    const Rect r = window_rect(w, plane.width(), plane.height());
    if (r.empty())
        throw EmptyWindowError("window does not intersect the image domain");

    double lo = plane.at(r.x0, r.y0);
    double hi = lo;
    for (int y = r.y0; y <= r.y1; ++y) {
        for (int x = r.x0; x <= r.x1; ++x) {
            const double v = plane.at(x, y);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }

    GrayPlane out(r.width(), r.height());
    if (hi == lo)
        return out;  // constant window: all zeros

    const double scale = 1.0 / (hi - lo);
    for (int y = r.y0; y <= r.y1; ++y)
        for (int x = r.x0; x <= r.x1; ++x)
            out.at(x - r.x0, y - r.y0) = (plane.at(x, y) - lo) * scale;
    return out;
}

}  // namespace flarespot
