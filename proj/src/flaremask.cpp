#include "flarespot/flaremask.hpp"

#include <algorithm>

namespace flarespot {

std::optional<FlareRegion> build_flare_region(const LabImage& lab, const FlareDetection& det,
                                              double delta, double epsilon, double alpha,
                                              const Window& window) {
    const Pixel fs = det.flarePoint;
    const double seed = lab.L.at(fs.x, fs.y);

    const BinaryMask similar = bilevel_set(lab.L, seed, delta);
    const auto comp = component_containing(similar, fs);
    if (!comp) return std::nullopt;

    BinaryMask core(lab.width(), lab.height());
    for (const Pixel& p : comp->pixels) core.set(p.x, p.y);
    const BinaryMask grown = dilation(core, epsilon);

    // Level set [u^L_norm >= alpha] with u^L_norm normalized over the search
    // window: equivalent to thresholding raw luminance at
    // min_w + alpha * (max_w - min_w).
    const Rect rect = window_rect(window, lab.width(), lab.height());
    if (rect.empty()) throw EmptyWindowError("flare mask window outside the image domain");
    double lo = lab.L.at(rect.x0, rect.y0);
    double hi = lo;
    for (int y = rect.y0; y <= rect.y1; ++y) {
        for (int x = rect.x0; x <= rect.x1; ++x) {
            lo = std::min(lo, lab.L.at(x, y));
            hi = std::max(hi, lab.L.at(x, y));
        }
    }

    BinaryMask flare(lab.width(), lab.height());
    bool any = false;
    if (hi == lo) {
        // Degenerate window: u^L_norm is identically zero.
        if (alpha <= 0.0) {
            flare = grown;
            any = flare.count() > 0;
        }
    } else {
        const double threshold = lo + alpha * (hi - lo);
        for (int y = 0; y < lab.height(); ++y) {
            for (int x = 0; x < lab.width(); ++x) {
                if (grown.get(x, y) && lab.L.at(x, y) >= threshold) {
                    flare.set(x, y);
                    any = true;
                }
            }
        }
    }
    if (!any) return std::nullopt;

    return FlareRegion{std::move(flare), det};
}

BinaryMask merge_masks(const std::vector<FlareRegion>& regions, int width, int height) {
    BinaryMask out(width, height);
    for (const FlareRegion& r : regions)
        for (std::size_t i = 0; i < out.bits().size(); ++i)
            out.bits()[i] |= r.mask.bits()[i];
    return out;
}

}  // namespace flarespot
