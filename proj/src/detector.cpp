#include "flarespot/detector.hpp"

#include <algorithm>
#include <cmath>

#include "flarespot/color.hpp"

namespace flarespot {

namespace {

double norm2(double x, double y) { return std::sqrt(x * x + y * y); }

// Min-max normalize one term over the candidate set; a constant term carries
// no ranking information and normalizes to zero.
void normalize_term(std::vector<Candidate>& cands, double Candidate::* raw,
                    double Candidate::* norm) {
    double lo = cands.front().*raw;
    double hi = lo;
    for (const Candidate& c : cands) {
        lo = std::min(lo, c.*raw);
        hi = std::max(hi, c.*raw);
    }
    if (hi == lo) {
        for (Candidate& c : cands) c.*norm = 0.0;
        return;
    }
    for (Candidate& c : cands) c.*norm = (c.*raw - lo) / (hi - lo);
}

}  // namespace

Window search_window(const LightSource& source, int imageWidth, int imageHeight,
                     double fraction) {
    const double cx = (imageWidth - 1) / 2.0;
    const double cy = (imageHeight - 1) / 2.0;
    Window w;
    w.center.x = std::clamp(2.0 * cx - source.centroid.x, 0.0, imageWidth - 1.0);
    w.center.y = std::clamp(2.0 * cy - source.centroid.y, 0.0, imageHeight - 1.0);
    w.radius = fraction * std::max(imageWidth, imageHeight);
    return w;
}

bool bounded_area_ok(const LabImage& lab, const Keypoint& kp, const LightSource& source,
                     double delta) {
    const double seed = lab.L.at(kp.position.x, kp.position.y);
    const BinaryMask similar = bilevel_set(lab.L, seed, delta);
    const auto comp = component_containing(similar, kp.position);
    if (!comp) return false;  // cannot happen: the seed pixel always matches itself
    return static_cast<double>(comp->area) < static_cast<double>(source.area) / 100.0;
}

bool overexposure_ok(const GrayPlane& labNorm, const Rect& windowRect, const Keypoint& kp,
                     double beta) {
    if (!windowRect.contains(kp.position.x, kp.position.y))
        throw OutOfWindowError("keypoint outside the search window");
    const double v = labNorm.at(kp.position.x - windowRect.x0, kp.position.y - windowRect.y0);
    return v > beta;
}

ConfidenceTerms confidence_terms(const LabImage& lab, const Keypoint& kp,
                                 const LightSource& source) {
    const double cx = (lab.width() - 1) / 2.0;
    const double cy = (lab.height() - 1) / 2.0;
    const double sx = source.centroid.x;
    const double sy = source.centroid.y;
    const double kx = kp.position.x;
    const double ky = kp.position.y;

    ConfidenceTerms t;
    t.e1 = std::abs(norm2(cx - sx, cy - sy) - norm2(cx - kx, cy - ky));

    // Distance from the keypoint to the line through the source centroid and
    // the image center, via the cross-product form (no vertical-line
    // singularity). Degenerate when the source sits at the center.
    const double dx = cx - sx;
    const double dy = cy - sy;
    const double len = norm2(dx, dy);
    if (len < 1e-12) {
        t.e2 = norm2(kx - cx, ky - cy);
    } else {
        t.e2 = std::abs(dx * (ky - sy) - dy * (kx - sx)) / len;
    }

    t.e3 = lab.L.at(kp.position.x, kp.position.y) - lab.a.at(kp.position.x, kp.position.y);
    return t;
}

std::optional<std::size_t> select_flare(std::vector<Candidate>& cands) {
    if (cands.empty()) return std::nullopt;

    normalize_term(cands, &Candidate::e1, &Candidate::e1n);
    normalize_term(cands, &Candidate::e2, &Candidate::e2n);
    normalize_term(cands, &Candidate::e3, &Candidate::e3n);

    std::size_t best = 0;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        Candidate& c = cands[i];
        c.energy = (c.e1n + c.e2n) / 2.0 - c.e3n;
        c.confidence = std::exp(-c.energy);
        if (i == 0) continue;
        if (c.energy < cands[best].energy ||
            (c.energy == cands[best].energy && c.e1 < cands[best].e1)) {
            best = i;
        }
    }
    return best;
}

std::vector<FlareDetection> detect_all(const LabImage& lab, const PipelineParams& params,
                                       std::size_t* numSources) {
    std::vector<FlareDetection> out;

    const std::vector<LightSource> sources = find_light_sources(
        lab, params.iota, params.secondaryRatio, params.openingRadius, params.maxSources);
    if (numSources != nullptr) *numSources = sources.size();
    if (sources.empty()) return out;

    const ScaleSpace ss = build_scalespace(lab.L, params.sigmaMin, params.sigmaMax, params.k);
    const std::vector<Keypoint> keypoints = detect_keypoints(ss);

    for (const LightSource& source : sources) {
        const Window win = search_window(source, lab.width(), lab.height(),
                                         params.windowFraction);
        const Rect rect = window_rect(win, lab.width(), lab.height());
        if (rect.empty()) continue;
        const GrayPlane norm = normalize_window(lab.L, win);

        std::vector<Candidate> cands;
        for (const Keypoint& kp : keypoints) {
            if (!win.contains(kp.position.x, kp.position.y)) continue;
            if (!elongation_ok(kp)) continue;
            if (!bounded_area_ok(lab, kp, source, params.delta)) continue;
            if (!overexposure_ok(norm, rect, kp, params.beta)) continue;

            Candidate c;
            c.keypoint = kp;
            const ConfidenceTerms t = confidence_terms(lab, kp, source);
            c.e1 = t.e1;
            c.e2 = t.e2;
            c.e3 = t.e3;
            cands.push_back(c);
        }

        const auto best = select_flare(cands);
        if (!best) continue;

        FlareDetection det;
        det.source = source;
        det.candidate = cands[*best];
        det.flarePoint = det.candidate.keypoint.position;
        det.scale = det.candidate.keypoint.sigma;
        det.confidence = det.candidate.confidence;
        out.push_back(std::move(det));
    }
    return out;
}

std::vector<FlareDetection> detect_all(const RgbImage& img, const PipelineParams& params) {
    return detect_all(rgb_to_lab(img), params);
}

}  // namespace flarespot
