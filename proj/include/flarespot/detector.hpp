#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "flarespot/image.hpp"
#include "flarespot/lightsource.hpp"
#include "flarespot/scalespace.hpp"

namespace flarespot {

/// Fixed pipeline parameters. Defaults are the values used for every
/// experiment; they are not image-dependent.
struct PipelineParams {
    double iota = 99.0;           // light-source level set threshold on u^L
    double sigmaMin = 3.0;        // scale-space range
    double sigmaMax = 15.0;
    double delta = 10.0;          // bi-level set radius
    double beta = 0.7;            // overexposure threshold on normalized luminance
    double epsilon = 5.0;         // flare mask dilation radius
    double alpha = 0.2;           // flare mask level set threshold
    double k = std::pow(2.0, 1.0 / 5.0);  // scale ladder ratio
    double windowFraction = 0.2;  // search window radius as a fraction of max(w, h)
    double secondaryRatio = 0.8;  // secondary light source area ratio
    double openingRadius = 1.5;   // light-source mask opening
    std::size_t maxSources = 8;
};

/// A keypoint surviving the filter cascade, with its confidence terms.
/// e1: radial-distance mismatch; e2: distance to the source-center line;
/// e3: L - a* at the keypoint. The *n fields are the min-max normalized
/// versions over one light source's candidate set, and
/// energy = (e1n + e2n)/2 - e3n, confidence = exp(-energy).
struct Candidate {
    Keypoint keypoint;
    double e1 = 0.0, e2 = 0.0, e3 = 0.0;
    double e1n = 0.0, e2n = 0.0, e3n = 0.0;
    double energy = 0.0;
    double confidence = 1.0;
};

/// The selected flare spot for one light source.
struct FlareDetection {
    LightSource source;
    Pixel flarePoint;
    double scale = 0.0;
    double confidence = 0.0;
    Candidate candidate;  // selected candidate with raw and normalized terms
};

/// Search window centered at the point reflection of the source centroid
/// through the image center ((w-1)/2, (h-1)/2), radius = fraction * max(w, h).
/// The center is clamped to the image domain.
Window search_window(const LightSource& source, int imageWidth, int imageHeight,
                     double fraction);

/// Bounded-area test: the connected component of the bi-level set of u^L
/// around the keypoint must cover less than 1% of the source area (strict).
bool bounded_area_ok(const LabImage& lab, const Keypoint& kp, const LightSource& source,
                     double delta);

/// Overexposure test: normalized luminance at the keypoint must exceed beta
/// (strict). labNorm holds the window-normalized values over windowRect.
/// Throws OutOfWindowError when the keypoint lies outside the window.
bool overexposure_ok(const GrayPlane& labNorm, const Rect& windowRect, const Keypoint& kp,
                     double beta);

/// Raw confidence terms (e1, e2, e3) for a keypoint relative to a source.
/// When the source centroid coincides with the image center the line through
/// them is undefined and e2 falls back to the radial distance |x_k - x_c|.
struct ConfidenceTerms {
    double e1 = 0.0;
    double e2 = 0.0;
    double e3 = 0.0;
};
ConfidenceTerms confidence_terms(const LabImage& lab, const Keypoint& kp,
                                 const LightSource& source);

/// Normalize the confidence terms across the candidate set (degenerate terms
/// normalize to 0), fill energies, and return the index of the candidate
/// maximizing exp(-E). Ties break by smaller raw e1, then input order (which
/// is raster order). Returns nullopt for an empty set.
std::optional<std::size_t> select_flare(std::vector<Candidate>& cands);

/// Full detection pass: light sources, one scale-space over the image, and
/// per-source filter cascade (elongation, bounded area, overexposure) followed
/// by confidence maximization. At most one detection per light source,
/// ordered like the sources (area-descending).
std::vector<FlareDetection> detect_all(const RgbImage& img, const PipelineParams& params);

/// Same pass starting from a precomputed Lab image. When numSources is
/// non-null it receives the number of light sources found.
std::vector<FlareDetection> detect_all(const LabImage& lab, const PipelineParams& params,
                                       std::size_t* numSources = nullptr);

}  // namespace flarespot
