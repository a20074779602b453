#pragma once

#include <vector>

#include "flarespot/image.hpp"

namespace flarespot {

/// One Gaussian-blurred plane of the pyramid.
struct ScaleLevel {
    double sigma = 0.0;
    GrayPlane plane;
};

/// Gaussian scale space plus its difference-of-Gaussians planes.
///
/// Levels sit at sigma = sigmaMin * k^i at full image resolution, up to the
/// first level >= sigmaMax plus one extra, so every in-range scale has a DoG
/// neighbor above and below. dogs[i] = levels[i+1] - levels[i], assigned the
/// lower sigma of the pair.
struct ScaleSpace {
    std::vector<ScaleLevel> levels;
    std::vector<ScaleLevel> dogs;
};

/// Blob candidate: a strict scale-space minimum of the DoG.
struct Keypoint {
    Pixel position;
    int scaleIndex = 0;    // index into ScaleSpace::dogs
    double sigma = 0.0;    // dogs[scaleIndex].sigma
    double response = 0.0; // DoG value at the extremum (negative for bright blobs)
    double lambda1 = 0.0;  // Hessian eigenvalues of D at the extremum, lambda1 <= lambda2
    double lambda2 = 0.0;
};

/// Separable Gaussian blur, kernel truncated at 4*sigma and normalized to
/// unit sum; borders are handled by reflection.
GrayPlane gaussian_blur(const GrayPlane& src, double sigma);

/// Build the DoG scale space of a gray plane.
/// Throws ImageTooSmallError when min(width, height) < 4*sigmaMin.
ScaleSpace build_scalespace(const GrayPlane& gray, double sigmaMin, double sigmaMax, double k);

/// Strict 26-neighborhood minima of the DoG with negative response.
/// Pixels within one pixel of the spatial border and the outermost scales are
/// excluded. Hessian eigenvalues are computed by central differences on the
/// DoG plane of the extremum. Output is ordered by (scale index, raster
/// position).
std::vector<Keypoint> detect_keypoints(const ScaleSpace& ss);

/// Accept a keypoint iff lambda1 > 0 and lambda2 < 4*lambda1 (both strict):
/// a genuine strict minimum that is not overly elongated.
bool elongation_ok(const Keypoint& kp);

}  // namespace flarespot
