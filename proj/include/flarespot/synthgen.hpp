#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "flarespot/evaluate.hpp"
#include "flarespot/image.hpp"

namespace flarespot {

enum class BackgroundKind { Flat, Gradient, Texture };

struct SourceSpec {
    Point center;
    double radius = 40.0;
    double L = 100.0;
};

/// A planted flare: a Gaussian bump in Lab space at (roughly) the point
/// reflection of its source through the image center.
struct FlareSpec {
    Point center;
    double radiusPx = 12.0;  // nominal support radius (~3 sigma)
    double peakL = 85.0;     // bump peak luminance; below the source L
    double aStar = -20.0;    // negative: blue-to-green chroma
    double bStar = 0.0;
    double sigma = 4.5;      // Gaussian falloff
};

/// Full synthetic scene description. Rendering is deterministic in rngSeed.
struct SceneSpec {
    int width = 256;
    int height = 256;
    BackgroundKind background = BackgroundKind::Flat;
    double bgL = 55.0;
    double bgA = 0.0;
    double bgB = 0.0;
    double gradientAmp = 0.0;    // peak-to-center luminance ramp (Gradient)
    std::uint32_t textureSeed = 0;
    double textureAmp = 0.0;     // cosine-bump amplitude (Texture)
    std::vector<SourceSpec> sources;
    std::vector<FlareSpec> flares;
    double noiseSigma = 0.0;     // additive Gaussian RGB noise, 8-bit units
    std::uint64_t rngSeed = 1;
};

/// Render the scene and its exact ground truth. The GT mask marks pixels
/// where a flare bump raises luminance by at least 2 units over the
/// background. Throws OutOfGamutError when a flare color leaves the sRGB
/// gamut after conversion.
std::pair<RgbImage, GroundTruth> render(const SceneSpec& spec);

/// Knobs for random scene sampling.
struct SceneOptions {
    int width = 256;
    int height = 256;
    int numSources = 1;      // 1 or 2
    bool withFlares = true;  // false: negative-control scene
    int background = -1;     // -1 random, else BackgroundKind index
};

/// Sample a random scene honoring the geometric constraints the detector
/// characterization assumes: mirrored flare placement with at most 5% of
/// max(w, h) jitter, flare chroma with negative a*, peak luminance below the
/// source, and search windows free of foreign light sources.
SceneSpec make_random_scene(std::mt19937_64& rng, const SceneOptions& options = {});

}  // namespace flarespot
