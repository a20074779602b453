#include "flarespot/synthgen.hpp"

#include <algorithm>
#include <cmath>

#include "flarespot/color.hpp"

namespace flarespot {

namespace {

struct TextureBump {
    double cx, cy, wavelength, amp, phase;
};

std::vector<TextureBump> texture_bumps(std::uint32_t seed, int w, int h, double amp) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> ux(0.0, w - 1.0);
    std::uniform_real_distribution<double> uy(0.0, h - 1.0);
    std::uniform_real_distribution<double> uw(40.0, 110.0);
    std::uniform_real_distribution<double> ua(0.35, 1.0);
    std::uniform_real_distribution<double> up(0.0, 6.283185307179586);
    std::vector<TextureBump> bumps(5);
    for (TextureBump& b : bumps)
        b = {ux(rng), uy(rng), uw(rng), amp * ua(rng), up(rng)};
    return bumps;
}

double background_L(const SceneSpec& spec, const std::vector<TextureBump>& bumps, double x,
                    double y) {
    switch (spec.background) {
        case BackgroundKind::Flat:
            return spec.bgL;
        case BackgroundKind::Gradient:
            return spec.bgL + spec.gradientAmp * (2.0 * y / (spec.height - 1.0) - 1.0);
        case BackgroundKind::Texture: {
            double v = spec.bgL;
            for (const TextureBump& b : bumps) {
                const double d = std::hypot(x - b.cx, y - b.cy);
                v += b.amp * std::cos(6.283185307179586 * d / b.wavelength + b.phase);
            }
            return v;
        }
    }
    return spec.bgL;
}

double chebyshev(const Point& a, const Point& b) {
    return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

bool flare_color_in_gamut(double peakL, double aStar, double bStar, double bgL, double bgA,
                          double bgB) {
    // Check the peak color and a few blend points along the bump profile.
    for (double g : {1.0, 0.75, 0.5, 0.25}) {
        const double L = bgL + (peakL - bgL) * g;
        const double a = bgA + (aStar - bgA) * g;
        const double b = bgB + (bStar - bgB) * g;
        bool ok = false;
        lab_to_rgb(L, a, b, &ok);
        if (!ok) return false;
    }
    return true;
}

}  // namespace

std::pair<RgbImage, GroundTruth> render(const SceneSpec& spec) {
    const int w = spec.width;
    const int h = spec.height;
    const std::vector<TextureBump> bumps =
        spec.background == BackgroundKind::Texture
            ? texture_bumps(spec.textureSeed, w, h, spec.textureAmp)
            : std::vector<TextureBump>{};

    RgbImage img(w, h);
    GroundTruth gt;
    gt.flareMask = BinaryMask(w, h);
    for (const FlareSpec& f : spec.flares) gt.flarePoints.push_back(f.center);

    std::mt19937_64 rng(spec.rngSeed);
    std::normal_distribution<double> noise(0.0, spec.noiseSigma);

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double bgL = background_L(spec, bumps, x, y);
            double L = bgL;
            double a = spec.bgA;
            double b = spec.bgB;

            double raise = 0.0;
            double flareWeight = 0.0;
            for (const FlareSpec& f : spec.flares) {
                const double dx = x - f.center.x;
                const double dy = y - f.center.y;
                const double g = std::exp(-(dx * dx + dy * dy) / (2.0 * f.sigma * f.sigma));
                raise = std::max(raise, (f.peakL - bgL) * g);
                flareWeight = std::max(flareWeight, g);
                L += (f.peakL - L) * g;
                a += (f.aStar - a) * g;
                b += (f.bStar - b) * g;
            }
            if (raise >= 2.0) gt.flareMask.set(x, y);

            for (const SourceSpec& s : spec.sources) {
                const double d = std::hypot(x - s.center.x, y - s.center.y);
                const double cov = std::clamp(s.radius + 0.5 - d, 0.0, 1.0);
                L += (s.L - L) * cov;
                a *= 1.0 - cov;
                b *= 1.0 - cov;
            }

            bool inGamut = true;
            const auto rgb = lab_to_rgb(L, a, b, &inGamut);
            if (!inGamut && flareWeight > 0.01)
                throw OutOfGamutError("flare color leaves the sRGB gamut");
            for (int c = 0; c < 3; ++c) {
                double v = rgb[c];
                if (spec.noiseSigma > 0.0) v += noise(rng);
                img.at(x, y, c) =
                    static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
            }
        }
    }
    return {std::move(img), std::move(gt)};
}

SceneSpec make_random_scene(std::mt19937_64& rng, const SceneOptions& options) {
    const int w = options.width;
    const int h = options.height;
    const double maxDim = std::max(w, h);
    const double windowRadius = maxDim / 5.0;
    const double jitterMax = 0.04 * maxDim;

    auto uniform = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };

    SceneSpec spec;
    spec.width = w;
    spec.height = h;
    const int bgPick = options.background >= 0
                           ? options.background
                           : std::uniform_int_distribution<int>(0, 2)(rng);
    spec.background = static_cast<BackgroundKind>(bgPick);
    spec.bgL = uniform(52.0, 62.0);
    spec.bgA = uniform(-5.0, 5.0);
    spec.bgB = uniform(-5.0, 5.0);
    if (spec.background == BackgroundKind::Gradient) spec.gradientAmp = uniform(1.5, 4.0);
    if (spec.background == BackgroundKind::Texture) {
        spec.textureAmp = uniform(1.0, 3.0);
        spec.textureSeed = static_cast<std::uint32_t>(rng());
    }
    spec.noiseSigma = uniform(0.5, 2.0);
    spec.rngSeed = rng();

    const std::vector<TextureBump> bumps =
        spec.background == BackgroundKind::Texture
            ? texture_bumps(spec.textureSeed, w, h, spec.textureAmp)
            : std::vector<TextureBump>{};

    const int n = std::clamp(options.numSources, 1, 2);
    const Point imageCenter{(w - 1) / 2.0, (h - 1) / 2.0};

    // Rejection-sample the scene geometry: discs inside the domain, mirrored
    // windows clear of every source disc and of the other source's flare.
    for (int attempt = 0; attempt < 1000; ++attempt) {
        spec.sources.clear();
        spec.flares.clear();

        std::vector<double> radii;
        radii.push_back(uniform(42.0, n == 1 ? 50.0 : 47.0));
        if (n == 2) radii.push_back(radii[0] * uniform(0.93, 1.0));

        bool ok = true;
        std::vector<Point> mirrors;
        for (int i = 0; i < n && ok; ++i) {
            const double r = radii[i];
            const double margin = r + 6.0;
            const Point c{uniform(margin, w - 1 - margin), uniform(margin, h - 1 - margin)};
            // The source's own search window must not reach back to its disc.
            if (chebyshev(c, imageCenter) < (windowRadius + r + 4.0) / 2.0) {
                ok = false;
                break;
            }
            for (std::size_t j = 0; j < spec.sources.size(); ++j) {
                const double dd = std::hypot(c.x - spec.sources[j].center.x,
                                             c.y - spec.sources[j].center.y);
                if (dd < r + spec.sources[j].radius + 12.0) ok = false;
            }
            if (!ok) break;
            spec.sources.push_back({c, r, 100.0});
            mirrors.push_back({2.0 * imageCenter.x - c.x, 2.0 * imageCenter.y - c.y});
        }
        if (!ok) continue;

        // No window may contain a foreign source disc.
        for (int i = 0; i < n && ok; ++i)
            for (int j = 0; j < n; ++j)
                if (chebyshev(mirrors[i], spec.sources[j].center) <
                    windowRadius + spec.sources[j].radius + 4.0)
                    ok = false;
        if (!ok) continue;

        if (options.withFlares) {
            for (int i = 0; i < n && ok; ++i) {
                const double r = spec.sources[i].radius;
                FlareSpec f;
                f.sigma = std::clamp(r * uniform(0.080, 0.092), 3.8, 5.0);
                f.radiusPx = 3.0 * f.sigma;

                const double jr = jitterMax * std::sqrt(uniform(0.0, 1.0));
                const double ja = uniform(0.0, 6.283185307179586);
                f.center = {mirrors[i].x + jr * std::cos(ja), mirrors[i].y + jr * std::sin(ja)};

                const double support = f.radiusPx + 3.0;
                if (f.center.x < support || f.center.x > w - 1 - support ||
                    f.center.y < support || f.center.y > h - 1 - support) {
                    ok = false;
                    break;
                }
                for (const SourceSpec& s : spec.sources)
                    if (std::hypot(f.center.x - s.center.x, f.center.y - s.center.y) <
                        s.radius + support + 8.0)
                        ok = false;
                for (const FlareSpec& other : spec.flares)
                    if (std::hypot(f.center.x - other.center.x, f.center.y - other.center.y) <
                        3.0 * (f.sigma + other.sigma) + 8.0)
                        ok = false;
                // Foreign windows must not contain this flare.
                for (int j = 0; j < n; ++j)
                    if (j != i && chebyshev(mirrors[j], f.center) < windowRadius + support)
                        ok = false;
                if (!ok) break;

                const double bgLocal = background_L(spec, bumps, f.center.x, f.center.y);
                f.peakL = std::clamp(bgLocal + uniform(28.0, 31.0), 80.0, 98.0);
                for (int tries = 0; tries < 64; ++tries) {
                    f.aStar = uniform(-40.0, -5.0);
                    f.bStar = uniform(-30.0, 30.0);
                    if (flare_color_in_gamut(f.peakL, f.aStar, f.bStar, spec.bgL, spec.bgA,
                                             spec.bgB))
                        break;
                    if (tries == 63) ok = false;
                }
                if (ok) spec.flares.push_back(f);
            }
            if (ok && spec.flares.size() != static_cast<std::size_t>(n)) ok = false;
        }
        if (ok) return spec;
    }
    throw Error("make_random_scene: could not satisfy scene constraints");
}

}  // namespace flarespot
