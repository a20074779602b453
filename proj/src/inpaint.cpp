#include "flarespot/inpaint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace flarespot {

namespace {

constexpr std::size_t kExhaustiveLimit = 10000;

// Per-scale patch geometry: which centers are valid targets (patch intersects
// the hole) and which are valid sources (patch fully known), both restricted
// to patches fully inside the domain.
struct PatchContext {
    int w = 0, h = 0, half = 0, side = 0;
    std::vector<std::uint8_t> isTarget;
    std::vector<std::uint8_t> isCandidate;
    std::vector<Pixel> candidates;

    bool candidateOk(int x, int y) const {
        return x >= half && x < w - half && y >= half && y < h - half &&
               isCandidate[static_cast<std::size_t>(y) * w + x] != 0;
    }
};

PatchContext make_context(const BinaryMask& hole, int patchSide) {
    PatchContext ctx;
    ctx.w = hole.width();
    ctx.h = hole.height();
    ctx.side = patchSide;
    ctx.half = patchSide / 2;
    ctx.isTarget.assign(static_cast<std::size_t>(ctx.w) * ctx.h, 0);
    ctx.isCandidate.assign(static_cast<std::size_t>(ctx.w) * ctx.h, 0);

    // Summed-area table of the hole for O(1) patch-overlap queries.
    std::vector<long long> sat(static_cast<std::size_t>(ctx.w + 1) * (ctx.h + 1), 0);
    for (int y = 0; y < ctx.h; ++y)
        for (int x = 0; x < ctx.w; ++x)
            sat[static_cast<std::size_t>(y + 1) * (ctx.w + 1) + x + 1] =
                sat[static_cast<std::size_t>(y) * (ctx.w + 1) + x + 1] +
                sat[static_cast<std::size_t>(y + 1) * (ctx.w + 1) + x] -
                sat[static_cast<std::size_t>(y) * (ctx.w + 1) + x] + (hole.get(x, y) ? 1 : 0);

    auto holeCount = [&](int x0, int y0, int x1, int y1) {
        return sat[static_cast<std::size_t>(y1 + 1) * (ctx.w + 1) + x1 + 1] -
               sat[static_cast<std::size_t>(y0) * (ctx.w + 1) + x1 + 1] -
               sat[static_cast<std::size_t>(y1 + 1) * (ctx.w + 1) + x0] +
               sat[static_cast<std::size_t>(y0) * (ctx.w + 1) + x0];
    };

    for (int y = ctx.half; y < ctx.h - ctx.half; ++y) {
        for (int x = ctx.half; x < ctx.w - ctx.half; ++x) {
            const long long overlap =
                holeCount(x - ctx.half, y - ctx.half, x + ctx.half, y + ctx.half);
            const std::size_t idx = static_cast<std::size_t>(y) * ctx.w + x;
            if (overlap > 0) {
                ctx.isTarget[idx] = 1;
            } else {
                ctx.isCandidate[idx] = 1;
                ctx.candidates.push_back({x, y});
            }
        }
    }
    return ctx;
}

double patch_distance(const RgbF& u, Pixel a, Pixel b, int half, double bailout) {
    double acc = 0.0;
    for (int dy = -half; dy <= half; ++dy) {
        const double* pa = &u.v[(static_cast<std::size_t>(a.y + dy) * u.width + a.x - half) * 3];
        const double* pb = &u.v[(static_cast<std::size_t>(b.y + dy) * u.width + b.x - half) * 3];
        const int n = (2 * half + 1) * 3;
        for (int i = 0; i < n; ++i) acc += std::abs(pa[i] - pb[i]);
        if (acc >= bailout) return acc;
    }
    return acc;
}

Pixel random_candidate(const PatchContext& ctx, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, ctx.candidates.size() - 1);
    return ctx.candidates[pick(rng)];
}

void try_improve(const RgbF& u, const PatchContext& ctx, PatchCorrespondence& e, Pixel cand) {
    if (cand == e.match) return;
    const double d = patch_distance(u, e.target, cand, ctx.half, e.dist);
    if (d < e.dist) {
        e.dist = d;
        e.match = cand;
    }
}

CorrespondenceMap search_pass(const RgbF& u, const PatchContext& ctx,
                              const CorrespondenceMap& phi, std::mt19937_64& rng) {
    CorrespondenceMap out = phi;
    const double inf = std::numeric_limits<double>::infinity();
    for (PatchCorrespondence& e : out.entries)
        e.dist = patch_distance(u, e.target, e.match, ctx.half, inf);

    if (ctx.candidates.size() < kExhaustiveLimit) {
        for (PatchCorrespondence& e : out.entries)
            for (const Pixel& cand : ctx.candidates) try_improve(u, ctx, e, cand);
        return out;
    }

    // PatchMatch: propagation in alternating raster order plus random search.
    std::vector<int> entryAt(static_cast<std::size_t>(ctx.w) * ctx.h, -1);
    for (std::size_t i = 0; i < out.entries.size(); ++i) {
        const Pixel t = out.entries[i].target;
        entryAt[static_cast<std::size_t>(t.y) * ctx.w + t.x] = static_cast<int>(i);
    }
    auto neighborEntry = [&](int x, int y) -> const PatchCorrespondence* {
        if (x < 0 || x >= ctx.w || y < 0 || y >= ctx.h) return nullptr;
        const int idx = entryAt[static_cast<std::size_t>(y) * ctx.w + x];
        return idx < 0 ? nullptr : &out.entries[idx];
    };

    const int maxRadius = std::max(ctx.w, ctx.h) / 2;
    for (int pass = 0; pass < 2; ++pass) {
        const bool forward = pass == 0;
        const int n = static_cast<int>(out.entries.size());
        for (int step = 0; step < n; ++step) {
            PatchCorrespondence& e = out.entries[forward ? step : n - 1 - step];
            const int dir = forward ? -1 : 1;
            if (const auto* ne = neighborEntry(e.target.x + dir, e.target.y)) {
                const Pixel cand{ne->match.x - dir, ne->match.y};
                if (ctx.candidateOk(cand.x, cand.y)) try_improve(u, ctx, e, cand);
            }
            if (const auto* ne = neighborEntry(e.target.x, e.target.y + dir)) {
                const Pixel cand{ne->match.x, ne->match.y - dir};
                if (ctx.candidateOk(cand.x, cand.y)) try_improve(u, ctx, e, cand);
            }
            for (int radius = maxRadius; radius >= 1; radius /= 2) {
                std::uniform_int_distribution<int> jitter(-radius, radius);
                const Pixel cand{e.match.x + jitter(rng), e.match.y + jitter(rng)};
                if (ctx.candidateOk(cand.x, cand.y)) try_improve(u, ctx, e, cand);
            }
        }
    }
    return out;
}

// Mean-of-neighbors diffusion fill used to initialize the coarsest level.
void diffusion_fill(RgbF& img, const BinaryMask& hole) {
    std::vector<Pixel> holePx;
    for (int y = 0; y < hole.height(); ++y)
        for (int x = 0; x < hole.width(); ++x)
            if (hole.get(x, y)) holePx.push_back({x, y});
    if (holePx.empty()) return;

    double mean[3] = {0, 0, 0};
    std::size_t known = 0;
    for (int y = 0; y < hole.height(); ++y)
        for (int x = 0; x < hole.width(); ++x)
            if (!hole.get(x, y)) {
                for (int c = 0; c < 3; ++c) mean[c] += img.at(x, y, c);
                ++known;
            }
    if (known > 0)
        for (int c = 0; c < 3; ++c) mean[c] /= static_cast<double>(known);
    for (const Pixel& p : holePx)
        for (int c = 0; c < 3; ++c) img.at(p.x, p.y, c) = mean[c];

    RgbF next = img;
    for (int iter = 0; iter < 512; ++iter) {
        double maxDelta = 0.0;
        for (const Pixel& p : holePx) {
            for (int c = 0; c < 3; ++c) {
                double acc = 0.0;
                int n = 0;
                const int dx[4] = {1, -1, 0, 0};
                const int dy[4] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    const int nx = p.x + dx[k];
                    const int ny = p.y + dy[k];
                    if (nx < 0 || nx >= img.width || ny < 0 || ny >= img.height) continue;
                    acc += img.at(nx, ny, c);
                    ++n;
                }
                if (n == 0) continue;
                const double v = acc / n;
                maxDelta = std::max(maxDelta, std::abs(v - img.at(p.x, p.y, c)));
                next.at(p.x, p.y, c) = v;
            }
        }
        std::swap(img.v, next.v);
        if (maxDelta < 1e-4) break;
    }
}

RgbF downsample(const RgbF& img) {
    const int w = (img.width + 1) / 2;
    const int h = (img.height + 1) / 2;
    RgbF out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < 3; ++c) {
                double acc = 0.0;
                int n = 0;
                for (int dy = 0; dy < 2; ++dy) {
                    for (int dx = 0; dx < 2; ++dx) {
                        const int sx = 2 * x + dx;
                        const int sy = 2 * y + dy;
                        if (sx >= img.width || sy >= img.height) continue;
                        acc += img.at(sx, sy, c);
                        ++n;
                    }
                }
                out.at(x, y, c) = acc / n;
            }
        }
    }
    return out;
}

BinaryMask downsample_hole(const BinaryMask& hole) {
    const int w = (hole.width() + 1) / 2;
    const int h = (hole.height() + 1) / 2;
    BinaryMask out(w, h);
    for (int y = 0; y < hole.height(); ++y)
        for (int x = 0; x < hole.width(); ++x)
            if (hole.get(x, y)) out.set(x / 2, y / 2);
    return out;
}

// Remove hole pixels lacking a half-patch margin inside the domain.
BinaryMask clip_hole(const BinaryMask& hole, int half) {
    BinaryMask out = hole;
    for (int y = 0; y < hole.height(); ++y)
        for (int x = 0; x < hole.width(); ++x)
            if (hole.get(x, y) &&
                (x < half || x >= hole.width() - half || y < half || y >= hole.height() - half))
                out.set(x, y, false);
    return out;
}

struct LevelResult {
    RgbF image;
    CorrespondenceMap phi;
    bool hasPhi = false;
};

LevelResult solve_level(RgbF img, const BinaryMask& hole, int patchSide, int iterations,
                        std::mt19937_64& rng, const CorrespondenceMap* phiInit,
                        std::vector<double>* energies) {
    LevelResult res;
    const PatchContext ctx = make_context(hole, patchSide);
    if (ctx.candidates.empty() || hole.count() == 0) {
        res.image = std::move(img);
        return res;  // nothing known to copy from (or nothing to fill)
    }

    CorrespondenceMap phi;
    phi.width = ctx.w;
    phi.height = ctx.h;
    phi.patchSide = patchSide;
    for (int y = ctx.half; y < ctx.h - ctx.half; ++y)
        for (int x = ctx.half; x < ctx.w - ctx.half; ++x)
            if (ctx.isTarget[static_cast<std::size_t>(y) * ctx.w + x]) {
                Pixel match = random_candidate(ctx, rng);
                phi.entries.push_back({{x, y}, match, std::numeric_limits<double>::infinity()});
            }

    if (phiInit != nullptr) {
        // Transfer coarse offsets: parent target at half resolution.
        std::vector<int> parentAt(
            static_cast<std::size_t>(phiInit->width) * phiInit->height, -1);
        for (std::size_t i = 0; i < phiInit->entries.size(); ++i) {
            const Pixel t = phiInit->entries[i].target;
            parentAt[static_cast<std::size_t>(t.y) * phiInit->width + t.x] =
                static_cast<int>(i);
        }
        for (PatchCorrespondence& e : phi.entries) {
            const int px = e.target.x / 2;
            const int py = e.target.y / 2;
            if (px >= phiInit->width || py >= phiInit->height) continue;
            const int idx = parentAt[static_cast<std::size_t>(py) * phiInit->width + px];
            if (idx < 0) continue;
            const PatchCorrespondence& pe = phiInit->entries[idx];
            const Pixel cand{2 * pe.match.x + (e.target.x - 2 * px),
                             2 * pe.match.y + (e.target.y - 2 * py)};
            if (ctx.candidateOk(cand.x, cand.y)) e.match = cand;
        }
    }

    double prevEnergy = std::numeric_limits<double>::infinity();
    for (int round = 0; round < std::max(1, iterations); ++round) {
        phi = search_pass(img, ctx, phi, rng);
        RgbF updated = image_update_median(img, phi, hole);
        img.v.swap(updated.v);
        const double energy = inpaint_energy(img, phi);
        if (energies != nullptr) energies->push_back(energy);
        if (energy >= prevEnergy) break;  // converged
        prevEnergy = energy;
    }

    res.image = std::move(img);
    res.phi = std::move(phi);
    res.hasPhi = true;
    return res;
}

}  // namespace

RgbF to_rgbf(const RgbImage& img) {
    RgbF out(img.width(), img.height());
    for (std::size_t i = 0; i < img.data().size(); ++i)
        out.v[i] = static_cast<double>(img.data()[i]);
    return out;
}

CorrespondenceMap init_correspondence(const RgbF& u, const BinaryMask& hole, int patchSide,
                                      std::mt19937_64& rng) {
    (void)u;
    const PatchContext ctx = make_context(hole, patchSide);
    CorrespondenceMap phi;
    phi.width = ctx.w;
    phi.height = ctx.h;
    phi.patchSide = patchSide;
    if (ctx.candidates.empty()) return phi;
    for (int y = ctx.half; y < ctx.h - ctx.half; ++y)
        for (int x = ctx.half; x < ctx.w - ctx.half; ++x)
            if (ctx.isTarget[static_cast<std::size_t>(y) * ctx.w + x])
                phi.entries.push_back({{x, y}, random_candidate(ctx, rng),
                                       std::numeric_limits<double>::infinity()});
    return phi;
}

CorrespondenceMap nn_search(const RgbF& u, const BinaryMask& hole, const CorrespondenceMap& phi,
                            std::mt19937_64& rng) {
    const PatchContext ctx = make_context(hole, phi.patchSide);
    return search_pass(u, ctx, phi, rng);
}

RgbF image_update_median(const RgbF& u, const CorrespondenceMap& phi, const BinaryMask& hole) {
    RgbF out = u;
    const int half = phi.patchSide / 2;

    // Gather proposals per hole pixel from every covering target patch.
    std::vector<int> entryAt(static_cast<std::size_t>(phi.width) * phi.height, -1);
    for (std::size_t i = 0; i < phi.entries.size(); ++i) {
        const Pixel t = phi.entries[i].target;
        entryAt[static_cast<std::size_t>(t.y) * phi.width + t.x] = static_cast<int>(i);
    }

    std::vector<double> proposals;
    for (int y = 0; y < hole.height(); ++y) {
        for (int x = 0; x < hole.width(); ++x) {
            if (!hole.get(x, y)) continue;
            for (int c = 0; c < 3; ++c) {
                proposals.clear();
                for (int dy = -half; dy <= half; ++dy) {
                    for (int dx = -half; dx <= half; ++dx) {
                        const int tx = x + dx;
                        const int ty = y + dy;
                        if (tx < 0 || tx >= phi.width || ty < 0 || ty >= phi.height) continue;
                        const int idx = entryAt[static_cast<std::size_t>(ty) * phi.width + tx];
                        if (idx < 0) continue;
                        const PatchCorrespondence& e = phi.entries[idx];
                        proposals.push_back(
                            u.at(e.match.x + (x - tx), e.match.y + (y - ty), c));
                    }
                }
                if (proposals.empty()) continue;
                std::sort(proposals.begin(), proposals.end());
                const std::size_t n = proposals.size();
                out.at(x, y, c) = (n % 2 == 1)
                                      ? proposals[n / 2]
                                      : (proposals[n / 2 - 1] + proposals[n / 2]) / 2.0;
            }
        }
    }
    return out;
}

double inpaint_energy(const RgbF& u, const CorrespondenceMap& phi) {
    const int half = phi.patchSide / 2;
    double acc = 0.0;
    for (const PatchCorrespondence& e : phi.entries)
        acc += patch_distance(u, e.target, e.match, half,
                              std::numeric_limits<double>::infinity());
    return acc;
}

RgbImage inpaint(const InpaintProblem& problem, InpaintTrace* trace) {
    const RgbImage& src = problem.image;
    if (src.width() != problem.hole.width() || src.height() != problem.hole.height())
        throw OutOfBoundsError("hole mask dimensions do not match the image");
    if (problem.patchSide < 3 || problem.patchSide % 2 == 0)
        throw OutOfBoundsError("patchSide must be odd and >= 3");

    const std::size_t holeArea = problem.hole.count();
    if (holeArea * 2 > src.pixelCount())
        throw HoleTooLargeError("hole covers more than 50% of the image");

    const int half = problem.patchSide / 2;
    const BinaryMask hole0 = clip_hole(problem.hole, half);
    if (hole0.count() == 0) return src;

    // Multiscale depth from the hole diameter, capped so the coarsest level
    // still fits a couple of patches.
    int levels = problem.levels;
    if (levels <= 0) {
        int bw = 0, bh = 0;
        {
            int x0 = src.width(), x1 = -1, y0 = src.height(), y1 = -1;
            for (int y = 0; y < hole0.height(); ++y)
                for (int x = 0; x < hole0.width(); ++x)
                    if (hole0.get(x, y)) {
                        x0 = std::min(x0, x);
                        x1 = std::max(x1, x);
                        y0 = std::min(y0, y);
                        y1 = std::max(y1, y);
                    }
            bw = x1 - x0 + 1;
            bh = y1 - y0 + 1;
        }
        const double diam = std::max(bw, bh);
        levels = std::max(1, static_cast<int>(std::floor(std::log2(diam / 8.0))) + 1);
    }
    while (levels > 1 &&
           (std::min(src.width(), src.height()) >> (levels - 1)) < 2 * problem.patchSide + 2)
        --levels;

    std::vector<RgbF> pyramid{to_rgbf(src)};
    std::vector<BinaryMask> holes{hole0};
    for (int l = 1; l < levels; ++l) {
        pyramid.push_back(downsample(pyramid.back()));
        holes.push_back(clip_hole(downsample_hole(holes.back()), half));
    }

    std::mt19937_64 rng(problem.seed);
    LevelResult coarse;
    for (int l = levels - 1; l >= 0; --l) {
        RgbF img = pyramid[l];
        if (l == levels - 1) {
            diffusion_fill(img, holes[l]);
        } else {
            // Seed fine hole pixels from the coarse solution.
            for (int y = 0; y < holes[l].height(); ++y)
                for (int x = 0; x < holes[l].width(); ++x)
                    if (holes[l].get(x, y))
                        for (int c = 0; c < 3; ++c)
                            img.at(x, y, c) = coarse.image.at(x / 2, y / 2, c);
        }
        std::vector<double>* energies =
            (l == 0 && trace != nullptr) ? &trace->finestEnergies : nullptr;
        coarse = solve_level(std::move(img), holes[l], problem.patchSide, problem.iterations,
                             rng, (l < levels - 1 && coarse.hasPhi) ? &coarse.phi : nullptr,
                             energies);
    }

    RgbImage out = src;
    for (int y = 0; y < src.height(); ++y)
        for (int x = 0; x < src.width(); ++x)
            if (hole0.get(x, y))
                for (int c = 0; c < 3; ++c)
                    out.at(x, y, c) = static_cast<std::uint8_t>(
                        std::lround(std::clamp(coarse.image.at(x, y, c), 0.0, 255.0)));
    return out;
}

}  // namespace flarespot
