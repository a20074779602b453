#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "flarespot/image.hpp"
#include "flarespot/morphology.hpp"

namespace flarespot {

/// Interleaved double-precision RGB image used by the inpainting solver.
struct RgbF {
    int width = 0;
    int height = 0;
    std::vector<double> v;  // 3 per pixel, row-major

    RgbF() = default;
    RgbF(int w, int h) : width(w), height(h), v(static_cast<std::size_t>(w) * h * 3, 0.0) {}

    double& at(int x, int y, int c) {
        return v[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
    double at(int x, int y, int c) const {
        return v[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
};

RgbF to_rgbf(const RgbImage& img);

/// Exemplar-based inpainting problem. The hole O is reconstructed from
/// patches of the known region O^c by alternating nearest-neighbor search and
/// per-pixel median aggregation, coarse to fine.
struct InpaintProblem {
    RgbImage image;
    BinaryMask hole;
    int patchSide = 7;   // odd, >= 3
    int levels = 0;      // 0 = derived from the hole diameter
    int iterations = 10; // alternation rounds per level
    std::uint64_t seed = 0x66a2c5;
};

/// One target-to-source patch assignment.
struct PatchCorrespondence {
    Pixel target;  // patch center intersecting the hole
    Pixel match;   // center of a fully-known patch
    double dist;   // L1 patch distance at the time of the last search
};

/// Correspondence map phi over the patch centers intersecting the hole.
struct CorrespondenceMap {
    int width = 0;
    int height = 0;
    int patchSide = 7;
    std::vector<PatchCorrespondence> entries;
};

/// Random valid initialization of phi for one scale.
CorrespondenceMap init_correspondence(const RgbF& u, const BinaryMask& hole, int patchSide,
                                      std::mt19937_64& rng);

/// One nearest-neighbor search pass. Every entry's distance is recomputed
/// against u and then only improved, so distances are element-wise
/// non-increasing. Uses an exhaustive scan when the known region offers fewer
/// than 10^4 candidate centers, PatchMatch-style propagation plus random
/// search otherwise.
CorrespondenceMap nn_search(const RgbF& u, const BinaryMask& hole, const CorrespondenceMap& phi,
                            std::mt19937_64& rng);

/// Set every hole pixel to the per-channel median of the values proposed by
/// all correspondences whose target patch covers it. Known pixels are
/// untouched. An even number of proposals takes the midpoint of the two
/// central values.
RgbF image_update_median(const RgbF& u, const CorrespondenceMap& phi, const BinaryMask& hole);

/// Total L1 patch error sum over the correspondence map, evaluated against u.
double inpaint_energy(const RgbF& u, const CorrespondenceMap& phi);

/// Per-round energies at the finest scale, for convergence checks.
struct InpaintTrace {
    std::vector<double> finestEnergies;
};

/// Fill the hole and return the completed image. Pixels outside the hole are
/// bit-identical to the input. Throws HoleTooLargeError when the hole covers
/// more than half of the image; hole pixels without a patchSide/2 margin
/// inside the domain are clipped and keep their input values.
RgbImage inpaint(const InpaintProblem& problem, InpaintTrace* trace = nullptr);

}  // namespace flarespot
