#include <doctest.h>

#include <cmath>
#include <random>

#include "flarespot/inpaint.hpp"
#include "oracles.hpp"

using namespace flarespot;

namespace {

double psnr_over_hole(const RgbImage& got, const RgbImage& original, const BinaryMask& hole) {
    double mse = 0.0;
    std::size_t n = 0;
    for (int y = 0; y < got.height(); ++y)
        for (int x = 0; x < got.width(); ++x) {
            if (!hole.get(x, y)) continue;
            for (int c = 0; c < 3; ++c) {
                const double d = static_cast<double>(got.at(x, y, c)) - original.at(x, y, c);
                mse += d * d;
            }
            n += 3;
        }
    if (n == 0) return 99.0;
    mse /= static_cast<double>(n);
    if (mse <= 0.0) return 99.0;
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

BinaryMask box_hole(int w, int h, int x0, int y0, int side) {
    BinaryMask hole(w, h);
    for (int y = y0; y < y0 + side; ++y)
        for (int x = x0; x < x0 + side; ++x) hole.set(x, y);
    return hole;
}

RgbImage bicolor_edge(int w, int h, int edgeX) {
    RgbImage img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const bool left = x < edgeX;
            img.at(x, y, 0) = left ? 180 : 40;
            img.at(x, y, 1) = left ? 60 : 80;
            img.at(x, y, 2) = left ? 40 : 200;
        }
    return img;
}

RgbImage checkerboard(int w, int h, int tile) {
    RgbImage img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const bool a = ((x / tile) + (y / tile)) % 2 == 0;
            img.at(x, y, 0) = a ? 220 : 30;
            img.at(x, y, 1) = a ? 200 : 60;
            img.at(x, y, 2) = a ? 90 : 160;
        }
    return img;
}

}  // namespace

TEST_CASE("a hole in a constant region fills exactly") {
    InpaintProblem p;
    p.image = RgbImage(48, 48);
    for (auto& v : p.image.data()) v = 137;
    p.hole = box_hole(48, 48, 20, 20, 8);

    const RgbImage out = inpaint(p);
    for (int y = 0; y < 48; ++y)
        for (int x = 0; x < 48; ++x)
            for (int c = 0; c < 3; ++c) CHECK(out.at(x, y, c) == 137);
}

TEST_CASE("a hole across a bi-color edge restores the edge") {
    InpaintProblem p;
    p.image = bicolor_edge(64, 64, 24);
    p.hole = box_hole(64, 64, 20, 28, 8);
    const RgbImage original = p.image;

    InpaintTrace trace;
    const RgbImage out = inpaint(p, &trace);
    CHECK(psnr_over_hole(out, original, p.hole) >= 35.0);

    // Pixels outside the hole are bit-identical.
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x)
            if (!p.hole.get(x, y))
                for (int c = 0; c < 3; ++c) CHECK(out.at(x, y, c) == original.at(x, y, c));

    // Energy is non-increasing across rounds at the finest scale.
    REQUIRE(!trace.finestEnergies.empty());
    for (std::size_t i = 1; i < trace.finestEnergies.size(); ++i)
        CHECK(trace.finestEnergies[i] <= trace.finestEnergies[i - 1] + 1e-9);
}

TEST_CASE("a hole in a periodic checkerboard restores the texture") {
    InpaintProblem p;
    p.image = checkerboard(64, 64, 8);
    p.hole = box_hole(64, 64, 28, 28, 8);
    const RgbImage original = p.image;

    const RgbImage out = inpaint(p);
    CHECK(psnr_over_hole(out, original, p.hole) >= 30.0);
}

TEST_CASE("inpaint rejects holes covering more than half the image") {
    InpaintProblem p;
    p.image = RgbImage(20, 20);
    p.hole = BinaryMask(20, 20);
    for (int y = 0; y < 20; ++y)
        for (int x = 0; x < 15; ++x) p.hole.set(x, y);
    CHECK_THROWS_AS(inpaint(p), HoleTooLargeError);
}

TEST_CASE("inpaint is deterministic for a fixed seed on the PatchMatch path") {
    // 128x128 gives ~14k candidate centers, above the exhaustive threshold.
    std::mt19937 rng(57);
    std::uniform_int_distribution<int> u8(0, 255);
    InpaintProblem p;
    p.image = RgbImage(128, 128);
    for (int y = 0; y < 128; ++y)
        for (int x = 0; x < 128; ++x) {
            const int base = 40 + 60 * ((x / 16 + y / 16) % 2) + (x % 7) + (y % 5);
            p.image.at(x, y, 0) = static_cast<std::uint8_t>(base);
            p.image.at(x, y, 1) = static_cast<std::uint8_t>(255 - base);
            p.image.at(x, y, 2) = static_cast<std::uint8_t>((base * 3) % 255);
        }
    p.hole = box_hole(128, 128, 50, 50, 16);
    p.seed = 99;

    const RgbImage a = inpaint(p);
    const RgbImage b = inpaint(p);
    CHECK(a == b);
}

TEST_CASE("nn_search finds exact duplicates at distance zero") {
    RgbF u(16, 16);
    for (double& v : u.v) v = 55.0;
    BinaryMask hole(16, 16);
    hole.set(8, 8);

    std::mt19937_64 rng(1);
    CorrespondenceMap phi = init_correspondence(u, hole, 7, rng);
    REQUIRE(!phi.entries.empty());
    phi = nn_search(u, hole, phi, rng);
    for (const auto& e : phi.entries) CHECK(e.dist == doctest::Approx(0.0));
}

TEST_CASE("nn_search matches the exhaustive oracle and is stable at the optimum") {
    std::mt19937 rng(73);
    std::uniform_int_distribution<int> u8(0, 255);
    for (int trial = 0; trial < 6; ++trial) {
        const int w = 24 + 2 * trial;
        RgbImage img(w, w);
        for (auto& v : img.data()) v = static_cast<std::uint8_t>(u8(rng));
        const RgbF u = to_rgbf(img);
        BinaryMask hole(w, w);
        for (int y = 10; y < 14; ++y)
            for (int x = 9; x < 13; ++x) hole.set(x, y);

        std::mt19937_64 srng(trial);
        CorrespondenceMap phi = init_correspondence(u, hole, 5, srng);
        phi = nn_search(u, hole, phi, srng);
        for (const auto& e : phi.entries)
            CHECK(e.dist ==
                  doctest::Approx(oracle::exhaustive_best_distance(u, hole, e.target, 5)));

        // A second pass over an optimal map changes nothing.
        const CorrespondenceMap again = nn_search(u, hole, phi, srng);
        for (std::size_t i = 0; i < phi.entries.size(); ++i) {
            CHECK(again.entries[i].dist == doctest::Approx(phi.entries[i].dist));
            CHECK(again.entries[i].dist <= phi.entries[i].dist + 1e-12);
        }
    }
}

TEST_CASE("a single candidate patch attracts every correspondence") {
    RgbF u(13, 13);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> uv(0.0, 255.0);
    for (double& v : u.v) v = uv(rng);

    // Only the patch centered at (3,3) is fully known.
    BinaryMask hole(13, 13);
    for (int y = 0; y < 13; ++y)
        for (int x = 0; x < 13; ++x)
            if (x > 6 || y > 6) hole.set(x, y);

    std::mt19937_64 srng(2);
    CorrespondenceMap phi = init_correspondence(u, hole, 7, srng);
    REQUIRE(!phi.entries.empty());
    phi = nn_search(u, hole, phi, srng);
    for (const auto& e : phi.entries) CHECK(e.match == Pixel{3, 3});
}

TEST_CASE("image_update_median aggregates proposals per channel") {
    RgbF u(16, 16);
    for (double& v : u.v) v = 50.0;
    BinaryMask hole(16, 16);
    hole.set(5, 5);

    SUBCASE("all contributors agree") {
        CorrespondenceMap phi;
        phi.width = phi.height = 16;
        phi.patchSide = 3;
        phi.entries = {{{5, 5}, {10, 10}, 0.0}, {{4, 5}, {2, 2}, 0.0}};
        for (int c = 0; c < 3; ++c) {
            u.at(10, 10, c) = 77.0;  // proposal of target (5,5), offset (0,0)
            u.at(3, 2, c) = 77.0;    // proposal of target (4,5), offset (1,0)
        }
        const RgbF out = image_update_median(u, phi, hole);
        for (int c = 0; c < 3; ++c) CHECK(out.at(5, 5, c) == doctest::Approx(77.0));
    }

    SUBCASE("odd count takes the middle value, robust to outliers") {
        CorrespondenceMap phi;
        phi.width = phi.height = 16;
        phi.patchSide = 3;
        phi.entries = {{{5, 5}, {10, 10}, 0.0},
                       {{4, 5}, {2, 2}, 0.0},
                       {{6, 5}, {12, 12}, 0.0}};
        for (int c = 0; c < 3; ++c) {
            u.at(10, 10, c) = 10.0;
            u.at(3, 2, c) = 10.0;
            u.at(11, 12, c) = 200.0;  // proposal of target (6,5), offset (-1,0)
        }
        const RgbF out = image_update_median(u, phi, hole);
        for (int c = 0; c < 3; ++c) CHECK(out.at(5, 5, c) == doctest::Approx(10.0));
    }

    SUBCASE("even count takes the midpoint") {
        CorrespondenceMap phi;
        phi.width = phi.height = 16;
        phi.patchSide = 3;
        phi.entries = {{{5, 5}, {10, 10}, 0.0}, {{4, 5}, {2, 2}, 0.0}};
        for (int c = 0; c < 3; ++c) {
            u.at(10, 10, c) = 10.0;
            u.at(3, 2, c) = 20.0;
        }
        const RgbF out = image_update_median(u, phi, hole);
        for (int c = 0; c < 3; ++c) CHECK(out.at(5, 5, c) == doctest::Approx(15.0));
    }

    SUBCASE("known pixels are untouched") {
        CorrespondenceMap phi;
        phi.width = phi.height = 16;
        phi.patchSide = 3;
        phi.entries = {{{5, 5}, {10, 10}, 0.0}};
        const RgbF out = image_update_median(u, phi, hole);
        for (int y = 0; y < 16; ++y)
            for (int x = 0; x < 16; ++x)
                if (!hole.get(x, y))
                    for (int c = 0; c < 3; ++c) CHECK(out.at(x, y, c) == u.at(x, y, c));
    }
}
