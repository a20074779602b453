#include <doctest.h>

#include <random>

#include "flarespot/morphology.hpp"
#include "oracles.hpp"

using namespace flarespot;

namespace {

GrayPlane plane_3x3_increasing() {
    GrayPlane p(3, 3);
    double v = 1.0;
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x) p.at(x, y) = v++;
    return p;
}

BinaryMask random_mask(std::mt19937& rng, int maxSide = 32, double density = 0.35) {
    std::uniform_int_distribution<int> side(1, maxSide);
    const int w = side(rng);
    const int h = side(rng);
    std::bernoulli_distribution bit(density);
    BinaryMask m(w, h);
    for (auto& b : m.bits()) b = bit(rng) ? 1 : 0;
    return m;
}

}  // namespace

TEST_CASE("upper_level_set thresholds inclusively") {
    const GrayPlane p = plane_3x3_increasing();
    const BinaryMask m = upper_level_set(p, 5.0);
    std::size_t set = 0;
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x) {
            CHECK(m.get(x, y) == (p.at(x, y) >= 5.0));
            set += m.get(x, y);
        }
    CHECK(set == 5);  // values 5..9

    CHECK(upper_level_set(p, -std::numeric_limits<double>::infinity()).count() == 9);
    CHECK(upper_level_set(p, 10.0).count() == 0);
}

TEST_CASE("upper_level_set is monotone in the threshold") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> uv(0.0, 100.0);
    GrayPlane p(12, 9);
    for (double& v : p.values()) v = uv(rng);
    const BinaryMask lo = upper_level_set(p, 30.0);
    const BinaryMask hi = upper_level_set(p, 60.0);
    for (std::size_t i = 0; i < lo.bits().size(); ++i)
        if (hi.bits()[i]) CHECK(lo.bits()[i]);
}

TEST_CASE("bilevel_set selects values within delta of the seed") {
    GrayPlane p(3, 1);
    p.at(0, 0) = 0;
    p.at(1, 0) = 10;
    p.at(2, 0) = 20;
    CHECK(bilevel_set(p, 10.0, 10.0).count() == 3);

    const BinaryMask exact = bilevel_set(p, 10.0, 0.0);
    CHECK(exact.count() == 1);
    CHECK(exact.get(1, 0));

    GrayPlane q(3, 1);
    q.at(0, 0) = 0;
    q.at(1, 0) = 15;
    q.at(2, 0) = 31;
    const BinaryMask m = bilevel_set(q, 0.0, 10.0);
    CHECK(m.count() == 1);
    CHECK(m.get(0, 0));
}

TEST_CASE("connected_components uses 8-connectivity") {
    BinaryMask diag(4, 4);
    diag.set(1, 1);
    diag.set(2, 2);
    CHECK(connected_components(diag).size() == 1);

    BinaryMask checker(4, 4);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x)
            if ((x + y) % 2 == 0) checker.set(x, y);
    CHECK(connected_components(checker).size() == 1);

    BinaryMask split(3, 3);
    split.set(0, 0);
    split.set(0, 2);
    CHECK(connected_components(split).size() == 2);
}

TEST_CASE("connected_components ordering is area-descending, raster-stable") {
    BinaryMask m(8, 3);
    m.set(6, 0);  // singleton
    for (int x = 0; x < 3; ++x) m.set(x, 2);  // area 3
    m.set(4, 2);  // singleton, later in raster order than (6,0)
    const auto comps = connected_components(m);
    REQUIRE(comps.size() == 3);
    CHECK(comps[0].area == 3);
    CHECK(comps[1].pixels.front() == Pixel{6, 0});
    CHECK(comps[2].pixels.front() == Pixel{4, 2});
}

TEST_CASE("connected_components matches the flood-fill oracle on random masks") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        const BinaryMask m = random_mask(rng);
        const auto got = connected_components(m);
        const auto ref = oracle::components(m);
        REQUIRE(got.size() == ref.size());

        // Partition check: same pixel sets regardless of order.
        std::set<std::set<std::pair<int, int>>> gotSets, refSets;
        std::size_t total = 0;
        for (const Component& c : got) {
            std::set<std::pair<int, int>> s;
            for (const Pixel& p : c.pixels) s.insert({p.x, p.y});
            CHECK(s.size() == c.area);
            total += c.area;
            gotSets.insert(std::move(s));
        }
        for (const auto& s : ref) refSets.insert(s);
        CHECK(gotSets == refSets);
        CHECK(total == m.count());
    }
}

TEST_CASE("component_containing finds the seeded blob") {
    BinaryMask m(8, 8);
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x) m.set(x, y);  // 9-pixel blob
    m.set(6, 6);
    m.set(7, 6);  // 2-pixel blob

    const auto big = component_containing(m, {1, 1});
    REQUIRE(big.has_value());
    CHECK(big->area == 9);

    const auto small = component_containing(m, {6, 6});
    REQUIRE(small.has_value());
    CHECK(small->area == 2);

    CHECK(!component_containing(m, {4, 4}).has_value());
    CHECK_THROWS_AS(component_containing(m, {9, 0}), OutOfBoundsError);
}

TEST_CASE("disc offsets enumerate lattice points") {
    CHECK(disc_offsets(1.5).size() == 9);   // full 3x3 block
    CHECK(disc_offsets(5.0).size() == 81);  // dx^2+dy^2 <= 25
}

TEST_CASE("opening removes specks and keeps solid squares") {
    BinaryMask speck(9, 9);
    speck.set(4, 4);
    CHECK(opening(speck, 1.5).count() == 0);

    BinaryMask square(15, 15);
    for (int y = 2; y <= 12; ++y)
        for (int x = 2; x <= 12; ++x) square.set(x, y);
    CHECK(opening(square, 1.5) == square);

    BinaryMask empty(5, 5);
    CHECK(opening(empty, 1.5).count() == 0);
}

TEST_CASE("dilation grows a pixel into a disc and is extensive") {
    BinaryMask center(21, 21);
    center.set(10, 10);
    CHECK(dilation(center, 5.0).count() == 81);

    BinaryMask empty(5, 5);
    CHECK(dilation(empty, 2.0).count() == 0);

    std::mt19937 rng(23);
    const BinaryMask m = random_mask(rng);
    const BinaryMask d = dilation(m, 1.5);
    for (std::size_t i = 0; i < m.bits().size(); ++i)
        if (m.bits()[i]) CHECK(d.bits()[i]);
}

TEST_CASE("opening and dilation match the definition oracles on random masks") {
    std::mt19937 rng(29);
    for (int trial = 0; trial < 40; ++trial) {
        const BinaryMask m = random_mask(rng);
        const double radius = (trial % 2 == 0) ? 1.5 : 2.5;
        CHECK(erosion(m, radius) == oracle::erode(m, radius));
        CHECK(dilation(m, radius) == oracle::dilate(m, radius));
        CHECK(opening(m, radius) == oracle::dilate(oracle::erode(m, radius), radius));
    }
}

TEST_CASE("opening is anti-extensive and idempotent; dilation monotone") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const BinaryMask m = random_mask(rng);
        const BinaryMask opened = opening(m, 1.5);
        for (std::size_t i = 0; i < m.bits().size(); ++i)
            if (opened.bits()[i]) CHECK(m.bits()[i]);
        CHECK(opening(opened, 1.5) == opened);

        BinaryMask bigger = m;
        std::uniform_int_distribution<int> ux(0, m.width() - 1), uy(0, m.height() - 1);
        for (int i = 0; i < 5; ++i) bigger.set(ux(rng), uy(rng));
        const BinaryMask dm = dilation(m, 1.5);
        const BinaryMask db = dilation(bigger, 1.5);
        for (std::size_t i = 0; i < dm.bits().size(); ++i)
            if (dm.bits()[i]) CHECK(db.bits()[i]);
    }
}
