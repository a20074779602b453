#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "flarespot/detector.hpp"
#include "oracles.hpp"

using namespace flarespot;

namespace {

LightSource source_at(double x, double y, std::size_t area = 1000) {
    LightSource s;
    s.centroid = {x, y};
    s.area = area;
    return s;
}

Keypoint keypoint_at(int x, int y) {
    Keypoint kp;
    kp.position = {x, y};
    kp.sigma = 4.0;
    kp.response = -1.0;
    kp.lambda1 = 1.0;
    kp.lambda2 = 1.2;
    return kp;
}

LabImage lab_with_L(int w, int h, double bg) {
    LabImage lab;
    lab.L = GrayPlane(w, h, bg);
    lab.a = GrayPlane(w, h, 0.0);
    lab.b = GrayPlane(w, h, 0.0);
    return lab;
}

}  // namespace

TEST_CASE("search_window reflects the source through the image center") {
    const Window w = search_window(source_at(10.0, 10.0), 100, 100, 0.2);
    CHECK(w.center.x == doctest::Approx(89.0));
    CHECK(w.center.y == doctest::Approx(89.0));
    CHECK(w.radius == doctest::Approx(20.0));

    const Window fixedPoint = search_window(source_at(49.5, 49.5), 100, 100, 0.2);
    CHECK(fixedPoint.center.x == doctest::Approx(49.5));
    CHECK(fixedPoint.center.y == doctest::Approx(49.5));

    CHECK(search_window(source_at(30.0, 30.0), 200, 100, 0.2).radius ==
          doctest::Approx(40.0));
}

TEST_CASE("bounded_area_ok applies the strict 1% rule") {
    LabImage lab = lab_with_L(64, 64, 20.0);

    SUBCASE("5-pixel blob with source area 1000 passes") {
        for (int x = 30; x < 35; ++x) lab.L.at(x, 30) = 80.0;
        CHECK(bounded_area_ok(lab, keypoint_at(32, 30), source_at(0, 0, 1000), 10.0));
    }
    SUBCASE("10-pixel blob fails on the boundary") {
        for (int x = 30; x < 40; ++x) lab.L.at(x, 30) = 80.0;
        CHECK(!bounded_area_ok(lab, keypoint_at(32, 30), source_at(0, 0, 1000), 10.0));
    }
    SUBCASE("keypoint inside a large uniform region fails") {
        // The whole 64x64 background is one bi-level component.
        const Keypoint kp = keypoint_at(32, 32);
        CHECK(!bounded_area_ok(lab, kp, source_at(0, 0, 1000), 10.0));

        // Cross-check the component size against the flood-fill oracle.
        const BinaryMask b = bilevel_set(lab.L, lab.L.at(32, 32), 10.0);
        const auto comps = oracle::components(b);
        std::size_t containing = 0;
        for (const auto& c : comps)
            if (c.count({32, 32})) containing = c.size();
        CHECK(containing > 1000 / 100);
    }
}

TEST_CASE("overexposure_ok compares strictly against beta") {
    GrayPlane norm(3, 1);
    norm.at(0, 0) = 0.9;
    norm.at(1, 0) = 0.7;
    norm.at(2, 0) = 1.0;
    const Rect rect{0, 0, 2, 0};

    CHECK(overexposure_ok(norm, rect, keypoint_at(0, 0), 0.7));
    CHECK(!overexposure_ok(norm, rect, keypoint_at(1, 0), 0.7));
    CHECK(overexposure_ok(norm, rect, keypoint_at(2, 0), 0.999));
    CHECK_THROWS_AS(overexposure_ok(norm, rect, keypoint_at(5, 0), 0.7), OutOfWindowError);
}

TEST_CASE("the brightest pixel of a non-constant window always passes") {
    GrayPlane L(21, 21);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> uv(10.0, 60.0);
    for (double& v : L.values()) v = uv(rng);
    L.at(13, 9) = 95.0;

    const Window w{{10.0, 10.0}, 10.0};
    const GrayPlane norm = normalize_window(L, w);
    CHECK(overexposure_ok(norm, window_rect(w, 21, 21), keypoint_at(13, 9), 0.99));
}

TEST_CASE("confidence_terms worked geometry examples") {
    LabImage lab = lab_with_L(101, 101, 50.0);  // image center = (50, 50)

    SUBCASE("exact mirror point gives e1 = e2 = 0") {
        const auto t = confidence_terms(lab, keypoint_at(90, 70), source_at(10.0, 30.0));
        CHECK(t.e1 == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(t.e2 == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("hand-derived off-line candidate") {
        const auto t = confidence_terms(lab, keypoint_at(90, 60), source_at(10.0, 50.0));
        CHECK(t.e1 == doctest::Approx(std::abs(40.0 - std::sqrt(1700.0))).epsilon(1e-9));
        CHECK(t.e1 == doctest::Approx(1.2310563).epsilon(1e-6));
        CHECK(t.e2 == doctest::Approx(10.0));
    }
    SUBCASE("e3 rewards green chroma") {
        lab.L.at(20, 20) = 90.0;
        lab.a.at(20, 20) = -20.0;
        CHECK(confidence_terms(lab, keypoint_at(20, 20), source_at(10, 50)).e3 ==
              doctest::Approx(110.0));
        lab.a.at(20, 20) = 20.0;
        CHECK(confidence_terms(lab, keypoint_at(20, 20), source_at(10, 50)).e3 ==
              doctest::Approx(70.0));
    }
    SUBCASE("source at the center falls back to radial distance") {
        const auto t = confidence_terms(lab, keypoint_at(53, 54), source_at(50.0, 50.0));
        CHECK(t.e2 == doctest::Approx(5.0));
    }
}

TEST_CASE("select_flare worked examples") {
    SUBCASE("single candidate gets confidence 1") {
        std::vector<Candidate> cands(1);
        cands[0].keypoint = keypoint_at(5, 5);
        cands[0].e1 = 3.0;
        cands[0].e2 = 4.0;
        cands[0].e3 = 120.0;
        const auto best = select_flare(cands);
        REQUIRE(best.has_value());
        CHECK(*best == 0);
        CHECK(cands[0].energy == doctest::Approx(0.0));
        CHECK(cands[0].confidence == doctest::Approx(1.0));
    }
    SUBCASE("equal geometry: higher e3 wins") {
        std::vector<Candidate> cands(2);
        cands[0].e1 = cands[1].e1 = 2.0;
        cands[0].e2 = cands[1].e2 = 3.0;
        cands[0].e3 = 110.0;
        cands[1].e3 = 70.0;
        const auto best = select_flare(cands);
        REQUIRE(best.has_value());
        CHECK(*best == 0);
    }
    SUBCASE("hand-derived three-candidate case") {
        std::vector<Candidate> cands(3);
        cands[0].e1 = 0.0;  cands[0].e2 = 0.0; cands[0].e3 = 50.0;
        cands[1].e1 = 10.0; cands[1].e2 = 5.0; cands[1].e3 = 50.0;
        cands[2].e1 = 0.0;  cands[2].e2 = 0.0; cands[2].e3 = 200.0;
        const auto best = select_flare(cands);
        REQUIRE(best.has_value());
        CHECK(*best == 2);
        CHECK(cands[2].energy == doctest::Approx(-1.0));  // global minimum of E
        CHECK(cands[0].energy == doctest::Approx(0.0));
        CHECK(cands[1].energy == doctest::Approx(1.0));
    }
    SUBCASE("empty set selects nothing") {
        std::vector<Candidate> cands;
        CHECK(!select_flare(cands).has_value());
    }
}

TEST_CASE("argmax is invariant under positive affine maps of e3") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> ue(0.0, 50.0);
    std::uniform_real_distribution<double> ue3(30.0, 200.0);
    std::uniform_real_distribution<double> uscale(0.1, 5.0);
    std::uniform_real_distribution<double> ushift(-40.0, 40.0);
    std::uniform_int_distribution<int> usize(1, 8);

    for (int trial = 0; trial < 100; ++trial) {
        const int n = usize(rng);
        std::vector<Candidate> base(n);
        for (int i = 0; i < n; ++i) {
            base[i].keypoint = keypoint_at(i, 0);
            base[i].e1 = ue(rng);
            base[i].e2 = ue(rng);
            base[i].e3 = ue3(rng);
        }
        std::vector<Candidate> mapped = base;
        const double scale = uscale(rng);
        const double shift = ushift(rng);
        for (Candidate& c : mapped) c.e3 = scale * c.e3 + shift;

        auto a = base;
        auto b = mapped;
        const auto ba = select_flare(a);
        const auto bb = select_flare(b);
        REQUIRE(ba.has_value());
        REQUIRE(bb.has_value());
        CHECK(*ba == *bb);

        for (const Candidate& c : a) {
            CHECK(c.energy >= -1.0 - 1e-12);
            CHECK(c.energy <= 1.0 + 1e-12);
            CHECK(c.confidence >= std::exp(-1.0) - 1e-12);
            CHECK(c.confidence <= std::exp(1.0) + 1e-12);
            CHECK(c.e1n >= 0.0);
            CHECK(c.e1n <= 1.0);
            CHECK(c.e2n >= 0.0);
            CHECK(c.e2n <= 1.0);
            CHECK(c.e3n >= 0.0);
            CHECK(c.e3n <= 1.0);
        }
    }
}

TEST_CASE("the selected candidate is never strictly dominated") {
    std::mt19937 rng(19);
    std::uniform_real_distribution<double> ue(0.0, 30.0);
    std::uniform_int_distribution<int> usize(2, 10);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = usize(rng);
        std::vector<Candidate> cands(n);
        for (int i = 0; i < n; ++i) {
            cands[i].keypoint = keypoint_at(i, 0);
            cands[i].e1 = ue(rng);
            cands[i].e2 = ue(rng);
            cands[i].e3 = ue(rng) + 50.0;
        }
        const auto best = select_flare(cands);
        REQUIRE(best.has_value());
        const Candidate& chosen = cands[*best];
        for (const Candidate& other : cands) {
            const bool dominates = other.e1n < chosen.e1n && other.e2n < chosen.e2n &&
                                   other.e3n > chosen.e3n;
            CHECK(!dominates);
        }
    }
}

TEST_CASE("filter cascade order does not change the surviving set") {
    // Scene with variety: a big uniform bright half (bounded-area failures),
    // small bright patches (passes), and dim patches (overexposure failures).
    LabImage lab = lab_with_L(60, 60, 30.0);
    for (int y = 0; y < 60; ++y)
        for (int x = 0; x < 20; ++x) lab.L.at(x, y) = 90.0;
    for (int y = 28; y <= 30; ++y)
        for (int x = 38; x <= 40; ++x) lab.L.at(x, y) = 92.0;
    for (int y = 48; y <= 50; ++y)
        for (int x = 48; x <= 50; ++x) lab.L.at(x, y) = 55.0;

    const LightSource src = source_at(5.0, 5.0, 2000);
    const Window win{{29.5, 29.5}, 29.5};
    const Rect rect = window_rect(win, 60, 60);
    const GrayPlane norm = normalize_window(lab.L, win);

    std::vector<Keypoint> pool;
    std::mt19937 rng(23);
    std::uniform_int_distribution<int> upos(1, 58);
    std::uniform_real_distribution<double> ul(0.1, 2.0);
    for (int i = 0; i < 40; ++i) {
        Keypoint kp = keypoint_at(upos(rng), upos(rng));
        kp.lambda1 = ul(rng) - 0.3;  // some non-positive
        kp.lambda2 = kp.lambda1 > 0 ? kp.lambda1 * ul(rng) * 3.0 : 1.0;
        pool.push_back(kp);
    }
    pool.push_back(keypoint_at(39, 29));  // small bright patch: passes everything
    pool.push_back(keypoint_at(10, 30));  // big region: bounded-area failure
    pool.push_back(keypoint_at(49, 49));  // dim patch: overexposure failure

    using Filter = std::function<bool(const Keypoint&)>;
    std::vector<Filter> filters{
        [&](const Keypoint& kp) { return elongation_ok(kp); },
        [&](const Keypoint& kp) { return bounded_area_ok(lab, kp, src, 10.0); },
        [&](const Keypoint& kp) { return overexposure_ok(norm, rect, kp, 0.7); },
    };

    std::vector<int> order{0, 1, 2};
    std::vector<std::vector<std::size_t>> survivorsPerOrder;
    do {
        std::vector<std::size_t> survivors;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            bool alive = true;
            for (int f : order)
                if (!filters[f](pool[i])) {
                    alive = false;
                    break;
                }
            if (alive) survivors.push_back(i);
        }
        survivorsPerOrder.push_back(std::move(survivors));
    } while (std::next_permutation(order.begin(), order.end()));

    REQUIRE(survivorsPerOrder.size() == 6);
    for (std::size_t i = 1; i < survivorsPerOrder.size(); ++i)
        CHECK(survivorsPerOrder[i] == survivorsPerOrder[0]);
    CHECK(!survivorsPerOrder[0].empty());
}

TEST_CASE("detect_all returns nothing when no pixel reaches the level set") {
    RgbImage img(64, 64);
    for (auto& v : img.data()) v = 128;  // flat mid gray, L ~ 54
    CHECK(detect_all(img, PipelineParams{}).empty());
}
