#include <doctest.h>

#include <random>

#include "flarespot/color.hpp"
#include "flarespot/image.hpp"
#include "oracles.hpp"

using namespace flarespot;

TEST_CASE("rgb_to_lab maps the white and black points") {
    const auto white = rgb_to_lab(255.0, 255.0, 255.0);
    CHECK(white[0] == doctest::Approx(100.0).epsilon(1e-6));
    CHECK(std::abs(white[1]) < 0.01);
    CHECK(std::abs(white[2]) < 0.01);

    const auto black = rgb_to_lab(0.0, 0.0, 0.0);
    CHECK(black[0] == doctest::Approx(0.0));
    CHECK(black[1] == doctest::Approx(0.0));
    CHECK(black[2] == doctest::Approx(0.0));
}

TEST_CASE("rgb_to_lab matches the reference transcription") {
    const auto got = rgb_to_lab(255.0, 0.0, 0.0);
    const auto ref = oracle::rgb_to_lab(255.0, 0.0, 0.0);
    for (int c = 0; c < 3; ++c) CHECK(std::abs(got[c] - ref[c]) < 0.05);

    std::mt19937 rng(7);
    std::uniform_int_distribution<int> u8(0, 255);
    for (int i = 0; i < 200; ++i) {
        const double r = u8(rng), g = u8(rng), b = u8(rng);
        const auto a = rgb_to_lab(r, g, b);
        const auto o = oracle::rgb_to_lab(r, g, b);
        for (int c = 0; c < 3; ++c) CHECK(std::abs(a[c] - o[c]) < 0.05);
    }
}

TEST_CASE("rgb_to_lab image round-trips through the inverse reference") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> u8(0, 255);
    RgbImage img(16, 16);
    for (auto& v : img.data()) v = static_cast<std::uint8_t>(u8(rng));

    const LabImage lab = rgb_to_lab(img);
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            CHECK(lab.L.at(x, y) >= -1e-3);
            CHECK(lab.L.at(x, y) <= 100.0 + 1e-3);
            const auto rgb = oracle::lab_to_rgb(lab.L.at(x, y), lab.a.at(x, y), lab.b.at(x, y));
            for (int c = 0; c < 3; ++c)
                CHECK(std::abs(rgb[c] - img.at(x, y, c)) <= 1.0);
        }
    }
}

TEST_CASE("normalize_window rescales linearly") {
    GrayPlane plane(3, 1);
    plane.at(0, 0) = 10;
    plane.at(1, 0) = 20;
    plane.at(2, 0) = 30;
    const Window w{{1.0, 0.0}, 1.0};

    const GrayPlane norm = normalize_window(plane, w);
    CHECK(norm.at(0, 0) == doctest::Approx(0.0));
    CHECK(norm.at(1, 0) == doctest::Approx(0.5));
    CHECK(norm.at(2, 0) == doctest::Approx(1.0));
}

TEST_CASE("normalize_window handles uneven spacing") {
    GrayPlane plane(3, 1);
    plane.at(0, 0) = 0;
    plane.at(1, 0) = 25;
    plane.at(2, 0) = 100;
    const GrayPlane norm = normalize_window(plane, {{1.0, 0.0}, 1.0});
    CHECK(norm.at(0, 0) == doctest::Approx(0.0));
    CHECK(norm.at(1, 0) == doctest::Approx(0.25));
    CHECK(norm.at(2, 0) == doctest::Approx(1.0));
}

TEST_CASE("normalize_window of a constant window is all zeros") {
    GrayPlane plane(3, 3, 7.0);
    const GrayPlane norm = normalize_window(plane, {{1.0, 1.0}, 5.0});
    for (double v : norm.values()) CHECK(v == 0.0);
}

TEST_CASE("normalize_window throws on an empty clip") {
    GrayPlane plane(4, 4, 1.0);
    CHECK_THROWS_AS(normalize_window(plane, {{-10.0, -10.0}, 2.0}), EmptyWindowError);
}

TEST_CASE("normalize_window is invariant under affine luminance maps") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> uv(0.0, 100.0);
    GrayPlane plane(9, 9);
    for (double& v : plane.values()) v = uv(rng);

    const Window w{{4.0, 4.0}, 3.0};
    const GrayPlane base = normalize_window(plane, w);

    GrayPlane scaled = plane;
    for (double& v : scaled.values()) v = 2.5 * v + 17.0;
    const GrayPlane mapped = normalize_window(scaled, w);

    for (std::size_t i = 0; i < base.values().size(); ++i)
        CHECK(mapped.values()[i] == doctest::Approx(base.values()[i]).epsilon(1e-12));

    // Non-constant windows reach both 0 and 1.
    const auto [lo, hi] = std::minmax_element(base.values().begin(), base.values().end());
    CHECK(*lo == doctest::Approx(0.0));
    CHECK(*hi == doctest::Approx(1.0));
}
