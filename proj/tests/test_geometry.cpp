#include <doctest.h>

#include <cmath>
#include <random>

#include "groundkit/geometry.hpp"
#include "support/test_support.hpp"

using namespace groundkit::geom;
using testsupport::random_point_in;
using testsupport::random_rect;
using testsupport::uniform;

namespace {
constexpr int kCases = 10000;
constexpr double kTol = 1e-9;
}  // namespace

TEST_CASE("get_area returns the longer side") {
    CHECK(get_area({0, 0, 1920, 1080}) == doctest::Approx(1920));
    CHECK(get_area({0, 0, 100, 100}) == doctest::Approx(100));
    CHECK(get_area({10, 20, 30, 520}) == doctest::Approx(500));
}

TEST_CASE("is_inside counts the boundary as inside") {
    const Rect r{0, 0, 10, 10};
    CHECK(is_inside({5, 5}, r));
    CHECK(is_inside({10, 10}, r));
    CHECK(is_inside({0, 0}, r));
    CHECK_FALSE(is_inside({-1, 5}, r));
    CHECK_FALSE(is_inside({5, 10.0001}, r));
}

TEST_CASE("zoom_in_asymmetric moves the farther boundary per axis") {
    // p sits in the right half (left boundary moves) and the top quarter
    // (bottom boundary moves): worked through the per-axis rule by hand.
    const Rect r = zoom_in_asymmetric({0, 0, 2000, 1000}, {1500, 250}, 0.10);
    CHECK(r.x_min == doctest::Approx(200));
    CHECK(r.y_min == doctest::Approx(0));
    CHECK(r.x_max == doctest::Approx(2000));
    CHECK(r.y_max == doctest::Approx(900));
}

TEST_CASE("zoom_in_asymmetric tie-break moves the max boundary") {
    const Rect r = zoom_in_asymmetric({0, 0, 100, 100}, {50, 50}, 0.10);
    CHECK(r.x_min == doctest::Approx(0));
    CHECK(r.y_min == doctest::Approx(0));
    CHECK(r.x_max == doctest::Approx(90));
    CHECK(r.y_max == doctest::Approx(90));
}

TEST_CASE("zoom_in_asymmetric properties: subset, containment, exact ratio") {
    // Containment of p is only guaranteed while the per-axis shrink cannot
    // overshoot the nearer half, i.e. delta <= 0.5. The operating range is
    // 0.10-0.30; larger deltas are exercised below for the ratio alone.
    std::mt19937_64 rng(101);
    for (int i = 0; i < kCases; ++i) {
        const Rect r = random_rect(rng, 6016, 3384);
        const Point p = random_point_in(rng, r);
        const double delta = uniform(rng, 0.01, 0.50);
        const Rect out = zoom_in_asymmetric(r, p, delta);

        REQUIRE(out.valid());
        REQUIRE(out.x_min >= r.x_min - kTol);
        REQUIRE(out.x_max <= r.x_max + kTol);
        REQUIRE(out.y_min >= r.y_min - kTol);
        REQUIRE(out.y_max <= r.y_max + kTol);
        REQUIRE(is_inside(p, out));
        REQUIRE(out.width() == doctest::Approx(r.width() * (1 - delta)).epsilon(kTol));
        REQUIRE(out.height() == doctest::Approx(r.height() * (1 - delta)).epsilon(kTol));
        REQUIRE(get_area(out) == doctest::Approx(get_area(r) * (1 - delta)).epsilon(kTol));
    }
}

TEST_CASE("zoom_in_asymmetric ratio holds across the whole delta domain") {
    std::mt19937_64 rng(105);
    for (int i = 0; i < kCases; ++i) {
        const Rect r = random_rect(rng, 6016, 3384);
        const Point p = random_point_in(rng, r);
        const double delta = uniform(rng, 0.01, 0.99);
        const Rect out = zoom_in_asymmetric(r, p, delta);
        REQUIRE(out.valid());
        REQUIRE(out.width() == doctest::Approx(r.width() * (1 - delta)).epsilon(kTol));
        REQUIRE(out.height() == doctest::Approx(r.height() * (1 - delta)).epsilon(kTol));
    }
}

TEST_CASE("zoom_in_symmetric shrinks evenly about the center") {
    const Rect a = zoom_in_symmetric({0, 0, 1000, 1000}, 0.10);
    CHECK(a.x_min == doctest::Approx(50));
    CHECK(a.y_min == doctest::Approx(50));
    CHECK(a.x_max == doctest::Approx(950));
    CHECK(a.y_max == doctest::Approx(950));

    const Rect b = zoom_in_symmetric({100, 100, 900, 900}, 0.20);
    CHECK(b.x_min == doctest::Approx(180));
    CHECK(b.y_min == doctest::Approx(180));
    CHECK(b.x_max == doctest::Approx(820));
    CHECK(b.y_max == doctest::Approx(820));
}

TEST_CASE("zoom_in_symmetric properties: center preserved, area ratio exact") {
    std::mt19937_64 rng(102);
    for (int i = 0; i < kCases; ++i) {
        const Rect r = random_rect(rng, 6016, 3384);
        const double delta = uniform(rng, 0.01, 0.99);
        const Rect out = zoom_in_symmetric(r, delta);

        REQUIRE(out.valid());
        REQUIRE(out.x_min >= r.x_min - kTol);
        REQUIRE(out.x_max <= r.x_max + kTol);
        REQUIRE(out.center().x == doctest::Approx(r.center().x).epsilon(kTol));
        REQUIRE(out.center().y == doctest::Approx(r.center().y).epsilon(kTol));
        const double area_ratio = (out.width() * out.height()) / (r.width() * r.height());
        REQUIRE(area_ratio == doctest::Approx((1 - delta) * (1 - delta)).epsilon(1e-7));
    }
}

TEST_CASE("zoom_out expands per side then clamps to the image") {
    const ImageBounds bounds{1000, 1000};
    const Rect a = zoom_out({100, 100, 900, 900}, 0.05, bounds);
    CHECK(a.x_min == doctest::Approx(80));
    CHECK(a.y_min == doctest::Approx(80));
    CHECK(a.x_max == doctest::Approx(920));
    CHECK(a.y_max == doctest::Approx(920));

    const Rect b = zoom_out({0, 0, 500, 500}, 0.05, bounds);
    CHECK(b.x_min == doctest::Approx(0));
    CHECK(b.y_min == doctest::Approx(0));
    CHECK(b.x_max == doctest::Approx(512.5));
    CHECK(b.y_max == doctest::Approx(512.5));

    // Clamping fixpoint: the full image cannot expand.
    const Rect c = zoom_out({0, 0, 1000, 1000}, 0.05, bounds);
    CHECK(c.x_min == doctest::Approx(0));
    CHECK(c.y_min == doctest::Approx(0));
    CHECK(c.x_max == doctest::Approx(1000));
    CHECK(c.y_max == doctest::Approx(1000));
}

TEST_CASE("zoom_out properties: stays in bounds, covers the input") {
    std::mt19937_64 rng(103);
    for (int i = 0; i < kCases; ++i) {
        const double w = uniform(rng, 100, 6016);
        const double h = uniform(rng, 100, 3384);
        const ImageBounds bounds{int(w), int(h)};
        const Rect r = random_rect(rng, bounds.width, bounds.height);
        const double delta = uniform(rng, 0.01, 0.99);
        const Rect out = zoom_out(r, delta, bounds);

        REQUIRE(out.valid());
        REQUIRE(out.x_min >= -kTol);
        REQUIRE(out.y_min >= -kTol);
        REQUIRE(out.x_max <= bounds.width + kTol);
        REQUIRE(out.y_max <= bounds.height + kTol);
        // The expansion never retreats: the input (already within bounds)
        // stays covered.
        REQUIRE(out.x_min <= r.x_min + kTol);
        REQUIRE(out.y_min <= r.y_min + kTol);
        REQUIRE(out.x_max >= r.x_max - kTol);
        REQUIRE(out.y_max >= r.y_max - kTol);
        REQUIRE(get_area(out) <= std::max(bounds.width, bounds.height) + kTol);
    }
}

TEST_CASE("center_square translates into bounds without shrinking") {
    const Rect a = center_square({3500, 2100}, 1000, {3840, 2160});
    CHECK(a.x_min == doctest::Approx(2840));
    CHECK(a.y_min == doctest::Approx(1160));
    CHECK(a.x_max == doctest::Approx(3840));
    CHECK(a.y_max == doctest::Approx(2160));

    const Rect b = center_square({500, 500}, 1000, {1000, 1000});
    CHECK(b.x_min == doctest::Approx(0));
    CHECK(b.y_max == doctest::Approx(1000));

    // Oversize request spans the whole image on both axes.
    const Rect c = center_square({100, 100}, 2000, {1000, 800});
    CHECK(c.x_min == doctest::Approx(0));
    CHECK(c.y_min == doctest::Approx(0));
    CHECK(c.x_max == doctest::Approx(1000));
    CHECK(c.y_max == doctest::Approx(800));
}

TEST_CASE("center_square properties: per-axis size is min(side, image)") {
    std::mt19937_64 rng(104);
    for (int i = 0; i < kCases; ++i) {
        const ImageBounds bounds{testsupport::uniform_int(rng, 50, 6016),
                                 testsupport::uniform_int(rng, 50, 3384)};
        const Point c{uniform(rng, -100, bounds.width + 100),
                      uniform(rng, -100, bounds.height + 100)};
        const double side = uniform(rng, 1, 4000);
        const Rect out = center_square(c, side, bounds);

        REQUIRE(out.valid());
        REQUIRE(out.x_min >= -kTol);
        REQUIRE(out.y_min >= -kTol);
        REQUIRE(out.x_max <= bounds.width + kTol);
        REQUIRE(out.y_max <= bounds.height + kTol);
        REQUIRE(out.width() ==
                doctest::Approx(std::min(side, double(bounds.width))).epsilon(kTol));
        REQUIRE(out.height() ==
                doctest::Approx(std::min(side, double(bounds.height))).epsilon(kTol));
    }
}

TEST_CASE("clamp_point projects onto the rect") {
    const Rect r{0, 0, 100, 50};
    const Point p = clamp_point({-10, 75}, r);
    CHECK(p.x == doctest::Approx(0));
    CHECK(p.y == doctest::Approx(50));
    const Point q = clamp_point({40, 20}, r);
    CHECK(q.x == doctest::Approx(40));
    CHECK(q.y == doctest::Approx(20));
}

TEST_CASE("grid_crop_rect floors mins, ceils maxes, clamps to image") {
    const Rect g = grid_crop_rect({10.4, 10.6, 20.2, 20.9}, {100, 100});
    CHECK(g.x_min == doctest::Approx(10));
    CHECK(g.y_min == doctest::Approx(10));
    CHECK(g.x_max == doctest::Approx(21));
    CHECK(g.y_max == doctest::Approx(21));
}

TEST_CASE("euclidean_dist matches the hypotenuse") {
    CHECK(euclidean_dist({0, 0}, {3, 4}) == doctest::Approx(5));
    CHECK(euclidean_dist({1, 1}, {1, 1}) == doctest::Approx(0));
}
