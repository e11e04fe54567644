#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qshape/eigenshape.hpp"
#include "qshape/errors.hpp"
#include "qshape/shape.hpp"

#include "test_util.hpp"

using namespace qshape;
using testutil::max_component_diff;
using testutil::random_points;
using testutil::random_shape;

namespace {

PointConfig triangle_config() {
    return PointConfig({{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}});
}

} // namespace

TEST_SUITE("shape_core") {

TEST_CASE("normalize produces a centroid-free unit vector with a real positive anchor") {
    SplitMix64 g(11);
    for (int n : {3, 5, 8}) {
        for (int trial = 0; trial < 50; ++trial) {
            const ShapeVector s = random_shape(g, n);
            complex_t centroid{0.0, 0.0};
            double norm2 = 0.0;
            double peak = 0.0;
            for (const auto& a : s.amplitudes()) {
                centroid += a;
                norm2 += std::norm(a);
                peak = std::max(peak, std::abs(a));
            }
            CHECK(std::abs(centroid) < tol::algebraic);
            CHECK(std::abs(norm2 - 1.0) < tol::algebraic);

            std::size_t anchor = 0;
            while (std::abs(s.amplitudes()[anchor]) < peak * (1.0 - tol::phase_tie)) {
                ++anchor;
            }
            CHECK(s.amplitudes()[anchor].real() > 0.0);
            CHECK(std::abs(s.amplitudes()[anchor].imag()) < tol::algebraic);
        }
    }
}

TEST_CASE("normalize is invariant under translation, rotation and scaling") {
    SplitMix64 g(12);
    for (int n : {3, 5, 8}) {
        for (int trial = 0; trial < 200; ++trial) {
            const cvector_t pts = random_points(g, n);
            const auto t = testutil::random_similarity(g);
            const ShapeVector s0 = normalize(PointConfig(pts));
            const ShapeVector s1 =
                normalize(PointConfig(testutil::apply_similarity(pts, t)));
            CHECK(max_component_diff(s0.amplitudes(), s1.amplitudes()) < 1e-10);
            CHECK(fs_distance(s0, s1) < 1e-12);
        }
    }
}

TEST_CASE("normalize rejects degenerate and undersized configurations") {
    CHECK_THROWS_AS(normalize(PointConfig({{5.0, 5.0}, {5.0, 5.0}, {5.0, 5.0}})),
                    DegenerateConfig);
    CHECK_THROWS_AS(
        normalize(PointConfig({{0.1, 0.1}, {0.1, 0.1}, {0.1, 0.1}, {0.1, 0.1}})),
        DegenerateConfig);
    CHECK_THROWS_AS(PointConfig({{0.0, 0.0}, {1.0, 0.0}}), TooFewPoints);
    CHECK_THROWS_AS(ShapeVector::canonical({{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}}),
                    ZeroVector);
}

TEST_CASE("an equilateral triangle normalizes to the first eigenshape") {
    const ShapeVector s = normalize(triangle_config());
    CHECK(max_component_diff(s.amplitudes(), eigenshape(3, 1).amplitudes()) <
          1e-12);
}

TEST_CASE("fs_distance is a symmetric metric with range [0, pi]") {
    SplitMix64 g(13);
    for (int trial = 0; trial < 50; ++trial) {
        const ShapeVector a = random_shape(g, 5);
        const ShapeVector b = random_shape(g, 5);
        const ShapeVector c = random_shape(g, 5);
        const double ab = fs_distance(a, b);
        const double bc = fs_distance(b, c);
        const double ac = fs_distance(a, c);
        CHECK(ab >= 0.0);
        CHECK(ab <= std::numbers::pi + 1e-12);
        CHECK(ab == doctest::Approx(fs_distance(b, a)).epsilon(1e-12));
        CHECK(ac <= ab + bc + 1e-9);
    }
    const ShapeVector t = normalize(triangle_config());
    CHECK(fs_distance(t, t) == 0.0);
    CHECK(transition_probability(t, t) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("opposite triangle orientations are antipodal") {
    // The two triangle eigenshapes are reflections of each other and sit
    // at maximal distance.
    const ShapeVector up = eigenshape(3, 1);
    const ShapeVector down = eigenshape(3, 2);
    CHECK(transition_probability(up, down) < 1e-24);
    CHECK(fs_distance(up, down) == doctest::Approx(std::numbers::pi).epsilon(1e-12));
}

TEST_CASE("overlap requires matching sizes") {
    SplitMix64 g(14);
    CHECK_THROWS_AS(overlap(random_shape(g, 3), random_shape(g, 4)),
                    DimensionMismatch);
}

TEST_CASE("permute is covariant and composes contravariantly") {
    SplitMix64 g(15);
    const int n = 5;
    for (int trial = 0; trial < 50; ++trial) {
        const ShapeVector s = random_shape(g, n);

        std::vector<int> imgs(n);
        for (int i = 0; i < n; ++i) imgs[static_cast<std::size_t>(i)] = i;
        for (int i = n - 1; i > 0; --i) {
            const int j = static_cast<int>(g.next() % static_cast<std::uint64_t>(i + 1));
            std::swap(imgs[static_cast<std::size_t>(i)], imgs[static_cast<std::size_t>(j)]);
        }
        const Permutation p = Permutation::from_zero_based(imgs);

        for (int i = n - 1; i > 0; --i) {
            const int j = static_cast<int>(g.next() % static_cast<std::uint64_t>(i + 1));
            std::swap(imgs[static_cast<std::size_t>(i)], imgs[static_cast<std::size_t>(j)]);
        }
        const Permutation q = Permutation::from_zero_based(imgs);

        const ShapeVector lhs = permute(permute(s, p), q);
        const ShapeVector rhs = permute(s, compose(q, p));
        CHECK(max_component_diff(lhs.amplitudes(), rhs.amplitudes()) < 1e-12);

        // Moving point i to label p(i) must put amplitude i at index p(i),
        // up to the canonical global phase.
        const ShapeVector moved = permute(s, p);
        cvector_t expect(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            expect[static_cast<std::size_t>(p(i))] =
                s.amplitudes()[static_cast<std::size_t>(i)];
        }
        CHECK(testutil::ray_gap(moved.amplitudes(), expect) < 1e-12);
    }
    const ShapeVector s = random_shape(g, n);
    const ShapeVector same = permute(s, Permutation::identity(n));
    CHECK(max_component_diff(s.amplitudes(), same.amplitudes()) < 1e-15);
}

TEST_CASE("permutation construction validates its input") {
    CHECK_THROWS_AS(Permutation::from_one_based({1, 1, 3}), InvalidParams);
    CHECK_THROWS_AS(Permutation::from_one_based({1, 2, 4}), InvalidParams);
    CHECK_THROWS_AS(Permutation::transposition(3, 0, 2), IndexOutOfRange);
    CHECK_THROWS_AS(compose(Permutation::identity(3), Permutation::identity(4)),
                    DimensionMismatch);
}

TEST_CASE("unlabeled distance joins the two triangle orientations") {
    // Reflection equals relabelling for triangles: swapping two vertices
    // of |up> gives |down>'s ray exactly.
    CHECK(unlabeled_distance(eigenshape(3, 1), eigenshape(3, 2)) < 1e-10);
    CHECK(fs_distance(eigenshape(3, 1), eigenshape(3, 2)) ==
          doctest::Approx(std::numbers::pi));
}

TEST_CASE("unlabeled distance is a relabelling-invariant lower bound") {
    SplitMix64 g(16);
    for (int trial = 0; trial < 20; ++trial) {
        const ShapeVector a = random_shape(g, 5);
        const ShapeVector b = random_shape(g, 5);
        const double u = unlabeled_distance(a, b);
        CHECK(u <= fs_distance(a, b) + 1e-12);

        const Permutation swap12 = Permutation::transposition(5, 1, 2);
        CHECK(unlabeled_distance(a, permute(b, swap12)) ==
              doctest::Approx(u).epsilon(1e-10));
    }
}

TEST_CASE("unlabeled distance caps the point count") {
    SplitMix64 g(17);
    const ShapeVector a = random_shape(g, 11);
    const ShapeVector b = random_shape(g, 11);
    CHECK_THROWS_AS(unlabeled_distance(a, b), TooManyPoints);
}

TEST_CASE("sphere coordinates place the poles and equator") {
    CHECK(sphere_coords(eigenshape(3, 1)).theta == doctest::Approx(0.0));
    CHECK(sphere_coords(eigenshape(3, 1)).phi == 0.0);
    CHECK(sphere_coords(eigenshape(3, 2)).theta ==
          doctest::Approx(std::numbers::pi));
    CHECK(sphere_coords(eigenshape(3, 2)).phi == 0.0);

    const EigenBasis b3 = basis(3);
    const double inv = 1.0 / std::sqrt(2.0);
    CoeffVector equal;
    equal.basis_n_points = 3;
    equal.coefficients = {complex_t(inv, 0.0), complex_t(inv, 0.0)};
    const SphereCoords eq = sphere_coords(superpose(equal, b3));
    CHECK(eq.theta == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
    CHECK(eq.phi == doctest::Approx(0.0));

    CoeffVector quarter;
    quarter.basis_n_points = 3;
    quarter.coefficients = {complex_t(inv, 0.0), complex_t(0.0, inv)};
    const SphereCoords qc = sphere_coords(superpose(quarter, b3));
    CHECK(qc.theta == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
    CHECK(qc.phi == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));

    SplitMix64 g(18);
    CHECK_THROWS_AS(sphere_coords(random_shape(g, 4)), NotATriangle);
}

TEST_CASE("sphere coordinates of random triangles are consistent with distance") {
    // Fubini-Study distance equals the great-circle angle on the sphere
    // for N = 3: cos(angle between Bloch vectors) relates to the overlap.
    SplitMix64 g(19);
    for (int trial = 0; trial < 30; ++trial) {
        const ShapeVector s = random_shape(g, 3);
        const SphereCoords sc = sphere_coords(s);
        // Distance to the north pole (first eigenshape) is the polar angle.
        const double d = fs_distance(s, eigenshape(3, 1));
        CHECK(d == doctest::Approx(sc.theta).epsilon(1e-9));
    }
}

} // TEST_SUITE
