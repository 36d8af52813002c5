#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "tda/datasets.hpp"
#include "tda/rng.hpp"

using namespace tda;

TEST_CASE("noiseless shapes satisfy their implicit equations") {
    SECTION("circle: x^2 + y^2 = 1, z = 0") {
        const auto cloud = sample_shape(ShapeClass::circle, 200, 0.0, 11);
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            const double* p = cloud.point(i);
            CHECK(std::abs(p[0] * p[0] + p[1] * p[1] - 1.0) < 1e-12);
            CHECK(p[2] == 0.0);
        }
    }
    SECTION("sphere: ||p|| = 1") {
        const auto cloud = sample_shape(ShapeClass::sphere, 200, 0.0, 12);
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            const double* p = cloud.point(i);
            const double n = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
            CHECK(std::abs(n - 1.0) < 1e-12);
        }
    }
    SECTION("torus: (sqrt(x^2+y^2) - R)^2 + z^2 = r^2") {
        const auto cloud = sample_shape(ShapeClass::torus, 200, 0.0, 13);
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            const double* p = cloud.point(i);
            const double ring = std::sqrt(p[0] * p[0] + p[1] * p[1]) - 1.0;
            CHECK(std::abs(ring * ring + p[2] * p[2] - 0.25) < 1e-12);
        }
    }
    SECTION("cube stays in the unit box") {
        const auto cloud = sample_shape(ShapeClass::solid_cube, 200, 0.0, 14);
        for (double c : cloud.coords()) {
            CHECK(c >= 0.0);
            CHECK(c < 1.0);
        }
    }
}

TEST_CASE("generation is deterministic under a seed") {
    for (ShapeClass cls : all_shape_classes()) {
        const auto a = sample_shape(cls, 50, 0.1, 77);
        const auto b = sample_shape(cls, 50, 0.1, 77);
        CHECK(a.coords() == b.coords());
        const auto c = sample_shape(cls, 50, 0.1, 78);
        CHECK(a.coords() != c.coords());
    }
    const auto o1 = ltm_orbit({4.3, 500, 5});
    const auto o2 = ltm_orbit({4.3, 500, 5});
    CHECK(o1.coords() == o2.coords());
}

TEST_CASE("shape labels name their class") {
    CHECK(sample_shape(ShapeClass::torus, 3, 0.0, 1).label() == "torus");
    CHECK(shape_class_from_name("nested_clusters") == ShapeClass::nested_clusters);
    CHECK_THROWS_AS(shape_class_from_name("klein_bottle"), std::invalid_argument);
}

TEST_CASE("linked twist map fixed points") {
    // (0, 0) is fixed: r*0*(1-0) = 0. The orbit generator seeds randomly,
    // so iterate the map directly here.
    const double r = 4.0;
    double x = 0.5, y = 0.5;
    for (int i = 0; i < 10; ++i) {
        const double nx = std::fmod(x + r * y * (1.0 - y), 1.0);
        const double ny = std::fmod(y + r * x * (1.0 - x), 1.0);
        x = nx;
        y = ny;
        CHECK(x == 0.5);
        CHECK(y == 0.5);
    }
}

TEST_CASE("ltm orbit matches an independent iteration bit for bit") {
    const LtmParams params{4.3, 1000, 99};
    const auto orbit = ltm_orbit(params);
    REQUIRE(orbit.size() == 1001);

    // Second, separately written iteration of the same two-line map.
    Rng rng(params.seed);
    double x = rng.uniform();
    double y = rng.uniform();
    for (std::size_t i = 0; i < orbit.size(); ++i) {
        CHECK(orbit.point(i)[0] == x);
        CHECK(orbit.point(i)[1] == y);
        const double x_old = x;
        x = std::fmod(x + params.r * y * (1.0 - y), 1.0);
        y = std::fmod(y + params.r * x_old * (1.0 - x_old), 1.0);
    }
}

TEST_CASE("ltm orbits stay inside the unit square") {
    for (double r : {2.5, 3.5, 4.0, 4.1, 4.3}) {
        const auto orbit = ltm_orbit({r, 2000, 31});
        for (double c : orbit.coords()) {
            CHECK(c >= 0.0);
            CHECK(c < 1.0);
        }
    }
    CHECK_THROWS_AS(ltm_orbit({-1.0, 10, 1}), std::invalid_argument);
}

TEST_CASE("orbit subsampling") {
    const auto orbit = ltm_orbit({4.3, 1000, 3});
    const auto sub = subsample_cloud(orbit, 300);
    CHECK(sub.size() == 300);
    CHECK(sub.point(0)[0] == orbit.point(0)[0]);
    const auto same = subsample_cloud(sub, 500);
    CHECK(same.size() == 300);
}

TEST_CASE("shared image bounds") {
    SECTION("single diagram") {
        PersistenceDiagram d({{0.0, 1.0}}, 1);
        const auto bounds = shared_image_bounds({d}, 0.1);
        CHECK(bounds.weight_ceiling_b == Catch::Approx(1.0));
        CHECK(bounds.pers_max == Catch::Approx(1.3));
        CHECK(bounds.birth_max == Catch::Approx(0.3));
    }
    SECTION("maximum over diagrams") {
        PersistenceDiagram a({{0.0, 1.0}}, 1);
        PersistenceDiagram b({{0.0, 3.0}}, 1);
        CHECK(shared_image_bounds({a, b}, 0.1).weight_ceiling_b == Catch::Approx(3.0));
    }
    SECTION("fold over many diagrams") {
        Rng rng(654);
        std::vector<PersistenceDiagram> diagrams;
        double expected = 0.0;
        for (int i = 0; i < 150; ++i) {
            std::vector<DiagramPoint> pts;
            const int n = 1 + static_cast<int>(rng.below(10));
            for (int k = 0; k < n; ++k) {
                const double birth = rng.uniform();
                const double pers = rng.uniform();
                pts.push_back({birth, birth + pers});
                expected = std::max(expected, pers);
            }
            diagrams.emplace_back(pts, 1);
        }
        CHECK(shared_image_bounds(diagrams, 0.05).weight_ceiling_b == Catch::Approx(expected));
    }
    SECTION("empty input is an error") {
        CHECK_THROWS_AS(shared_image_bounds({}, 0.1), std::invalid_argument);
        PersistenceDiagram empty({}, 1);
        CHECK_THROWS_AS(shared_image_bounds({empty}, 0.1), std::invalid_argument);
    }
}
