#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>

#include "tda/core.hpp"
#include "tda/io.hpp"
#include "tda/rng.hpp"

using namespace tda;

TEST_CASE("diagram construction enforces invariants") {
    CHECK_THROWS_AS(PersistenceDiagram({{1.0, 0.5}}, 1), std::invalid_argument);
    CHECK_THROWS_AS(PersistenceDiagram({{0.0, 1.0}}, -1), std::invalid_argument);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(PersistenceDiagram({{0.0, inf}}, 0), std::invalid_argument);

    PersistenceDiagram empty({}, 0);
    CHECK(empty.empty());
}

TEST_CASE("from_raw drops infinite-persistence classes and counts them") {
    const double inf = std::numeric_limits<double>::infinity();
    auto d = PersistenceDiagram::from_raw({{0.0, inf}, {0.0, 1.0}, {0.2, inf}}, 0);
    CHECK(d.size() == 1);
    CHECK(d.dropped_count() == 2);
    CHECK(d.points()[0] == DiagramPoint{0.0, 1.0});
}

TEST_CASE("transform to birth-persistence") {
    SECTION("diagonal point maps to zero persistence") {
        auto out = transform_to_birth_persistence(PersistenceDiagram({{0.0, 0.0}}, 0));
        REQUIRE(out.size() == 1);
        CHECK(out[0] == BirthPersistencePoint{0.0, 0.0});
    }
    SECTION("direct arithmetic") {
        auto out =
            transform_to_birth_persistence(PersistenceDiagram({{1.0, 3.0}, {2.0, 2.0}}, 1));
        REQUIRE(out.size() == 2);
        CHECK(out[0] == BirthPersistencePoint{1.0, 2.0});
        CHECK(out[1] == BirthPersistencePoint{2.0, 0.0});
    }
    SECTION("empty diagram") {
        CHECK(transform_to_birth_persistence(PersistenceDiagram({}, 1)).empty());
    }
}

TEST_CASE("transform is a bijection and never yields negative persistence") {
    Rng rng(20240801);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<DiagramPoint> pts;
        const int n = 1 + static_cast<int>(rng.below(12));
        for (int i = 0; i < n; ++i) {
            const double b = rng.uniform(-2.0, 2.0);
            pts.push_back({b, b + rng.uniform()});
        }
        PersistenceDiagram d(pts, 1);
        const auto bp = transform_to_birth_persistence(d);
        REQUIRE(bp.size() == pts.size());
        for (std::size_t i = 0; i < bp.size(); ++i) {
            CHECK(bp[i].persistence >= 0.0);
            const auto back = birth_death_from(bp[i]);
            CHECK(back.birth == pts[i].birth);
            CHECK(back.death == pts[i].death);
        }
    }
}

TEST_CASE("image spec validation") {
    ImageSpec spec;
    spec.rows = 4;
    spec.cols = 4;
    spec.sigma = 0.1;
    spec.weight_ceiling_b = 1.0;
    spec.birth_min = 0.0;
    spec.birth_max = 1.0;
    spec.pers_min = 0.0;
    spec.pers_max = 1.0;
    CHECK_NOTHROW(spec.validate());

    ImageSpec bad = spec;
    bad.sigma = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = spec;
    bad.birth_max = bad.birth_min;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    ImageSpec oned = spec;
    oned.one_dimensional = true;
    oned.rows = 1;
    oned.birth_max = oned.birth_min;  // collapsed axis is fine in 1-D mode
    CHECK_NOTHROW(oned.validate());
}

TEST_CASE("scalar grid and point cloud invariants") {
    CHECK_THROWS_AS(ScalarGrid(1, 5, std::vector<double>(5, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(PointCloud(3, {}), std::invalid_argument);
    CHECK_THROWS_AS(PointCloud(3, {1.0, 2.0}), std::invalid_argument);

    PointCloud cloud(2, {0.0, 0.0, 3.0, 4.0});
    CHECK(cloud.size() == 2);
    CHECK(cloud.distance(0, 1) == Catch::Approx(5.0));
    CHECK(cloud.diameter() == Catch::Approx(5.0));
}

TEST_CASE("diagram CSV round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "tda_core_test";
    std::filesystem::create_directories(dir);

    Rng rng(99);
    std::vector<DiagramPoint> pts;
    for (int i = 0; i < 20; ++i) {
        const double b = rng.uniform();
        pts.push_back({b, b + rng.uniform()});
    }
    PersistenceDiagram d(pts, 1);

    const auto path = diagram_path(dir / "sample", 1);
    CHECK(path.filename() == "sample_h1.csv");
    CHECK(hom_dim_from_path(path) == 1);
    write_diagram_csv(path, d);
    const auto back = read_diagram_csv(path, 1);
    REQUIRE(back.size() == d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        CHECK(back.points()[i].birth == d.points()[i].birth);
        CHECK(back.points()[i].death == d.points()[i].death);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("cloud and grid CSV round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "tda_core_test_io";
    std::filesystem::create_directories(dir);

    PointCloud cloud(3, {0.25, -1.5, 2.0, 1.0 / 3.0, 0.0, 9.5});
    write_cloud_csv(dir / "cloud.csv", cloud);
    const auto cloud_back = read_cloud_csv(dir / "cloud.csv");
    REQUIRE(cloud_back.size() == cloud.size());
    REQUIRE(cloud_back.dim() == 3);
    CHECK(cloud_back.coords() == cloud.coords());

    ScalarGrid grid(2, 3, {0.0, 0.125, -3.0, 4.5, 1e-9, 7.0});
    write_grid_csv(dir / "grid.csv", grid);
    const auto grid_back = read_grid_csv(dir / "grid.csv");
    CHECK(grid_back.rows == 2);
    CHECK(grid_back.cols == 3);
    CHECK(grid_back.values == grid.values);
    std::filesystem::remove_all(dir);
}
