#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "tda/filtration.hpp"
#include "tda/metrics.hpp"
#include "tda/rng.hpp"

using namespace tda;

namespace {

PointCloud random_cloud(Rng& rng, int n, int dim = 3) {
    std::vector<double> coords;
    for (int i = 0; i < n * dim; ++i) coords.push_back(rng.uniform());
    return PointCloud(dim, std::move(coords));
}

std::vector<DiagramPoint> sorted_points(const PersistenceDiagram& d) {
    auto pts = d.points();
    std::sort(pts.begin(), pts.end());
    return pts;
}

}  // namespace

TEST_CASE("rips complex on two points") {
    PointCloud cloud(1, {0.0, 1.0});
    const auto complex = rips_complex(cloud, 2, 2.0);
    const auto counts = complex.cell_counts();
    CHECK(counts[0] == 2);
    CHECK(counts[1] == 1);
    CHECK(counts[2] == 0);
    const auto& edge = complex.cells.back();
    CHECK(edge.dim == 1);
    CHECK(edge.value == 1.0);
}

TEST_CASE("rips triangle enters at the max edge value") {
    // Equilateral triangle, side 1.
    const double h = 0.8660254037844386;
    PointCloud cloud(2, {0.0, 0.0, 1.0, 0.0, 0.5, h});
    const auto complex = rips_complex(cloud, 2, 2.0);
    const auto counts = complex.cell_counts();
    CHECK(counts[1] == 3);
    REQUIRE(counts[2] == 1);
    CHECK(complex.cells.back().dim == 2);
    CHECK(complex.cells.back().value == Catch::Approx(1.0));
}

TEST_CASE("rips on the unit square") {
    PointCloud cloud(2, {0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0, 1.0});
    const auto complex = rips_complex(cloud, 2, 2.0);
    const double sqrt2 = 1.4142135623730951;

    std::vector<double> edge_values, triangle_values;
    for (const auto& cell : complex.cells) {
        if (cell.dim == 1) edge_values.push_back(cell.value);
        if (cell.dim == 2) triangle_values.push_back(cell.value);
    }
    REQUIRE(edge_values.size() == 6);
    CHECK(std::count(edge_values.begin(), edge_values.end(), 1.0) == 4);
    CHECK(std::count_if(edge_values.begin(), edge_values.end(), [&](double v) {
              return v == Catch::Approx(sqrt2);
          }) == 2);
    REQUIRE(triangle_values.size() == 4);  // every triangle contains a diagonal
    for (double v : triangle_values) CHECK(v == Catch::Approx(sqrt2));
}

TEST_CASE("rips parameter validation") {
    PointCloud cloud(1, {0.0, 1.0});
    CHECK_THROWS_AS(rips_complex(cloud, 3, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(rips_complex(cloud, 2, -1.0), std::invalid_argument);
}

TEST_CASE("persistence H0 of two points") {
    PointCloud cloud(1, {0.0, 1.0});
    const auto result = persistence(rips_complex(cloud, 2, 2.0), 1);
    REQUIRE(result.diagrams[0].size() == 1);
    CHECK(result.diagrams[0].points()[0] == DiagramPoint{0.0, 1.0});
    CHECK(result.essential_counts[0] == 1);  // the immortal component
    CHECK(result.diagrams[1].empty());
}

TEST_CASE("persistence H1 of the unit square is (1, sqrt 2)") {
    PointCloud cloud(2, {0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0, 1.0});
    const auto result = persistence(rips_complex(cloud, 2, 2.0), 1);
    REQUIRE(result.diagrams[1].size() == 1);
    CHECK(result.diagrams[1].points()[0].birth == Catch::Approx(1.0));
    CHECK(result.diagrams[1].points()[0].death == Catch::Approx(1.4142135623730951));
    CHECK(result.essential_counts[1] == 0);
}

TEST_CASE("20 points on a circle carry exactly one H1 class") {
    const double two_pi = 6.283185307179586476925286766559;
    std::vector<double> coords;
    for (int i = 0; i < 20; ++i) {
        coords.push_back(std::cos(two_pi * i / 20.0));
        coords.push_back(std::sin(two_pi * i / 20.0));
    }
    PointCloud cloud(2, std::move(coords));
    const auto complex = rips_complex(cloud, 2);
    const auto result = persistence(complex, 1);

    REQUIRE(result.diagrams[1].size() == 1);
    // Born when the polygon edges appear: 2 sin(pi/20).
    CHECK(result.diagrams[1].points()[0].birth == Catch::Approx(0.31286893008046174));

    const auto naive = oracles::naive_persistence(complex, 1);
    REQUIRE(naive.points[1].size() == 1);
    CHECK(result.diagrams[1].points()[0].birth == naive.points[1][0].birth);
    CHECK(result.diagrams[1].points()[0].death == naive.points[1][0].death);
}

TEST_CASE("cubical filtration of a constant grid") {
    ScalarGrid grid(3, 3, std::vector<double>(9, 2.5));
    const auto complex = cubical_sublevel(grid);
    for (const auto& cell : complex.cells) CHECK(cell.value == 2.5);
    const auto result = persistence(complex, 1);
    CHECK(result.diagrams[0].empty());  // one essential component, nothing else
    CHECK(result.essential_counts[0] == 1);
    CHECK(result.diagrams[1].empty());
    CHECK(result.essential_counts[1] == 0);
}

TEST_CASE("3x3 ring of zeros around a slow center") {
    // Border vertices 0, center 1. The 8 border edges form a cycle at 0;
    // the squares need the center, so the loop lives until 1.
    ScalarGrid grid(3, 3, {0, 0, 0, 0, 1, 0, 0, 0, 0});
    const auto complex = cubical_sublevel(grid);
    const auto result = persistence(complex, 1);

    CHECK(result.diagrams[0].empty());
    CHECK(result.essential_counts[0] == 1);
    REQUIRE(result.diagrams[1].size() == 1);
    CHECK(result.diagrams[1].points()[0] == DiagramPoint{0.0, 1.0});

    const auto naive = oracles::naive_persistence(complex, 1);
    REQUIRE(naive.points[1].size() == 1);
    CHECK(naive.points[1][0] == DiagramPoint{0.0, 1.0});
}

TEST_CASE("5x5 ring grid has exactly one H1 point (0, 1)") {
    std::vector<double> values(25, 1.0);
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 5; ++c)
            if (r == 0 || r == 4 || c == 0 || c == 4) values[r * 5 + c] = 0.0;
    const auto result = persistence(cubical_sublevel(ScalarGrid(5, 5, values)), 1);
    REQUIRE(result.diagrams[1].size() == 1);
    CHECK(result.diagrams[1].points()[0] == DiagramPoint{0.0, 1.0});
    CHECK(result.essential_counts[0] == 1);
    CHECK(result.essential_counts[1] == 0);
}

TEST_CASE("reduction agrees with the naive oracle on random clouds") {
    Rng rng(424242);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(6));  // up to 8 points
        const auto cloud = random_cloud(rng, n);
        const auto complex = rips_complex(cloud, 2);
        const auto fast = persistence(complex, 1);
        const auto naive = oracles::naive_persistence(complex, 1);
        for (int dim = 0; dim <= 1; ++dim) {
            const auto got = sorted_points(fast.diagrams[dim]);
            REQUIRE(got.size() == naive.points[dim].size());
            for (std::size_t i = 0; i < got.size(); ++i) {
                CHECK(got[i].birth == naive.points[dim][i].birth);
                CHECK(got[i].death == naive.points[dim][i].death);
            }
            CHECK(fast.essential_counts[dim] == naive.essential[dim]);
        }
    }
}

TEST_CASE("reduction agrees with the naive oracle on random grids") {
    Rng rng(515151);
    for (int trial = 0; trial < 40; ++trial) {
        const int rows = 2 + static_cast<int>(rng.below(5));
        const int cols = 2 + static_cast<int>(rng.below(5));
        std::vector<double> values;
        for (int i = 0; i < rows * cols; ++i)
            values.push_back(rng.below(4) * 0.5);  // ties on purpose
        const auto complex = cubical_sublevel(ScalarGrid(rows, cols, values));
        const auto fast = persistence(complex, 1);
        const auto naive = oracles::naive_persistence(complex, 1);
        for (int dim = 0; dim <= 1; ++dim) {
            const auto got = sorted_points(fast.diagrams[dim]);
            REQUIRE(got.size() == naive.points[dim].size());
            for (std::size_t i = 0; i < got.size(); ++i) {
                CHECK(got[i].birth == naive.points[dim][i].birth);
                CHECK(got[i].death == naive.points[dim][i].death);
            }
            CHECK(fast.essential_counts[dim] == naive.essential[dim]);
        }
    }
}

TEST_CASE("euler characteristic matches Betti numbers at full scale") {
    Rng rng(606060);
    for (int trial = 0; trial < 25; ++trial) {
        const int rows = 2 + static_cast<int>(rng.below(7));
        const int cols = 2 + static_cast<int>(rng.below(7));
        std::vector<double> values;
        for (int i = 0; i < rows * cols; ++i) values.push_back(rng.uniform());
        const auto complex = cubical_sublevel(ScalarGrid(rows, cols, values));
        const auto counts = complex.cell_counts();
        const auto result = persistence(complex, 1);
        const long euler = static_cast<long>(counts[0]) - static_cast<long>(counts[1]) +
                           static_cast<long>(counts[2]);
        const long betti = static_cast<long>(result.essential_counts[0]) -
                           static_cast<long>(result.essential_counts[1]);
        CHECK(euler == betti);
    }
}

TEST_CASE("diagram stability under point perturbation") {
    Rng rng(717171);
    for (int trial = 0; trial < 8; ++trial) {
        const auto cloud = random_cloud(rng, 14);
        const double delta = 0.01 + 0.02 * rng.uniform();

        std::vector<double> moved = cloud.coords();
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            // A random direction scaled to length <= delta.
            double d[3] = {rng.normal(), rng.normal(), rng.normal()};
            const double norm = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
            const double scale = delta * rng.uniform() / std::max(norm, 1e-12);
            for (int k = 0; k < 3; ++k) moved[i * 3 + k] += scale * d[k];
        }
        PointCloud perturbed(3, moved);

        const auto a = persistence(rips_complex(cloud, 2), 1);
        const auto b = persistence(rips_complex(perturbed, 2), 1);
        for (int dim = 0; dim <= 1; ++dim) {
            const double w = bottleneck(a.diagrams[dim], b.diagrams[dim]).first;
            CHECK(w <= 2.0 * delta + 1e-12);
        }
    }
}

TEST_CASE("birth never exceeds death in any output") {
    Rng rng(838383);
    for (int trial = 0; trial < 10; ++trial) {
        const auto result = persistence(rips_complex(random_cloud(rng, 10), 2), 1);
        for (const auto& diagram : result.diagrams)
            for (const auto& p : diagram.points()) CHECK(p.birth <= p.death);
    }
}

TEST_CASE("unsorted complexes are rejected") {
    PointCloud cloud(1, {0.0, 1.0, 3.0});
    auto complex = rips_complex(cloud, 2, 5.0);
    std::swap(complex.cells.front(), complex.cells.back());
    CHECK_THROWS_AS(persistence(complex, 1), std::runtime_error);
    CHECK_THROWS_AS(persistence(rips_complex(cloud, 2, 5.0), 2), std::invalid_argument);
}
