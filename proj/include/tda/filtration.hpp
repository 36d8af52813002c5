#pragma once

// Filtered complexes and their persistence. Two builders are provided:
// Vietoris-Rips on a point cloud (vertices, edges, triangles) and the
// sublevel-set filtration on a scalar grid (vertices, edges, squares; a
// cell enters when all of its vertices have entered).
//
// Persistence uses Z/2 coefficients. H0 is computed by a union-find sweep
// over edges (elder rule); H1 by column reduction of the 2-cell boundary
// matrix over edge ranks. The block structure of the boundary matrix makes
// the per-dimension reduction equal to the global one. A naive full-matrix
// reduction lives in the test suite as the independent oracle.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "tda/core.hpp"

namespace tda {

struct Cell {
    double value = 0.0;
    std::uint8_t dim = 0;
    std::uint8_t vertex_count = 0;
    std::array<std::int32_t, 4> vertices{-1, -1, -1, -1};  // sorted ascending

    friend bool operator<(const Cell& a, const Cell& b) {
        if (a.value != b.value) return a.value < b.value;
        if (a.dim != b.dim) return a.dim < b.dim;
        return a.vertices < b.vertices;
    }
};

/// A filtration-sorted list of cells. Faces always precede cofaces: a face
/// has filtration value <= its coface's and, at equal value, lower dimension.
struct FilteredComplex {
    enum class Kind { simplicial, cubical };

    Kind kind = Kind::simplicial;
    std::int32_t vertex_count = 0;
    std::vector<Cell> cells;

    std::array<std::size_t, 3> cell_counts() const {
        std::array<std::size_t, 3> counts{0, 0, 0};
        for (const auto& c : cells) counts[c.dim]++;
        return counts;
    }
};

inline Cell make_vertex(std::int32_t v, double value) {
    Cell c;
    c.value = value;
    c.dim = 0;
    c.vertex_count = 1;
    c.vertices[0] = v;
    return c;
}

inline Cell make_edge(std::int32_t a, std::int32_t b, double value) {
    if (a > b) std::swap(a, b);
    Cell c;
    c.value = value;
    c.dim = 1;
    c.vertex_count = 2;
    c.vertices[0] = a;
    c.vertices[1] = b;
    return c;
}

inline Cell make_two_cell(std::array<std::int32_t, 4> verts, std::uint8_t count, double value) {
    Cell c;
    c.value = value;
    c.dim = 2;
    c.vertex_count = count;
    std::sort(verts.begin(), verts.begin() + count);
    for (int i = 0; i < count; ++i) c.vertices[i] = verts[i];
    return c;
}

/// Vietoris-Rips filtration under the Euclidean metric: vertices at scale 0,
/// an edge at the distance of its endpoints, a triangle at the largest of
/// its three edge values. Simplices with value above max_scale are omitted.
inline FilteredComplex rips_complex(const PointCloud& cloud, int max_dim, double max_scale) {
    if (max_dim < 1 || max_dim > 2)
        throw std::invalid_argument("rips_complex supports max_dim in {1, 2}");
    if (!(max_scale >= 0.0)) throw std::invalid_argument("max_scale must be >= 0");
    const std::size_t n = cloud.size();

    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = cloud.distance(i, j);
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }

    FilteredComplex complex;
    complex.kind = FilteredComplex::Kind::simplicial;
    complex.vertex_count = static_cast<std::int32_t>(n);

    std::size_t edge_count = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (dist[i * n + j] <= max_scale) ++edge_count;
    complex.cells.reserve(n + edge_count);

    for (std::size_t i = 0; i < n; ++i)
        complex.cells.push_back(make_vertex(static_cast<std::int32_t>(i), 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (dist[i * n + j] <= max_scale)
                complex.cells.push_back(make_edge(static_cast<std::int32_t>(i),
                                                  static_cast<std::int32_t>(j),
                                                  dist[i * n + j]));
    if (max_dim >= 2) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double dij = dist[i * n + j];
                if (dij > max_scale) continue;
                for (std::size_t k = j + 1; k < n; ++k) {
                    const double djk = dist[j * n + k];
                    if (djk > max_scale) continue;
                    const double dik = dist[i * n + k];
                    if (dik > max_scale) continue;
                    const double v = std::max(dij, std::max(djk, dik));
                    complex.cells.push_back(make_two_cell(
                        {static_cast<std::int32_t>(i), static_cast<std::int32_t>(j),
                         static_cast<std::int32_t>(k), -1},
                        3, v));
                }
            }
    }
    std::sort(complex.cells.begin(), complex.cells.end());
    return complex;
}

/// Rips filtration with all edges included (max_scale = cloud diameter).
inline FilteredComplex rips_complex(const PointCloud& cloud, int max_dim) {
    return rips_complex(cloud, max_dim, cloud.diameter());
}

/// Cubical sublevel-set filtration of a scalar grid: a vertex enters at its
/// sample value, an edge when both endpoints are in, a square when all four
/// corners are in (so edge/square values are vertex maxima).
inline FilteredComplex cubical_sublevel(const ScalarGrid& grid) {
    const int R = grid.rows, C = grid.cols;
    const auto vid = [C](int r, int c) { return static_cast<std::int32_t>(r) * C + c; };

    FilteredComplex complex;
    complex.kind = FilteredComplex::Kind::cubical;
    complex.vertex_count = static_cast<std::int32_t>(R) * C;
    complex.cells.reserve(static_cast<std::size_t>(R) * C + R * (C - 1) + (R - 1) * C +
                          static_cast<std::size_t>(R - 1) * (C - 1));

    for (int r = 0; r < R; ++r)
        for (int c = 0; c < C; ++c)
            complex.cells.push_back(make_vertex(vid(r, c), grid.at(r, c)));
    for (int r = 0; r < R; ++r)
        for (int c = 0; c + 1 < C; ++c)
            complex.cells.push_back(make_edge(vid(r, c), vid(r, c + 1),
                                              std::max(grid.at(r, c), grid.at(r, c + 1))));
    for (int r = 0; r + 1 < R; ++r)
        for (int c = 0; c < C; ++c)
            complex.cells.push_back(make_edge(vid(r, c), vid(r + 1, c),
                                              std::max(grid.at(r, c), grid.at(r + 1, c))));
    for (int r = 0; r + 1 < R; ++r)
        for (int c = 0; c + 1 < C; ++c) {
            const double v = std::max(std::max(grid.at(r, c), grid.at(r, c + 1)),
                                      std::max(grid.at(r + 1, c), grid.at(r + 1, c + 1)));
            complex.cells.push_back(
                make_two_cell({vid(r, c), vid(r, c + 1), vid(r + 1, c), vid(r + 1, c + 1)}, 4, v));
        }
    std::sort(complex.cells.begin(), complex.cells.end());
    return complex;
}

/// Diagrams per dimension plus the number of essential (infinite) classes
/// that were dropped from each.
struct PersistenceResult {
    std::vector<PersistenceDiagram> diagrams;
    std::vector<std::size_t> essential_counts;
};

namespace detail {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    std::int32_t find(std::int32_t x) {
        std::int32_t root = x;
        while (parent_[root] != root) root = parent_[root];
        while (parent_[x] != root) {
            const std::int32_t next = parent_[x];
            parent_[x] = root;
            x = next;
        }
        return root;
    }

    void link(std::int32_t child_root, std::int32_t parent_root) {
        parent_[child_root] = parent_root;
    }

private:
    std::vector<std::int32_t> parent_;
};

// Z/2 symmetric difference of two ascending index vectors.
inline void symdiff(const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b,
                    std::vector<std::int32_t>& out) {
    out.clear();
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j])
            out.push_back(a[i++]);
        else if (b[j] < a[i])
            out.push_back(b[j++]);
        else {
            ++i;
            ++j;
        }
    }
    out.insert(out.end(), a.begin() + i, a.end());
    out.insert(out.end(), b.begin() + j, b.end());
}

inline std::uint64_t edge_key(std::int32_t a, std::int32_t b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

}  // namespace detail

/// Persistent homology of a sorted filtered complex, dimensions 0..max_hom_dim
/// (at most 1; the builders above emit cells up to dimension 2). Essential
/// classes are dropped from the diagrams and counted. Zero-persistence pairs
/// (birth == death) are discarded.
inline PersistenceResult persistence(const FilteredComplex& complex, int max_hom_dim) {
    if (max_hom_dim < 0 || max_hom_dim > 1)
        throw std::invalid_argument("persistence supports max_hom_dim in {0, 1}");
    for (std::size_t i = 1; i < complex.cells.size(); ++i)
        if (complex.cells[i] < complex.cells[i - 1])
            throw std::runtime_error("filtered complex is not sorted");

    const double inf = std::numeric_limits<double>::infinity();
    const std::size_t n_vertices = static_cast<std::size_t>(complex.vertex_count);

    // Split the sorted order by dimension; relative order is preserved.
    std::vector<double> vertex_value(n_vertices,
                                     std::numeric_limits<double>::quiet_NaN());
    std::vector<const Cell*> edges, faces;
    for (const auto& cell : complex.cells) {
        switch (cell.dim) {
            case 0: {
                const std::int32_t v = cell.vertices[0];
                if (v < 0 || static_cast<std::size_t>(v) >= n_vertices)
                    throw std::runtime_error("vertex id out of range");
                vertex_value[v] = cell.value;
                break;
            }
            case 1:
                edges.push_back(&cell);
                break;
            default:
                faces.push_back(&cell);
                break;
        }
    }
    for (double v : vertex_value)
        if (std::isnan(v)) throw std::runtime_error("complex is missing a vertex cell");

    std::unordered_map<std::uint64_t, std::int32_t> edge_rank;
    edge_rank.reserve(edges.size() * 2);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto* cell = edges[e];
        if (vertex_value[cell->vertices[0]] > cell->value ||
            vertex_value[cell->vertices[1]] > cell->value)
            throw std::runtime_error("edge enters before one of its vertices");
        const auto [it, fresh] = edge_rank.emplace(
            detail::edge_key(cell->vertices[0], cell->vertices[1]),
            static_cast<std::int32_t>(e));
        if (!fresh) throw std::runtime_error("duplicate edge in complex");
    }

    // --- H0: union-find sweep over edges in filtration order (elder rule).
    std::vector<DiagramPoint> h0_raw;
    std::vector<char> edge_positive(edges.size(), 0);
    {
        detail::UnionFind uf(n_vertices);
        std::vector<double> root_birth(vertex_value);
        for (std::size_t e = 0; e < edges.size(); ++e) {
            const auto* cell = edges[e];
            const std::int32_t ra = uf.find(cell->vertices[0]);
            const std::int32_t rb = uf.find(cell->vertices[1]);
            if (ra == rb) {
                edge_positive[e] = 1;  // creates a cycle
                continue;
            }
            // The component born later dies here; ties resolve to the
            // lower-indexed root surviving.
            std::int32_t dying = rb, living = ra;
            if (root_birth[ra] > root_birth[rb] ||
                (root_birth[ra] == root_birth[rb] && ra > rb)) {
                dying = ra;
                living = rb;
            }
            if (cell->value > root_birth[dying])
                h0_raw.push_back({root_birth[dying], cell->value});
            uf.link(dying, living);
            root_birth[living] = std::min(root_birth[living], root_birth[dying]);
        }
        // Surviving components are essential H0 classes.
        std::vector<char> seen(n_vertices, 0);
        for (std::size_t v = 0; v < n_vertices; ++v) {
            const std::int32_t r = uf.find(static_cast<std::int32_t>(v));
            if (!seen[r]) {
                seen[r] = 1;
                h0_raw.push_back({root_birth[r], inf});
            }
        }
    }

    PersistenceResult result;
    result.diagrams.push_back(PersistenceDiagram::from_raw(h0_raw, 0));
    result.essential_counts.push_back(result.diagrams[0].dropped_count());
    if (max_hom_dim == 0) return result;

    // --- H1 via the anti-transpose: reduce edge coboundary columns in
    // reverse filtration order. The (edge, 2-cell) pairs equal the boundary
    // reduction's pairs, with far less fill-in for Rips inputs, and
    // clearing is free: negative (tree) edges reduce to zero and are
    // skipped outright. Positive edges whose column vanishes are essential.
    std::vector<DiagramPoint> h1_raw;
    {
        const bool cubical = complex.kind == FilteredComplex::Kind::cubical;
        const std::int32_t n_faces = static_cast<std::int32_t>(faces.size());

        // Cofacet lists per positive edge, as reverse face ranks, ascending.
        std::vector<std::vector<std::int32_t>> cofacets(edges.size());
        for (std::int32_t j = n_faces - 1; j >= 0; --j) {
            const Cell& cell = *faces[j];
            const auto push_cofacet = [&](std::int32_t a, std::int32_t b) {
                const auto it = edge_rank.find(detail::edge_key(std::min(a, b), std::max(a, b)));
                if (it == edge_rank.end())
                    throw std::runtime_error("2-cell facet missing from complex");
                if (edges[it->second]->value > cell.value)
                    throw std::runtime_error("2-cell enters before one of its edges");
                if (edge_positive[it->second])
                    cofacets[it->second].push_back(n_faces - 1 - j);
            };
            const auto& v = cell.vertices;
            if (cubical) {
                // Square [v0 v1; v2 v3]: the four sides, not the diagonals.
                push_cofacet(v[0], v[1]);
                push_cofacet(v[0], v[2]);
                push_cofacet(v[1], v[3]);
                push_cofacet(v[2], v[3]);
            } else {
                push_cofacet(v[0], v[1]);
                push_cofacet(v[0], v[2]);
                push_cofacet(v[1], v[2]);
            }
        }

        std::vector<std::int32_t> low_to_col(faces.size(), -1);
        std::vector<std::vector<std::int32_t>> stored(edges.size());
        std::vector<std::int32_t> col, scratch;
        for (std::int32_t e = static_cast<std::int32_t>(edges.size()) - 1; e >= 0; --e) {
            if (!edge_positive[e]) continue;
            col = std::move(cofacets[e]);
            while (!col.empty()) {
                const std::int32_t other = low_to_col[col.back()];
                if (other < 0) break;
                detail::symdiff(col, stored[other], scratch);
                col.swap(scratch);
            }
            if (!col.empty()) {
                const std::int32_t low = col.back();
                low_to_col[low] = e;
                const Cell& killer = *faces[n_faces - 1 - low];
                if (killer.value > edges[e]->value)
                    h1_raw.push_back({edges[e]->value, killer.value});
                stored[e] = std::move(col);
            } else {
                h1_raw.push_back({edges[e]->value, inf});
            }
        }
    }

    result.diagrams.push_back(PersistenceDiagram::from_raw(h1_raw, 1));
    result.essential_counts.push_back(result.diagrams[1].dropped_count());
    return result;
}

}  // namespace tda
