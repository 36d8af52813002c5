#pragma once

// Distances between persistence diagrams (p-Wasserstein, bottleneck) and
// between flat vectors (L1/L2/Linf), plus distance-matrix assembly.
//
// Diagram distances follow the standard diagonal augmentation: to match B
// (m points) against B' (n points), solve an (m+n) x (m+n) assignment
// problem in which every point may also pair with its own diagonal
// projection (infinity-norm cost persistence/2) and diagonal-diagonal
// pairs are free. Ground metric between points is the infinity norm, in
// birth-death coordinates.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tda/core.hpp"
#include "tda/parallel.hpp"

namespace tda {

/// An explicit matching between two diagrams. Index kDiagonal stands for a
/// point's diagonal projection. Every off-diagonal point of each diagram
/// appears in exactly one pair; diagonal-diagonal filler pairs are omitted.
struct Matching {
    static constexpr int kDiagonal = -1;
    std::vector<std::pair<int, int>> pairs;
    double cost = 0.0;
};

inline double linf_point_distance(const DiagramPoint& a, const DiagramPoint& b) {
    return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

/// Infinity-norm distance from a point to the diagonal (its projection).
inline double diagonal_gap(const DiagramPoint& a) { return a.persistence() / 2.0; }

namespace detail {

// Dense min-cost perfect assignment, shortest augmenting paths with dual
// potentials. Exact; O(n^3). Returns row -> column.
inline std::vector<int> solve_assignment(const std::vector<double>& cost, int n) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = -1;
            double delta = kInf;
            const double* row = cost.data() + static_cast<std::size_t>(i0 - 1) * n;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = row[j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

// Augmented cost matrix entry for the diagonal construction. Rows 0..m-1
// are points of B, rows m.. are diagonal slots for B'; columns likewise.
inline std::vector<double> augmented_costs(const std::vector<DiagramPoint>& a,
                                           const std::vector<DiagramPoint>& b,
                                           const std::function<double(double)>& lift) {
    const int m = static_cast<int>(a.size());
    const int n = static_cast<int>(b.size());
    const int size = m + n;
    std::vector<double> cost(static_cast<std::size_t>(size) * size, 0.0);
    for (int i = 0; i < size; ++i) {
        for (int j = 0; j < size; ++j) {
            double c;
            if (i < m && j < n)
                c = lift(linf_point_distance(a[i], b[j]));
            else if (i < m)
                c = lift(diagonal_gap(a[i]));
            else if (j < n)
                c = lift(diagonal_gap(b[j]));
            else
                c = 0.0;
            cost[static_cast<std::size_t>(i) * size + j] = c;
        }
    }
    return cost;
}

inline Matching matching_from_assignment(const std::vector<int>& row_to_col, int m, int n) {
    Matching match;
    for (int i = 0; i < m + n; ++i) {
        const int j = row_to_col[i];
        if (i < m && j < n)
            match.pairs.emplace_back(i, j);
        else if (i < m)
            match.pairs.emplace_back(i, Matching::kDiagonal);
        else if (j < n)
            match.pairs.emplace_back(Matching::kDiagonal, j);
    }
    return match;
}

// Kuhn augmenting-path maximum matching restricted to a set of left nodes.
class BipartiteMatcher {
public:
    BipartiteMatcher(int left, int right, const std::vector<std::vector<int>>& adj)
        : right_(right), adj_(adj), match_left_(left, -1), match_right_(right, -1) {}

    bool augment(int u, std::vector<char>& visited) {
        for (int v : adj_[u]) {
            if (visited[v]) continue;
            visited[v] = 1;
            if (match_right_[v] == -1 || augment(match_right_[v], visited)) {
                match_left_[u] = v;
                match_right_[v] = u;
                return true;
            }
        }
        return false;
    }

    /// Matches every node in `targets`; returns false if any cannot be covered.
    bool cover(const std::vector<int>& targets) {
        std::vector<char> visited(right_);
        for (int u : targets) {
            std::fill(visited.begin(), visited.end(), 0);
            if (!augment(u, visited)) return false;
        }
        return true;
    }

private:
    int right_;
    const std::vector<std::vector<int>>& adj_;
    std::vector<int> match_left_, match_right_;
};

// Feasibility of bottleneck value lambda: there must be a partial matching
// between the diagrams, over edges of infinity-cost <= lambda, that covers
// every point whose diagonal gap exceeds lambda on both sides. Covering
// each side separately suffices (Mendelsohn-Dulmage).
inline bool bottleneck_feasible(const std::vector<DiagramPoint>& a,
                                const std::vector<DiagramPoint>& b, double lambda) {
    const int m = static_cast<int>(a.size());
    const int n = static_cast<int>(b.size());
    std::vector<std::vector<int>> adj(m), radj(n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            if (linf_point_distance(a[i], b[j]) <= lambda) {
                adj[i].push_back(j);
                radj[j].push_back(i);
            }
    std::vector<int> must_a, must_b;
    for (int i = 0; i < m; ++i)
        if (diagonal_gap(a[i]) > lambda) must_a.push_back(i);
    for (int j = 0; j < n; ++j)
        if (diagonal_gap(b[j]) > lambda) must_b.push_back(j);
    if (must_a.empty() && must_b.empty()) return true;
    BipartiteMatcher forward(m, n, adj);
    if (!forward.cover(must_a)) return false;
    BipartiteMatcher backward(n, m, radj);
    return backward.cover(must_b);
}

}  // namespace detail

/// p-Wasserstein distance with an optimal matching achieving it.
inline std::pair<double, Matching> wasserstein(const PersistenceDiagram& B,
                                               const PersistenceDiagram& Bp, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("wasserstein order p must be >= 1");
    const auto& a = B.points();
    const auto& b = Bp.points();
    const int m = static_cast<int>(a.size());
    const int n = static_cast<int>(b.size());
    if (m + n == 0) return {0.0, Matching{}};

    const auto lift = [p](double d) { return p == 1.0 ? d : std::pow(d, p); };
    const auto cost = detail::augmented_costs(a, b, lift);
    const auto row_to_col = detail::solve_assignment(cost, m + n);

    double total = 0.0;
    for (int i = 0; i < m + n; ++i)
        total += cost[static_cast<std::size_t>(i) * (m + n) + row_to_col[i]];
    const double value = p == 1.0 ? total : std::pow(total, 1.0 / p);

    Matching match = detail::matching_from_assignment(row_to_col, m, n);
    match.cost = value;
    return {value, match};
}

/// Bottleneck distance (W-infinity): binary search over candidate costs
/// with bipartite feasibility tests, then one assignment run to recover an
/// explicit minimax matching.
inline std::pair<double, Matching> bottleneck(const PersistenceDiagram& B,
                                              const PersistenceDiagram& Bp) {
    const auto& a = B.points();
    const auto& b = Bp.points();
    const int m = static_cast<int>(a.size());
    const int n = static_cast<int>(b.size());
    if (m + n == 0) return {0.0, Matching{}};

    std::vector<double> candidates;
    candidates.reserve(static_cast<std::size_t>(m) * n + m + n + 1);
    candidates.push_back(0.0);
    for (int i = 0; i < m; ++i) candidates.push_back(diagonal_gap(a[i]));
    for (int j = 0; j < n; ++j) candidates.push_back(diagonal_gap(b[j]));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) candidates.push_back(linf_point_distance(a[i], b[j]));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::size_t lo = 0, hi = candidates.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (detail::bottleneck_feasible(a, b, candidates[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    const double value = candidates[lo];

    // Recover a witness matching: forbid edges above the optimum, then any
    // min-sum assignment over the remaining edges is minimax-optimal.
    constexpr double kBig = 1e200;
    const auto lift = [value](double d) { return d <= value ? d : kBig; };
    const auto cost = detail::augmented_costs(a, b, lift);
    const auto row_to_col = detail::solve_assignment(cost, m + n);
    Matching match = detail::matching_from_assignment(row_to_col, m, n);
    match.cost = value;
    return {value, match};
}

/// Recomputes the W_p objective of a matching's pairs (used to check the
/// Matching invariant).
inline double recompute_matching_cost(const PersistenceDiagram& B,
                                      const PersistenceDiagram& Bp,
                                      const Matching& match, double p) {
    double total = 0.0;
    for (const auto& [i, j] : match.pairs) {
        double d;
        if (i != Matching::kDiagonal && j != Matching::kDiagonal)
            d = linf_point_distance(B.points()[i], Bp.points()[j]);
        else if (i != Matching::kDiagonal)
            d = diagonal_gap(B.points()[i]);
        else
            d = diagonal_gap(Bp.points()[j]);
        total += p == 1.0 ? d : std::pow(d, p);
    }
    return p == 1.0 ? total : std::pow(total, 1.0 / p);
}

inline double recompute_matching_max_cost(const PersistenceDiagram& B,
                                          const PersistenceDiagram& Bp,
                                          const Matching& match) {
    double worst = 0.0;
    for (const auto& [i, j] : match.pairs) {
        double d;
        if (i != Matching::kDiagonal && j != Matching::kDiagonal)
            d = linf_point_distance(B.points()[i], Bp.points()[j]);
        else if (i != Matching::kDiagonal)
            d = diagonal_gap(B.points()[i]);
        else
            d = diagonal_gap(Bp.points()[j]);
        worst = std::max(worst, d);
    }
    return worst;
}

enum class VectorNorm { L1, L2, Linf };

inline VectorNorm vector_norm_from_string(const std::string& s) {
    if (s == "l1" || s == "L1") return VectorNorm::L1;
    if (s == "l2" || s == "L2") return VectorNorm::L2;
    if (s == "linf" || s == "Linf") return VectorNorm::Linf;
    throw std::invalid_argument("unknown vector norm: " + s);
}

inline double vector_distance(const std::vector<double>& a, const std::vector<double>& b,
                              VectorNorm norm) {
    if (a.size() != b.size())
        throw std::invalid_argument("vector_distance: length mismatch");
    double acc = 0.0;
    switch (norm) {
        case VectorNorm::L1:
            for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
            return acc;
        case VectorNorm::L2:
            for (std::size_t i = 0; i < a.size(); ++i) {
                const double d = a[i] - b[i];
                acc += d * d;
            }
            return std::sqrt(acc);
        case VectorNorm::Linf:
            for (std::size_t i = 0; i < a.size(); ++i)
                acc = std::max(acc, std::abs(a[i] - b[i]));
            return acc;
    }
    return acc;
}

/// Where a distance matrix came from: the object representation, the metric
/// name and any free parameters, serialized alongside the matrix.
struct Provenance {
    std::string representation;
    std::string metric;
    std::string parameters;
};

class DistanceMatrix {
public:
    DistanceMatrix() = default;
    DistanceMatrix(std::vector<std::string> labels, std::vector<double> values,
                   Provenance provenance)
        : labels_(std::move(labels)), values_(std::move(values)),
          provenance_(std::move(provenance)) {
        const std::size_t n = labels_.size();
        if (values_.size() != n * n)
            throw std::invalid_argument("distance matrix size does not match labels");
        for (std::size_t i = 0; i < n; ++i) {
            if (values_[i * n + i] != 0.0)
                throw std::invalid_argument("distance matrix diagonal must be zero");
            for (std::size_t j = i + 1; j < n; ++j) {
                if (values_[i * n + j] != values_[j * n + i])
                    throw std::invalid_argument("distance matrix must be symmetric");
                if (!(values_[i * n + j] >= 0.0))
                    throw std::invalid_argument("distances must be non-negative");
            }
        }
    }

    std::size_t size() const { return labels_.size(); }
    double at(std::size_t i, std::size_t j) const { return values_[i * size() + j]; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const Provenance& provenance() const { return provenance_; }

private:
    std::vector<std::string> labels_;
    std::vector<double> values_;
    Provenance provenance_;
};

/// Applies `metric` to every unordered pair once, in parallel. A metric
/// failure is reported with the indices of the offending pair.
template <class Object, class Metric>
DistanceMatrix build_distance_matrix(const std::vector<Object>& objects,
                                     std::vector<std::string> labels, Metric&& metric,
                                     Provenance provenance) {
    const std::size_t n = objects.size();
    if (labels.size() != n)
        throw std::invalid_argument("distance matrix labels must match objects");
    std::vector<double> values(n * n, 0.0);

    std::vector<std::pair<std::size_t, std::size_t>> pair_index;
    pair_index.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pair_index.emplace_back(i, j);

    parallel_for(0, pair_index.size(), [&](std::size_t k) {
        const auto [i, j] = pair_index[k];
        double d;
        try {
            d = metric(objects[i], objects[j]);
        } catch (const std::exception& e) {
            throw std::runtime_error("metric failed on pair (" + std::to_string(i) + ", " +
                                     std::to_string(j) + "): " + e.what());
        }
        values[i * n + j] = d;
        values[j * n + i] = d;
    });

    return DistanceMatrix(std::move(labels), std::move(values), std::move(provenance));
}

}  // namespace tda
