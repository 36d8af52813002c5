#pragma once

// K-medoids clustering over a precomputed distance matrix (random restarts
// + Voronoi iteration), medoid-label classification accuracy, and the
// resolution/variance sweep harness.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "tda/core.hpp"
#include "tda/datasets.hpp"
#include "tda/image.hpp"
#include "tda/metrics.hpp"
#include "tda/parallel.hpp"
#include "tda/rng.hpp"

namespace tda {

struct Clustering {
    std::vector<int> medoid_indices;  // object indices, ascending
    std::vector<int> assignment;      // per object: object index of its medoid
    double score = 0.0;               // sum of distances to assigned medoids
};

namespace detail {

// Nearest-medoid assignment; ties resolve to the lowest medoid index.
inline double assign_to_medoids(const DistanceMatrix& matrix, const std::vector<int>& medoids,
                                std::vector<int>& assignment) {
    const std::size_t n = matrix.size();
    assignment.resize(n);
    double score = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        int best = medoids.front();
        double best_d = matrix.at(i, best);
        for (std::size_t k = 1; k < medoids.size(); ++k) {
            const double d = matrix.at(i, medoids[k]);
            if (d < best_d || (d == best_d && medoids[k] < best)) {
                best = medoids[k];
                best_d = d;
            }
        }
        assignment[i] = best;
        score += best_d;
    }
    return score;
}

}  // namespace detail

/// One Voronoi-iteration run from explicit initial medoids: alternate
/// nearest-medoid assignment with replacing each medoid by the in-cluster
/// object minimizing the cluster's distance sum (strict improvement only,
/// so the iteration terminates). If `score_trace` is given it receives the
/// score after every assignment round.
inline Clustering kmedoids_single_run(const DistanceMatrix& matrix,
                                      std::vector<int> medoids,
                                      std::vector<double>* score_trace = nullptr) {
    const std::size_t n = matrix.size();
    if (medoids.empty() || medoids.size() > n)
        throw std::invalid_argument("medoid count must be in [1, n]");
    std::sort(medoids.begin(), medoids.end());

    Clustering result;
    for (;;) {
        const double score = detail::assign_to_medoids(matrix, medoids, result.assignment);
        if (score_trace) score_trace->push_back(score);

        bool changed = false;
        std::vector<int> next = medoids;
        for (std::size_t k = 0; k < medoids.size(); ++k) {
            const int medoid = medoids[k];
            std::vector<int> members;
            for (std::size_t i = 0; i < n; ++i)
                if (result.assignment[i] == medoid) members.push_back(static_cast<int>(i));

            double current_sum = 0.0;
            for (int i : members) current_sum += matrix.at(i, medoid);
            int best = medoid;
            double best_sum = current_sum;
            for (int candidate : members) {
                if (candidate == medoid) continue;
                double sum = 0.0;
                for (int i : members) sum += matrix.at(i, candidate);
                // Strict improvement only; members ascend, so the first
                // minimizer wins ties deterministically.
                if (sum < best_sum) {
                    best = candidate;
                    best_sum = sum;
                }
            }
            if (best != medoid) {
                next[k] = best;
                changed = true;
            }
        }
        if (!changed) {
            result.medoid_indices = medoids;
            result.score = score;
            return result;
        }
        medoids = std::move(next);
        std::sort(medoids.begin(), medoids.end());
    }
}

/// Best clustering over `restarts` random initializations of K distinct
/// medoids. Deterministic under the seed; restarts run in parallel and the
/// lowest restart index wins score ties.
inline Clustering kmedoids(const DistanceMatrix& matrix, int K, int restarts,
                           std::uint64_t seed) {
    const std::size_t n = matrix.size();
    if (K < 1 || static_cast<std::size_t>(K) > n)
        throw std::invalid_argument("kmedoids needs 1 <= K <= object count");
    if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");

    std::vector<double> scores(restarts);
    std::vector<std::vector<int>> medoid_sets(restarts);
    parallel_for(0, static_cast<std::size_t>(restarts), [&](std::size_t r) {
        Rng rng(Rng::derive_seed(seed, r));
        // Partial Fisher-Yates for K distinct indices.
        std::vector<int> pool(n);
        for (std::size_t i = 0; i < n; ++i) pool[i] = static_cast<int>(i);
        for (int k = 0; k < K; ++k)
            std::swap(pool[k], pool[k + static_cast<std::size_t>(rng.below(n - k))]);
        std::vector<int> initial(pool.begin(), pool.begin() + K);
        const Clustering c = kmedoids_single_run(matrix, std::move(initial));
        scores[r] = c.score;
        medoid_sets[r] = c.medoid_indices;
    });

    std::size_t best = 0;
    for (std::size_t r = 1; r < static_cast<std::size_t>(restarts); ++r)
        if (scores[r] < scores[best]) best = r;
    return kmedoids_single_run(matrix, medoid_sets[best]);
}

/// Fraction of objects whose assigned medoid carries the same label.
inline double clustering_accuracy(const Clustering& clustering,
                                  const std::vector<std::string>& labels) {
    if (labels.size() != clustering.assignment.size())
        throw std::invalid_argument("labels must align with clustered objects");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == labels[clustering.assignment[i]]) ++hits;
    return static_cast<double>(hits) / labels.size();
}

struct SweepCell {
    int resolution = 0;
    double sigma = 0.0;
    double accuracy = 0.0;
};

/// Accuracy surface over image resolution and kernel width: for every
/// (resolution, sigma) cell the images, the distance matrix and the
/// K-medoids clustering are recomputed from the given diagrams.
inline std::vector<SweepCell> parameter_sweep(const std::vector<PersistenceDiagram>& diagrams,
                                              const std::vector<std::string>& labels,
                                              const std::vector<int>& resolutions,
                                              const std::vector<double>& sigmas,
                                              VectorNorm norm, int K, int restarts,
                                              std::uint64_t seed) {
    if (diagrams.size() != labels.size())
        throw std::invalid_argument("diagram and label counts differ");
    std::vector<SweepCell> table;
    table.reserve(resolutions.size() * sigmas.size());
    for (int resolution : resolutions) {
        for (double sigma : sigmas) {
            const SharedBounds bounds = shared_image_bounds(diagrams, sigma);
            const ImageSpec spec = make_image_spec(bounds, resolution, resolution, sigma);
            std::vector<std::vector<double>> vectors;
            vectors.reserve(diagrams.size());
            for (const auto& d : diagrams) vectors.push_back(compute_image(d, spec).pixels);
            const DistanceMatrix matrix = build_distance_matrix(
                vectors, labels,
                [norm](const std::vector<double>& a, const std::vector<double>& b) {
                    return vector_distance(a, b, norm);
                },
                Provenance{"pi", "vector", "sweep"});
            const Clustering clustering = kmedoids(matrix, K, restarts, seed);
            table.push_back({resolution, sigma, clustering_accuracy(clustering, labels)});
        }
    }
    return table;
}

}  // namespace tda
