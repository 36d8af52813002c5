#pragma once

// Synthetic inputs for the classification experiments: six noisy shape
// classes embedded in R^3, truncated orbits of the linked twist map, and
// the shared image-grid bounds that make per-experiment PI vectors
// comparable.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tda/core.hpp"
#include "tda/rng.hpp"

namespace tda {

enum class ShapeClass {
    solid_cube,
    circle,
    sphere,
    three_clusters,
    nested_clusters,
    torus,
};

inline const std::vector<ShapeClass>& all_shape_classes() {
    static const std::vector<ShapeClass> classes = {
        ShapeClass::solid_cube,     ShapeClass::circle,          ShapeClass::sphere,
        ShapeClass::three_clusters, ShapeClass::nested_clusters, ShapeClass::torus,
    };
    return classes;
}

inline std::string shape_class_name(ShapeClass c) {
    switch (c) {
        case ShapeClass::solid_cube: return "solid_cube";
        case ShapeClass::circle: return "circle";
        case ShapeClass::sphere: return "sphere";
        case ShapeClass::three_clusters: return "three_clusters";
        case ShapeClass::nested_clusters: return "nested_clusters";
        case ShapeClass::torus: return "torus";
    }
    throw std::invalid_argument("unknown shape class");
}

inline ShapeClass shape_class_from_name(const std::string& name) {
    for (ShapeClass c : all_shape_classes())
        if (shape_class_name(c) == name) return c;
    throw std::invalid_argument("unknown shape class: " + name);
}

namespace detail {

// Shape dimensions: circle radius 1 in the z=0 plane, sphere radius 1,
// cube uniform in [0,1]^3, torus R=1 r=0.5, cluster blobs sigma=0.05 at
// the vertices of a side-1 equilateral triangle; the nested variant
// repeats the triangle at 1/2 scale around each blob center. The torus is
// kept small enough that a few hundred points sample it densely, and the
// nested sub-pattern large enough that its sub-cluster constellation
// survives noise and carries loops of its own.
constexpr double kTorusMajor = 1.0;
constexpr double kTorusMinor = 0.5;
constexpr double kClusterSigma = 0.05;
constexpr double kNestedScale = 0.6;

inline const double* triangle_vertices() {
    static const double v[9] = {0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.5, 0.8660254037844386, 0.0};
    return v;
}

inline void sample_ideal_point(ShapeClass shape, Rng& rng, double out[3]) {
    const double two_pi = 6.283185307179586476925286766559;
    switch (shape) {
        case ShapeClass::solid_cube: {
            out[0] = rng.uniform();
            out[1] = rng.uniform();
            out[2] = rng.uniform();
            return;
        }
        case ShapeClass::circle: {
            const double theta = two_pi * rng.uniform();
            out[0] = std::cos(theta);
            out[1] = std::sin(theta);
            out[2] = 0.0;
            return;
        }
        case ShapeClass::sphere: {
            double x, y, z, norm;
            do {
                x = rng.normal();
                y = rng.normal();
                z = rng.normal();
                norm = std::sqrt(x * x + y * y + z * z);
            } while (norm < 1e-12);
            out[0] = x / norm;
            out[1] = y / norm;
            out[2] = z / norm;
            return;
        }
        case ShapeClass::three_clusters: {
            const double* v = triangle_vertices();
            const std::uint64_t k = rng.below(3);
            out[0] = v[3 * k + 0] + kClusterSigma * rng.normal();
            out[1] = v[3 * k + 1] + kClusterSigma * rng.normal();
            out[2] = v[3 * k + 2] + kClusterSigma * rng.normal();
            return;
        }
        case ShapeClass::nested_clusters: {
            const double* v = triangle_vertices();
            const double cx = (v[0] + v[3] + v[6]) / 3.0;
            const double cy = (v[1] + v[4] + v[7]) / 3.0;
            const std::uint64_t k = rng.below(3);
            const std::uint64_t s = rng.below(3);
            out[0] = v[3 * k + 0] + kNestedScale * (v[3 * s + 0] - cx) +
                     kNestedScale * kClusterSigma * rng.normal();
            out[1] = v[3 * k + 1] + kNestedScale * (v[3 * s + 1] - cy) +
                     kNestedScale * kClusterSigma * rng.normal();
            out[2] = kNestedScale * kClusterSigma * rng.normal();
            return;
        }
        case ShapeClass::torus: {
            // Rejection keeps the sample uniform with respect to surface
            // area; sampling the tube angle uniformly would overweight the
            // inner ring.
            const double theta = two_pi * rng.uniform();
            double phi;
            for (;;) {
                phi = two_pi * rng.uniform();
                const double accept = (kTorusMajor + kTorusMinor * std::cos(phi)) /
                                      (kTorusMajor + kTorusMinor);
                if (rng.uniform() <= accept) break;
            }
            const double ring = kTorusMajor + kTorusMinor * std::cos(phi);
            out[0] = ring * std::cos(theta);
            out[1] = ring * std::sin(theta);
            out[2] = kTorusMinor * std::sin(phi);
            return;
        }
    }
    throw std::invalid_argument("unknown shape class");
}

}  // namespace detail

/// Samples n points uniformly from the ideal shape, then perturbs each
/// coordinate by Gaussian noise with standard deviation eta. Deterministic
/// under the seed.
inline PointCloud sample_shape(ShapeClass shape, int n_points, double noise_eta,
                               std::uint64_t seed) {
    if (n_points < 1) throw std::invalid_argument("n_points must be >= 1");
    if (!(noise_eta >= 0.0)) throw std::invalid_argument("noise must be >= 0");
    Rng rng(seed);
    std::vector<double> coords;
    coords.reserve(static_cast<std::size_t>(n_points) * 3);
    double p[3];
    for (int i = 0; i < n_points; ++i) {
        detail::sample_ideal_point(shape, rng, p);
        for (int k = 0; k < 3; ++k)
            coords.push_back(noise_eta > 0.0 ? p[k] + noise_eta * rng.normal() : p[k]);
    }
    return PointCloud(3, std::move(coords), shape_class_name(shape));
}

struct LtmParams {
    double r = 0.0;
    int n_iterations = 0;
    std::uint64_t seed = 0;
};

/// Truncated orbit of the linked twist map
///   x' = x + r y (1 - y) mod 1,   y' = y + r x (1 - x) mod 1
/// (both updates read the old state). The orbit starts from a seeded
/// uniform point of the unit square and has n_iterations + 1 points.
inline PointCloud ltm_orbit(const LtmParams& params) {
    if (!(params.r > 0.0)) throw std::invalid_argument("ltm parameter r must be > 0");
    if (params.n_iterations < 1)
        throw std::invalid_argument("ltm orbit needs at least one iteration");
    Rng rng(params.seed);
    double x = rng.uniform();
    double y = rng.uniform();
    std::vector<double> coords;
    coords.reserve(static_cast<std::size_t>(params.n_iterations + 1) * 2);
    coords.push_back(x);
    coords.push_back(y);
    for (int i = 0; i < params.n_iterations; ++i) {
        // With r > 0 and x, y in [0,1) both pre-mod values are non-negative.
        const double nx = std::fmod(x + params.r * y * (1.0 - y), 1.0);
        const double ny = std::fmod(y + params.r * x * (1.0 - x), 1.0);
        x = nx;
        y = ny;
        coords.push_back(x);
        coords.push_back(y);
    }
    return PointCloud(2, std::move(coords), "r=" + std::to_string(params.r));
}

/// Keeps at most max_points of a cloud, evenly strided through the orbit,
/// so desk-scale Rips stays tractable.
inline PointCloud subsample_cloud(const PointCloud& cloud, std::size_t max_points) {
    if (max_points < 1) throw std::invalid_argument("max_points must be >= 1");
    if (cloud.size() <= max_points) return cloud;
    std::vector<double> coords;
    coords.reserve(max_points * cloud.dim());
    for (std::size_t k = 0; k < max_points; ++k) {
        const std::size_t i = k * cloud.size() / max_points;
        const double* p = cloud.point(i);
        coords.insert(coords.end(), p, p + cloud.dim());
    }
    return PointCloud(cloud.dim(), std::move(coords), cloud.label());
}

struct SharedBounds {
    double birth_min = 0.0;
    double birth_max = 0.0;
    double pers_min = 0.0;
    double pers_max = 0.0;
    double weight_ceiling_b = 0.0;  // max persistence over all diagrams
};

/// Experiment-wide image bounds: b is the largest persistence over every
/// diagram, the grid covers [0, max birth] x [0, b] padded by 3 sigma on
/// the top and right. Shared bounds keep the images comparable as vectors.
inline SharedBounds shared_image_bounds(const std::vector<PersistenceDiagram>& diagrams,
                                        double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
    double max_birth = 0.0, max_pers = 0.0;
    bool any = false;
    for (const auto& d : diagrams)
        for (const auto& p : d.points()) {
            any = true;
            max_birth = std::max(max_birth, p.birth);
            max_pers = std::max(max_pers, p.persistence());
        }
    if (!any)
        throw std::invalid_argument("cannot derive image bounds: all diagrams are empty");
    if (!(max_pers > 0.0))
        throw std::invalid_argument(
            "cannot derive image bounds: no feature has positive persistence");
    SharedBounds bounds;
    bounds.birth_min = 0.0;
    bounds.birth_max = max_birth + 3.0 * sigma;
    bounds.pers_min = 0.0;
    bounds.pers_max = max_pers + 3.0 * sigma;
    bounds.weight_ceiling_b = max_pers;
    return bounds;
}

/// ImageSpec for one experiment from shared bounds.
inline ImageSpec make_image_spec(const SharedBounds& bounds, int rows, int cols, double sigma,
                                 bool one_dimensional = false) {
    ImageSpec spec;
    spec.rows = one_dimensional ? 1 : rows;
    spec.cols = cols;
    spec.sigma = sigma;
    spec.weight_ceiling_b = bounds.weight_ceiling_b;
    spec.birth_min = bounds.birth_min;
    spec.birth_max = bounds.birth_max;
    spec.pers_min = bounds.pers_min;
    spec.pers_max = bounds.pers_max;
    spec.one_dimensional = one_dimensional;
    spec.validate();
    return spec;
}

}  // namespace tda
