#pragma once

// Numerical verification of the stability theorems for persistence surfaces
// and images, with their exact constants:
//
//   general surface:  ||rho_B - rho_B'||_inf <= sqrt(10) (||f||inf |grad phi|
//                       + ||phi||inf |grad f|) W1(B, B')
//   general image:    same constant times A (Linf), A' (L1), sqrt(n) A (L2)
//   Gaussian kernel:  ||rho_B - rho_B'||_1 and all three image norms
//                       <= (sqrt(5) |grad f| + sqrt(10/pi) ||f||inf / sigma) W1
//
// plus the closed form F(z) = ||a g_u - b g_v||_1 for 1-D Gaussians, whose
// two-branch Erf expression also gives the 2-D weighted L1 distance as
// F(||u - v||_2) after rotating the pair onto one axis.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tda/core.hpp"
#include "tda/image.hpp"
#include "tda/metrics.hpp"
#include "tda/parallel.hpp"
#include "tda/rng.hpp"

namespace tda {

struct StabilityReport {
    std::int64_t pairs_tested = 0;
    double max_ratio = 0.0;  // observed LHS / (constant * W1), worst case
    double constant_used = 0.0;
    std::int64_t violations = 0;

    void absorb(const StabilityReport& other) {
        pairs_tested += other.pairs_tested;
        max_ratio = std::max(max_ratio, other.max_ratio);
        constant_used = std::max(constant_used, other.constant_used);
        violations += other.violations;
    }
};

struct FunctionConstants {
    double sup = 0.0;
    double grad = 0.0;
};

/// Sup and maximal gradient norm of a weighting function. constant_one is
/// rejected: it is not zero on the horizontal axis, so the stability
/// theorems do not cover it.
inline FunctionConstants weighting_constants(const WeightingFunction& f) {
    switch (f.kind()) {
        case WeightingFunction::Kind::piecewise_linear_wb:
            return {1.0, 1.0 / f.ceiling_b()};
        case WeightingFunction::Kind::constant_one:
            throw std::invalid_argument(
                "constant_one weighting is not zero on the horizontal axis; "
                "stability bounds do not apply");
        case WeightingFunction::Kind::custom_tabulated: {
            const auto& t = f.table();
            const double dx = (t.birth_max - t.birth_min) / (t.birth_samples - 1);
            const double dy = (t.pers_max - t.pers_min) / (t.pers_samples - 1);
            double sup = 0.0, grad = 0.0;
            for (double v : t.values) sup = std::max(sup, v);
            // Bilinear patches: |df/dx| is bounded by the larger horizontal
            // edge slope of the cell, likewise vertically.
            for (int pi = 0; pi + 1 < t.pers_samples; ++pi)
                for (int bi = 0; bi + 1 < t.birth_samples; ++bi) {
                    const double gx =
                        std::max(std::abs(t.at(pi, bi + 1) - t.at(pi, bi)),
                                 std::abs(t.at(pi + 1, bi + 1) - t.at(pi + 1, bi))) /
                        dx;
                    const double gy =
                        std::max(std::abs(t.at(pi + 1, bi) - t.at(pi, bi)),
                                 std::abs(t.at(pi + 1, bi + 1) - t.at(pi, bi + 1))) /
                        dy;
                    grad = std::max(grad, std::sqrt(gx * gx + gy * gy));
                }
            return {sup, grad};
        }
    }
    return {};
}

/// Sup and maximal gradient norm of the normalized symmetric 2-D Gaussian:
/// peak 1/(2 pi sigma^2); the gradient norm is maximal at radius sigma,
/// giving 1/(2 pi sigma^3 sqrt(e)).
inline FunctionConstants kernel_constants(const KernelSpec& kernel) {
    const double two_pi = 6.283185307179586476925286766559;
    const double s = kernel.sigma;
    return {1.0 / (two_pi * s * s), 1.0 / (two_pi * s * s * s * std::sqrt(std::exp(1.0)))};
}

namespace detail {

struct Box {
    double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
};

inline Box padded_bbox(const std::vector<BirthPersistencePoint>& a,
                       const std::vector<BirthPersistencePoint>& b, double pad) {
    Box box{0.0, 0.0, 0.0, 0.0};
    bool first = true;
    for (const auto* pts : {&a, &b})
        for (const auto& u : *pts) {
            if (first) {
                box = {u.birth, u.birth, u.persistence, u.persistence};
                first = false;
            } else {
                box.x0 = std::min(box.x0, u.birth);
                box.x1 = std::max(box.x1, u.birth);
                box.y0 = std::min(box.y0, u.persistence);
                box.y1 = std::max(box.y1, u.persistence);
            }
        }
    box.x0 -= pad;
    box.x1 += pad;
    box.y0 -= pad;
    box.y1 += pad;
    return box;
}

inline double surface_difference(const std::vector<BirthPersistencePoint>& a,
                                 const std::vector<double>& wa,
                                 const std::vector<BirthPersistencePoint>& b,
                                 const std::vector<double>& wb, const KernelSpec& kernel,
                                 double x, double y) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += wa[i] * kernel.density(a[i].birth, a[i].persistence, x, y);
    for (std::size_t i = 0; i < b.size(); ++i)
        s -= wb[i] * kernel.density(b[i].birth, b[i].persistence, x, y);
    return s;
}

// Sup of |rho_B - rho_B'| over the plane: dense grid at sigma/8 spacing over
// the padded bounding box of both point sets, then a compass pattern search
// around the best grid node.
inline double estimate_sup_difference(const std::vector<BirthPersistencePoint>& a,
                                      const std::vector<double>& wa,
                                      const std::vector<BirthPersistencePoint>& b,
                                      const std::vector<double>& wb,
                                      const KernelSpec& kernel, int probes) {
    if (a.empty() && b.empty()) return 0.0;
    const double spacing = kernel.sigma / 8.0;
    const Box box = padded_bbox(a, b, 6.0 * kernel.sigma);

    double best = 0.0, bx = box.x0, by = box.y0;
    const int nx = static_cast<int>((box.x1 - box.x0) / spacing) + 1;
    const int ny = static_cast<int>((box.y1 - box.y0) / spacing) + 1;
    for (int i = 0; i <= ny; ++i) {
        const double y = box.y0 + i * spacing;
        for (int j = 0; j <= nx; ++j) {
            const double x = box.x0 + j * spacing;
            const double v = std::abs(surface_difference(a, wa, b, wb, kernel, x, y));
            if (v > best) {
                best = v;
                bx = x;
                by = y;
            }
        }
    }

    double step = spacing / 2.0;
    for (int it = 0; it < probes && step > 1e-14; ++it) {
        bool moved = false;
        const double cand_x[4] = {bx - step, bx + step, bx, bx};
        const double cand_y[4] = {by, by, by - step, by + step};
        for (int k = 0; k < 4; ++k) {
            const double v =
                std::abs(surface_difference(a, wa, b, wb, kernel, cand_x[k], cand_y[k]));
            if (v > best) {
                best = v;
                bx = cand_x[k];
                by = cand_y[k];
                moved = true;
            }
        }
        if (!moved) step /= 2.0;
    }
    return best;
}

// L1 norm of rho_B - rho_B' by composite Simpson over the padded box, plus
// an analytic bound on the mass both surfaces leave outside the box (added
// as slack so the estimate upper-bounds the true norm).
inline double estimate_l1_difference(const std::vector<BirthPersistencePoint>& a,
                                     const std::vector<double>& wa,
                                     const std::vector<BirthPersistencePoint>& b,
                                     const std::vector<double>& wb,
                                     const KernelSpec& kernel) {
    if (a.empty() && b.empty()) return 0.0;
    const double sigma = kernel.sigma;
    const Box box = padded_bbox(a, b, 6.0 * sigma);

    const auto box_mass = [&](const BirthPersistencePoint& u) {
        return (detail::gaussian_cdf(box.x1, u.birth, sigma) -
                detail::gaussian_cdf(box.x0, u.birth, sigma)) *
               (detail::gaussian_cdf(box.y1, u.persistence, sigma) -
                detail::gaussian_cdf(box.y0, u.persistence, sigma));
    };
    double tail = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) tail += wa[i] * (1.0 - box_mass(a[i]));
    for (std::size_t i = 0; i < b.size(); ++i) tail += wb[i] * (1.0 - box_mass(b[i]));

    const double target = sigma / 6.0;
    const int nx = std::max(2, static_cast<int>(std::ceil((box.x1 - box.x0) / target / 2)) * 2);
    const int ny = std::max(2, static_cast<int>(std::ceil((box.y1 - box.y0) / target / 2)) * 2);
    const double hx = (box.x1 - box.x0) / nx;
    const double hy = (box.y1 - box.y0) / ny;

    const auto simpson_weight = [](int i, int n) {
        if (i == 0 || i == n) return 1.0;
        return i % 2 == 1 ? 4.0 : 2.0;
    };
    double integral = 0.0;
    for (int i = 0; i <= ny; ++i) {
        const double y = box.y0 + i * hy;
        double row = 0.0;
        for (int j = 0; j <= nx; ++j) {
            const double x = box.x0 + j * hx;
            row += simpson_weight(j, nx) *
                   std::abs(surface_difference(a, wa, b, wb, kernel, x, y));
        }
        integral += simpson_weight(i, ny) * row;
    }
    integral *= hx * hy / 9.0;
    return integral + tail;
}

inline std::pair<std::vector<BirthPersistencePoint>, std::vector<double>> weighted_points(
    const PersistenceDiagram& diagram, const WeightingFunction& f) {
    auto pts = transform_to_birth_persistence(diagram);
    std::vector<double> weights(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) weights[i] = f(pts[i]);
    return {std::move(pts), std::move(weights)};
}

// The LHS estimates carry a small positive slack (quadrature tails), so the
// inequality is tested with an absolute epsilon; identical diagrams then
// report ratio 0 instead of 0/0.
constexpr double kStabilitySlack = 1e-6;

inline StabilityReport single_pair_report(double lhs, double rhs, double constant) {
    StabilityReport report;
    report.pairs_tested = 1;
    report.constant_used = constant;
    report.max_ratio = rhs > kStabilitySlack ? lhs / rhs : 0.0;
    if (lhs > rhs + kStabilitySlack) report.violations = 1;
    return report;
}

}  // namespace detail

/// General-distribution surface bound with the sqrt(10) constant. The left
/// side is estimated by grid probing plus `probes` pattern-search steps.
inline StabilityReport check_surface_stability_general(const PersistenceDiagram& B,
                                                       const PersistenceDiagram& Bp,
                                                       const WeightingFunction& f,
                                                       const KernelSpec& kernel,
                                                       int probes = 64) {
    const auto fc = weighting_constants(f);
    const auto kc = kernel_constants(kernel);
    const double constant = std::sqrt(10.0) * (fc.sup * kc.grad + kc.sup * fc.grad);

    const auto [pa, wa] = detail::weighted_points(B, f);
    const auto [pb, wb] = detail::weighted_points(Bp, f);
    const double lhs = detail::estimate_sup_difference(pa, wa, pb, wb, kernel, probes);
    const double w1 = wasserstein(B, Bp, 1.0).first;
    return detail::single_pair_report(lhs, constant * w1, constant);
}

/// General-distribution image bounds: Linf against sqrt(10) A, L1 against
/// sqrt(10) A', L2 against sqrt(10 n) A. All three are checked; the report
/// carries the worst ratio.
inline StabilityReport check_image_stability_general(const PersistenceDiagram& B,
                                                     const PersistenceDiagram& Bp,
                                                     const ImageSpec& spec) {
    const WeightingFunction f = WeightingFunction::wb(spec.weight_ceiling_b);
    const KernelSpec kernel(spec.sigma);
    const auto fc = weighting_constants(f);
    const auto kc = kernel_constants(kernel);
    const double base = fc.sup * kc.grad + kc.sup * fc.grad;

    const auto ia = compute_image(B, spec);
    const auto ib = compute_image(Bp, spec);
    const double w1 = wasserstein(B, Bp, 1.0).first;

    const double A = spec.max_pixel_area();
    const double total_area = spec.total_area();
    const double n = static_cast<double>(spec.pixel_count());

    StabilityReport report;
    report.absorb(detail::single_pair_report(
        vector_distance(ia.pixels, ib.pixels, VectorNorm::Linf),
        std::sqrt(10.0) * A * base * w1, std::sqrt(10.0) * A * base));
    report.absorb(detail::single_pair_report(
        vector_distance(ia.pixels, ib.pixels, VectorNorm::L1),
        std::sqrt(10.0) * total_area * base * w1, std::sqrt(10.0) * total_area * base));
    report.absorb(detail::single_pair_report(
        vector_distance(ia.pixels, ib.pixels, VectorNorm::L2),
        std::sqrt(10.0 * n) * A * base * w1, std::sqrt(10.0 * n) * A * base));
    report.pairs_tested = 1;
    return report;
}

/// Gaussian-kernel bounds: the L1 surface distance and all three image
/// norms against (sqrt(5) |grad f| + sqrt(10/pi) ||f||inf / sigma) W1.
inline StabilityReport check_gaussian_stability(const PersistenceDiagram& B,
                                                const PersistenceDiagram& Bp,
                                                const ImageSpec& spec) {
    const WeightingFunction f = WeightingFunction::wb(spec.weight_ceiling_b);
    const KernelSpec kernel(spec.sigma);
    const auto fc = weighting_constants(f);
    const double constant =
        std::sqrt(5.0) * fc.grad + std::sqrt(10.0 / 3.14159265358979323846) * fc.sup / spec.sigma;

    const auto [pa, wa] = detail::weighted_points(B, f);
    const auto [pb, wb] = detail::weighted_points(Bp, f);
    const double w1 = wasserstein(B, Bp, 1.0).first;
    const double rhs = constant * w1;

    const auto ia = compute_image(B, spec);
    const auto ib = compute_image(Bp, spec);

    StabilityReport report;
    report.absorb(detail::single_pair_report(
        detail::estimate_l1_difference(pa, wa, pb, wb, kernel), rhs, constant));
    report.absorb(detail::single_pair_report(
        vector_distance(ia.pixels, ib.pixels, VectorNorm::L1), rhs, constant));
    report.absorb(detail::single_pair_report(
        vector_distance(ia.pixels, ib.pixels, VectorNorm::L2), rhs, constant));
    report.absorb(detail::single_pair_report(
        vector_distance(ia.pixels, ib.pixels, VectorNorm::Linf), rhs, constant));
    report.pairs_tested = 1;
    return report;
}

/// 2-D counterpart of the 1-D lemma: bound on ||f(u) g_u - f(v) g_v||_1 for
/// weighted 2-D Gaussians.
inline double weighted_gaussian_l1_bound(double fu, double fv, double grad_f, double sigma,
                                         double distance) {
    return (grad_f + std::sqrt(2.0 / 3.14159265358979323846) * std::min(fu, fv) / sigma) *
           distance;
}

/// Closed form of the L1 distance between scaled normalized 1-D Gaussians:
/// ||a g_u - b g_v||_1 = F(v - u), where F(0) = |a - b| and otherwise F is
/// the two-term Erf expression below. The same value gives the 2-D weighted
/// distance ||a g_u - b g_v||_1 = F(||u - v||_2) after rotation.
inline double erf_lemma_F(double a, double b, double sigma, double z) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("scales a, b must be > 0");
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
    if (z == 0.0) return std::abs(a - b);
    const double log_ratio = std::log(a / b);
    const double denom = z * sigma * 2.0 * std::sqrt(2.0);
    const double p = (z * z + 2.0 * sigma * sigma * log_ratio) / denom;
    const double q = (-z * z + 2.0 * sigma * sigma * log_ratio) / denom;
    return std::abs(a * std::erf(p) - b * std::erf(q));
}

/// Random diagram for the property runs: 1..max_points points with births
/// uniform in [0, 1] and persistences uniform in (0, 1].
inline PersistenceDiagram random_diagram(Rng& rng, int max_points = 10, int hom_dim = 1) {
    const int count = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_points)));
    std::vector<DiagramPoint> points;
    points.reserve(count);
    for (int i = 0; i < count; ++i) {
        const double birth = rng.uniform();
        const double pers = 1.0 - rng.uniform();  // (0, 1]
        points.push_back({birth, birth + pers});
    }
    return PersistenceDiagram(std::move(points), hom_dim);
}

struct StabilitySuiteResult {
    StabilityReport surface_general;
    StabilityReport image_general;
    StabilityReport gaussian;
    std::uint64_t seed = 0;
    double sigma = 0.0;
    double weight_ceiling_b = 0.0;

    std::int64_t total_violations() const {
        return surface_general.violations + image_general.violations + gaussian.violations;
    }
};

/// Runs every theorem check over `pairs` random diagram pairs drawn per the
/// recorded seed. Any violation indicates an implementation bug, the
/// inequalities being proved theorems.
inline StabilitySuiteResult run_stability_suite(int pairs, double sigma, double b,
                                                std::uint64_t seed) {
    StabilitySuiteResult result;
    result.seed = seed;
    result.sigma = sigma;
    result.weight_ceiling_b = b;

    const WeightingFunction f = WeightingFunction::wb(b);
    const KernelSpec kernel(sigma);
    ImageSpec spec;
    spec.rows = 20;
    spec.cols = 20;
    spec.sigma = sigma;
    spec.weight_ceiling_b = b;
    spec.birth_min = 0.0;
    spec.birth_max = 1.0 + 3.0 * sigma;
    spec.pers_min = 0.0;
    spec.pers_max = 1.0 + 3.0 * sigma;

    Rng rng(seed);
    std::vector<std::pair<PersistenceDiagram, PersistenceDiagram>> instances;
    instances.reserve(pairs);
    for (int i = 0; i < pairs; ++i) {
        auto B = random_diagram(rng);
        auto Bp = random_diagram(rng);
        instances.emplace_back(std::move(B), std::move(Bp));
    }

    // Checks are independent; reports merge associatively.
    std::vector<StabilitySuiteResult> partial(instances.size());
    parallel_for(0, instances.size(), [&](std::size_t i) {
        const auto& [B, Bp] = instances[i];
        partial[i].surface_general = check_surface_stability_general(B, Bp, f, kernel);
        partial[i].image_general = check_image_stability_general(B, Bp, spec);
        partial[i].gaussian = check_gaussian_stability(B, Bp, spec);
    });
    for (const auto& p : partial) {
        result.surface_general.absorb(p.surface_general);
        result.image_general.absorb(p.image_general);
        result.gaussian.absorb(p.gaussian);
    }
    return result;
}

}  // namespace tda
