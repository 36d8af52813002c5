#pragma once

// Persistence surfaces and persistence images. A diagram is transformed to
// birth-persistence coordinates, every point contributes a weighted
// normalized Gaussian, and the image integrates that surface over a pixel
// grid. Pixel integrals are evaluated in closed form: the symmetric
// Gaussian separates, so each box integral is a product of two
// erf differences.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "tda/core.hpp"

namespace tda {

/// Piecewise linear ramp: 0 for t <= 0, t/b on (0, b), 1 for t >= b.
inline double weight_wb(double b, double t) {
    if (!(b > 0.0)) throw std::invalid_argument("weight ceiling b must be > 0");
    if (t <= 0.0) return 0.0;
    if (t >= b) return 1.0;
    return t / b;
}

/// Nonnegative weighting function over birth-persistence coordinates.
/// The ramp w_b is the workhorse; constant_one exists only for ablation
/// runs (it is not zero on the horizontal axis, so the stability theorems
/// do not apply to it and the stability module rejects it).
class WeightingFunction {
public:
    enum class Kind { piecewise_linear_wb, constant_one, custom_tabulated };

    /// Regular 2-D sample table over (birth, persistence), bilinearly
    /// interpolated, clamped to the table edges outside. Samples along
    /// persistence 0 must themselves be 0.
    struct Table {
        double birth_min = 0.0, birth_max = 0.0;
        double pers_min = 0.0, pers_max = 0.0;
        int birth_samples = 0, pers_samples = 0;
        std::vector<double> values;  // row-major, persistence rows

        double at(int pi, int bi) const {
            return values[static_cast<std::size_t>(pi) * birth_samples + bi];
        }
    };

    static WeightingFunction wb(double b) {
        if (!(b > 0.0)) throw std::invalid_argument("weight ceiling b must be > 0");
        WeightingFunction f;
        f.kind_ = Kind::piecewise_linear_wb;
        f.b_ = b;
        return f;
    }

    static WeightingFunction constant_one() {
        WeightingFunction f;
        f.kind_ = Kind::constant_one;
        return f;
    }

    static WeightingFunction tabulated(Table table) {
        if (table.birth_samples < 2 || table.pers_samples < 2)
            throw std::invalid_argument("weight table needs at least 2x2 samples");
        if (table.values.size() !=
            static_cast<std::size_t>(table.birth_samples) * table.pers_samples)
            throw std::invalid_argument("weight table size mismatch");
        if (!(table.birth_min < table.birth_max && table.pers_min < table.pers_max))
            throw std::invalid_argument("weight table needs nondegenerate bounds");
        if (table.pers_min != 0.0)
            throw std::invalid_argument("weight table must start at persistence 0");
        for (int bi = 0; bi < table.birth_samples; ++bi)
            if (table.at(0, bi) != 0.0)
                throw std::invalid_argument("weight table samples at persistence 0 must be 0");
        for (double v : table.values)
            if (!(v >= 0.0))
                throw std::invalid_argument("weight table samples must be >= 0");
        WeightingFunction f;
        f.kind_ = Kind::custom_tabulated;
        f.table_ = std::move(table);
        return f;
    }

    Kind kind() const { return kind_; }
    double ceiling_b() const { return b_; }
    const Table& table() const { return table_; }

    double operator()(double birth, double persistence) const {
        switch (kind_) {
            case Kind::piecewise_linear_wb:
                return weight_wb(b_, persistence);
            case Kind::constant_one:
                return 1.0;
            case Kind::custom_tabulated:
                return eval_table(birth, persistence);
        }
        return 0.0;
    }

    double operator()(const BirthPersistencePoint& u) const {
        return (*this)(u.birth, u.persistence);
    }

private:
    double eval_table(double birth, double persistence) const {
        const Table& t = table_;
        const double dx = (t.birth_max - t.birth_min) / (t.birth_samples - 1);
        const double dy = (t.pers_max - t.pers_min) / (t.pers_samples - 1);
        double x = (birth - t.birth_min) / dx;
        double y = (persistence - t.pers_min) / dy;
        x = std::clamp(x, 0.0, static_cast<double>(t.birth_samples - 1));
        y = std::clamp(y, 0.0, static_cast<double>(t.pers_samples - 1));
        const int x0 = std::min(static_cast<int>(x), t.birth_samples - 2);
        const int y0 = std::min(static_cast<int>(y), t.pers_samples - 2);
        const double fx = x - x0;
        const double fy = y - y0;
        return (1 - fy) * ((1 - fx) * t.at(y0, x0) + fx * t.at(y0, x0 + 1)) +
               fy * ((1 - fx) * t.at(y0 + 1, x0) + fx * t.at(y0 + 1, x0 + 1));
    }

    Kind kind_ = Kind::piecewise_linear_wb;
    double b_ = 1.0;
    Table table_;
};

/// Width of the normalized symmetric Gaussian placed on each point.
struct KernelSpec {
    double sigma = 0.0;

    explicit KernelSpec(double s) : sigma(s) {
        if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
    }

    /// Density of the 2-D Gaussian centered at (ux, uy).
    double density(double ux, double uy, double x, double y) const {
        const double dx = x - ux;
        const double dy = y - uy;
        const double s2 = sigma * sigma;
        return std::exp(-(dx * dx + dy * dy) / (2.0 * s2)) /
               (6.283185307179586476925286766559 * s2);
    }
};

namespace detail {

// CDF of N(mu, sigma^2) at x.
inline double gaussian_cdf(double x, double mu, double sigma) {
    return 0.5 * std::erfc(-(x - mu) / (sigma * 1.4142135623730950488));
}

}  // namespace detail

/// Value of the persistence surface rho_B at z = (birth, persistence).
inline double surface_value(const PersistenceDiagram& diagram, const WeightingFunction& f,
                            const KernelSpec& kernel, double birth, double persistence) {
    double s = 0.0;
    for (const auto& u : transform_to_birth_persistence(diagram))
        s += f(u) * kernel.density(u.birth, u.persistence, birth, persistence);
    return s;
}

/// Integrates the persistence surface over each pixel box. The weighting is
/// a per-point constant (f is evaluated at the transformed point, not at the
/// integration variable), so each pixel is a weighted sum of separable
/// Gaussian box masses.
inline PersistenceImage compute_image(const PersistenceDiagram& diagram,
                                      const ImageSpec& spec,
                                      const WeightingFunction& f) {
    spec.validate();
    if (spec.one_dimensional)
        throw std::invalid_argument("use compute_image_1d for one-dimensional specs");

    PersistenceImage image;
    image.spec = spec;
    image.hom_dim = diagram.hom_dim();
    image.pixels.assign(spec.pixel_count(), 0.0);

    const double dx = spec.pixel_width();
    const double dy = spec.pixel_height();

    std::vector<double> cdf_x(spec.cols + 1), cdf_y(spec.rows + 1);
    for (const auto& u : transform_to_birth_persistence(diagram)) {
        const double w = f(u);
        if (w == 0.0) continue;
        for (int j = 0; j <= spec.cols; ++j)
            cdf_x[j] = detail::gaussian_cdf(spec.birth_min + j * dx, u.birth, spec.sigma);
        for (int i = 0; i <= spec.rows; ++i)
            cdf_y[i] = detail::gaussian_cdf(spec.pers_min + i * dy, u.persistence, spec.sigma);
        for (int i = 0; i < spec.rows; ++i) {
            const double my = cdf_y[i + 1] - cdf_y[i];
            if (my == 0.0) continue;
            for (int j = 0; j < spec.cols; ++j)
                image.at(i, j) += w * my * (cdf_x[j + 1] - cdf_x[j]);
        }
    }
    return image;
}

inline PersistenceImage compute_image(const PersistenceDiagram& diagram,
                                      const ImageSpec& spec) {
    return compute_image(diagram, spec, WeightingFunction::wb(spec.weight_ceiling_b));
}

/// One-dimensional variant for diagrams whose births are all equal (the
/// usual H0 situation): persistence values carry all the information, so a
/// 1 x cols image bins weighted 1-D Gaussians over the persistence axis.
inline PersistenceImage compute_image_1d(const PersistenceDiagram& diagram,
                                         const ImageSpec& spec,
                                         const WeightingFunction& f) {
    spec.validate();
    if (!spec.one_dimensional)
        throw std::invalid_argument("spec is not one-dimensional");
    if (!diagram.empty()) {
        const double birth0 = diagram.points().front().birth;
        for (const auto& p : diagram.points())
            if (p.birth != birth0)
                throw std::invalid_argument(
                    "one-dimensional image requires all births equal; "
                    "fall back to compute_image");
    }

    PersistenceImage image;
    image.spec = spec;
    image.hom_dim = diagram.hom_dim();
    image.pixels.assign(spec.pixel_count(), 0.0);

    const double dt = spec.pixel_width();
    for (const auto& u : transform_to_birth_persistence(diagram)) {
        const double w = f(u);
        if (w == 0.0) continue;
        double prev = detail::gaussian_cdf(spec.pers_min, u.persistence, spec.sigma);
        for (int j = 0; j < spec.cols; ++j) {
            const double next =
                detail::gaussian_cdf(spec.pers_min + (j + 1) * dt, u.persistence, spec.sigma);
            image.pixels[j] += w * (next - prev);
            prev = next;
        }
    }
    return image;
}

inline PersistenceImage compute_image_1d(const PersistenceDiagram& diagram,
                                         const ImageSpec& spec) {
    return compute_image_1d(diagram, spec, WeightingFunction::wb(spec.weight_ceiling_b));
}

/// Row-major flattening of each image, joined in list order. This is the
/// concatenated feature vector for multi-dimension pipelines (H0 + H1 + ...).
inline std::vector<double> concatenate_images(const std::vector<PersistenceImage>& images) {
    if (images.empty())
        throw std::invalid_argument("cannot concatenate an empty image list");
    std::vector<double> out;
    std::size_t total = 0;
    for (const auto& im : images) total += im.pixels.size();
    out.reserve(total);
    for (const auto& im : images)
        out.insert(out.end(), im.pixels.begin(), im.pixels.end());
    return out;
}

}  // namespace tda
