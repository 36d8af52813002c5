#pragma once

// Shared domain types: diagrams, birth-persistence points, image specs,
// grids and point clouds. Everything here is an immutable value type once
// constructed and safe to share across threads.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tda {

/// One off-diagonal feature of a persistence diagram, in birth-death
/// coordinates. Finite by construction; death >= birth.
struct DiagramPoint {
    double birth = 0.0;
    double death = 0.0;

    double persistence() const { return death - birth; }

    friend bool operator==(const DiagramPoint& a, const DiagramPoint& b) {
        return a.birth == b.birth && a.death == b.death;
    }
    friend bool operator<(const DiagramPoint& a, const DiagramPoint& b) {
        return a.birth != b.birth ? a.birth < b.birth : a.death < b.death;
    }
};

/// A finite multiset of birth-death points for one homological dimension.
/// Stored as a flat list; duplicates carry multiplicity. Features with
/// infinite persistence are dropped at construction time and counted.
class PersistenceDiagram {
public:
    PersistenceDiagram() = default;

    PersistenceDiagram(std::vector<DiagramPoint> points, int hom_dim)
        : points_(std::move(points)), hom_dim_(hom_dim) {
        if (hom_dim < 0) throw std::invalid_argument("hom_dim must be >= 0");
        for (const auto& p : points_) {
            if (!std::isfinite(p.birth) || !std::isfinite(p.death))
                throw std::invalid_argument("diagram point must be finite");
            if (p.death < p.birth)
                throw std::invalid_argument("diagram point needs death >= birth");
        }
    }

    /// Builds a diagram from raw pairs that may contain infinite deaths
    /// (essential classes). Those are filtered out and counted.
    static PersistenceDiagram from_raw(const std::vector<DiagramPoint>& raw, int hom_dim) {
        std::vector<DiagramPoint> kept;
        kept.reserve(raw.size());
        std::size_t dropped = 0;
        for (const auto& p : raw) {
            if (std::isfinite(p.birth) && std::isfinite(p.death))
                kept.push_back(p);
            else
                ++dropped;
        }
        PersistenceDiagram d(std::move(kept), hom_dim);
        d.dropped_ = dropped;
        return d;
    }

    const std::vector<DiagramPoint>& points() const { return points_; }
    int hom_dim() const { return hom_dim_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    std::size_t dropped_count() const { return dropped_; }

private:
    std::vector<DiagramPoint> points_;
    int hom_dim_ = 0;
    std::size_t dropped_ = 0;
};

/// A diagram point after the transform (x, y) -> (x, y - x).
struct BirthPersistencePoint {
    double birth = 0.0;
    double persistence = 0.0;

    friend bool operator==(const BirthPersistencePoint& a, const BirthPersistencePoint& b) {
        return a.birth == b.birth && a.persistence == b.persistence;
    }
};

/// Maps every diagram point into birth-persistence coordinates.
inline std::vector<BirthPersistencePoint> transform_to_birth_persistence(
    const PersistenceDiagram& diagram) {
    std::vector<BirthPersistencePoint> out;
    out.reserve(diagram.size());
    for (const auto& p : diagram.points())
        out.push_back({p.birth, p.death - p.birth});
    return out;
}

/// Inverse of the transform: (x, p) -> (x, x + p).
inline DiagramPoint birth_death_from(const BirthPersistencePoint& u) {
    return {u.birth, u.birth + u.persistence};
}

/// Full recipe for turning a diagram into an image: grid geometry, kernel
/// width and the weighting ceiling b. The grid covers
/// [birth_min, birth_max] x [pers_min, pers_max]; rows run along the
/// persistence axis (row 0 = lowest persistence), columns along birth.
/// In one_dimensional mode the birth axis collapses and only the
/// persistence interval is binned (rows must be 1).
struct ImageSpec {
    int rows = 0;
    int cols = 0;
    double sigma = 0.0;
    double weight_ceiling_b = 0.0;
    double birth_min = 0.0;
    double birth_max = 0.0;
    double pers_min = 0.0;
    double pers_max = 0.0;
    bool one_dimensional = false;

    void validate() const {
        if (rows <= 0 || cols <= 0)
            throw std::invalid_argument("image resolution must be positive");
        if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
        if (!(weight_ceiling_b > 0.0))
            throw std::invalid_argument("weight ceiling b must be > 0");
        if (!(pers_min < pers_max))
            throw std::invalid_argument("degenerate persistence bounds");
        if (one_dimensional) {
            if (rows != 1)
                throw std::invalid_argument("one-dimensional images need rows == 1");
        } else if (!(birth_min < birth_max)) {
            throw std::invalid_argument("degenerate birth bounds");
        }
    }

    std::size_t pixel_count() const {
        return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    }
    double pixel_width() const {
        if (one_dimensional) return (pers_max - pers_min) / cols;
        return (birth_max - birth_min) / cols;
    }
    double pixel_height() const {
        return one_dimensional ? 0.0 : (pers_max - pers_min) / rows;
    }
    /// Maximum area of any pixel (all pixels share it on a uniform grid).
    double max_pixel_area() const { return pixel_width() * pixel_height(); }
    /// Total area of the image domain.
    double total_area() const {
        return one_dimensional ? 0.0
                               : (birth_max - birth_min) * (pers_max - pers_min);
    }
};

/// Pixel grid produced by integrating a persistence surface. Row-major,
/// persistence axis = rows.
struct PersistenceImage {
    std::vector<double> pixels;
    ImageSpec spec;
    int hom_dim = 0;

    double at(int row, int col) const {
        return pixels[static_cast<std::size_t>(row) * spec.cols + col];
    }
    double& at(int row, int col) {
        return pixels[static_cast<std::size_t>(row) * spec.cols + col];
    }
    double sum() const {
        double s = 0.0;
        for (double v : pixels) s += v;
        return s;
    }
};

/// A sampled scalar function on a regular 2-D grid (input to the cubical
/// sublevel-set filtration).
struct ScalarGrid {
    int rows = 0;
    int cols = 0;
    std::vector<double> values;  // row-major

    ScalarGrid() = default;
    ScalarGrid(int r, int c, std::vector<double> v)
        : rows(r), cols(c), values(std::move(v)) {
        if (rows < 2 || cols < 2)
            throw std::invalid_argument("scalar grid needs at least 2x2 samples");
        if (values.size() != static_cast<std::size_t>(rows) * cols)
            throw std::invalid_argument("scalar grid value count mismatch");
    }

    double at(int r, int c) const {
        return values[static_cast<std::size_t>(r) * cols + c];
    }
};

/// A finite set of points in R^d with an optional class tag.
class PointCloud {
public:
    PointCloud() = default;
    PointCloud(int dim, std::vector<double> coords,
               std::optional<std::string> label = std::nullopt)
        : dim_(dim), coords_(std::move(coords)), label_(std::move(label)) {
        if (dim_ < 1) throw std::invalid_argument("point dimension must be >= 1");
        if (coords_.empty() || coords_.size() % dim_ != 0)
            throw std::invalid_argument("point cloud needs n*d coordinates, n >= 1");
    }

    int dim() const { return dim_; }
    std::size_t size() const { return coords_.size() / dim_; }
    const std::vector<double>& coords() const { return coords_; }
    const double* point(std::size_t i) const { return coords_.data() + i * dim_; }
    const std::optional<std::string>& label() const { return label_; }

    double distance(std::size_t i, std::size_t j) const {
        const double* a = point(i);
        const double* b = point(j);
        double s = 0.0;
        for (int k = 0; k < dim_; ++k) {
            const double d = a[k] - b[k];
            s += d * d;
        }
        return std::sqrt(s);
    }

    double diameter() const {
        double m = 0.0;
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = i + 1; j < size(); ++j)
                m = std::max(m, distance(i, j));
        return m;
    }

private:
    int dim_ = 0;
    std::vector<double> coords_;
    std::optional<std::string> label_;
};

}  // namespace tda
