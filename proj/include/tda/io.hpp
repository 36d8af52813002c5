#pragma once

// File formats: diagrams as `birth,death` CSV (homological dimension in the
// file name suffix `_h{k}`), point clouds and scalar grids as plain CSV
// matrices, images and distance matrices as CSV plus a JSON sidecar with
// the generation parameters. Doubles are written shortest-round-trip.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "tda/core.hpp"
#include "tda/metrics.hpp"

namespace tda {

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{})
        throw std::runtime_error("cannot parse number: '" + s + "'");
    return v;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    return out;
}

inline std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    return in;
}

inline std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path& path,
                                                         bool skip_header = false) {
    auto in = open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first && skip_header) {
            first = false;
            continue;
        }
        first = false;
        std::vector<double> row;
        for (const auto& f : split_csv_line(line)) row.push_back(parse_double(f));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace detail

inline std::filesystem::path diagram_path(const std::filesystem::path& prefix, int hom_dim) {
    return prefix.string() + "_h" + std::to_string(hom_dim) + ".csv";
}

inline void write_diagram_csv(const std::filesystem::path& path,
                              const PersistenceDiagram& diagram) {
    auto out = detail::open_out(path);
    out << "birth,death\n";
    for (const auto& p : diagram.points())
        out << format_double(p.birth) << ',' << format_double(p.death) << '\n';
}

inline PersistenceDiagram read_diagram_csv(const std::filesystem::path& path, int hom_dim) {
    std::vector<DiagramPoint> points;
    for (const auto& row : detail::read_numeric_csv(path, /*skip_header=*/true)) {
        if (row.size() != 2)
            throw std::runtime_error("diagram rows need exactly birth,death: " + path.string());
        points.push_back({row[0], row[1]});
    }
    return PersistenceDiagram(std::move(points), hom_dim);
}

/// Parses the `_h{k}` suffix of a diagram file name; -1 when absent.
inline int hom_dim_from_path(const std::filesystem::path& path) {
    const std::string stem = path.stem().string();
    const auto pos = stem.rfind("_h");
    if (pos == std::string::npos) return -1;
    int dim = 0;
    const auto res =
        std::from_chars(stem.data() + pos + 2, stem.data() + stem.size(), dim);
    if (res.ec != std::errc{} || res.ptr != stem.data() + stem.size()) return -1;
    return dim;
}

inline void write_cloud_csv(const std::filesystem::path& path, const PointCloud& cloud) {
    auto out = detail::open_out(path);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const double* p = cloud.point(i);
        for (int k = 0; k < cloud.dim(); ++k) {
            if (k) out << ',';
            out << format_double(p[k]);
        }
        out << '\n';
    }
}

inline PointCloud read_cloud_csv(const std::filesystem::path& path,
                                 std::optional<std::string> label = std::nullopt) {
    const auto rows = detail::read_numeric_csv(path);
    if (rows.empty()) throw std::runtime_error("empty point cloud file: " + path.string());
    const std::size_t dim = rows.front().size();
    std::vector<double> coords;
    coords.reserve(rows.size() * dim);
    for (const auto& row : rows) {
        if (row.size() != dim)
            throw std::runtime_error("ragged point cloud rows in " + path.string());
        coords.insert(coords.end(), row.begin(), row.end());
    }
    return PointCloud(static_cast<int>(dim), std::move(coords), std::move(label));
}

inline void write_grid_csv(const std::filesystem::path& path, const ScalarGrid& grid) {
    auto out = detail::open_out(path);
    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.cols; ++c) {
            if (c) out << ',';
            out << format_double(grid.at(r, c));
        }
        out << '\n';
    }
}

inline ScalarGrid read_grid_csv(const std::filesystem::path& path) {
    const auto rows = detail::read_numeric_csv(path);
    if (rows.size() < 2 || rows.front().size() < 2)
        throw std::runtime_error("scalar grid needs at least 2x2 values: " + path.string());
    const std::size_t cols = rows.front().size();
    std::vector<double> values;
    values.reserve(rows.size() * cols);
    for (const auto& row : rows) {
        if (row.size() != cols)
            throw std::runtime_error("ragged grid rows in " + path.string());
        values.insert(values.end(), row.begin(), row.end());
    }
    return ScalarGrid(static_cast<int>(rows.size()), static_cast<int>(cols),
                      std::move(values));
}

inline nlohmann::json image_spec_to_json(const ImageSpec& spec, int hom_dim) {
    return nlohmann::json{
        {"rows", spec.rows},
        {"cols", spec.cols},
        {"sigma", spec.sigma},
        {"weight_ceiling_b", spec.weight_ceiling_b},
        {"birth_min", spec.birth_min},
        {"birth_max", spec.birth_max},
        {"pers_min", spec.pers_min},
        {"pers_max", spec.pers_max},
        {"one_dimensional", spec.one_dimensional},
        {"hom_dim", hom_dim},
    };
}

inline std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
    std::filesystem::path p = csv_path;
    p.replace_extension(".json");
    return p;
}

/// Image as a CSV pixel matrix plus a JSON sidecar with the full ImageSpec.
inline void write_image(const std::filesystem::path& csv_path, const PersistenceImage& image) {
    auto out = detail::open_out(csv_path);
    for (int r = 0; r < image.spec.rows; ++r) {
        for (int c = 0; c < image.spec.cols; ++c) {
            if (c) out << ',';
            out << format_double(image.at(r, c));
        }
        out << '\n';
    }
    auto side = detail::open_out(sidecar_path(csv_path));
    side << image_spec_to_json(image.spec, image.hom_dim).dump(2) << '\n';
}

inline PersistenceImage read_image(const std::filesystem::path& csv_path) {
    const auto rows = detail::read_numeric_csv(csv_path);
    nlohmann::json meta;
    {
        auto side = detail::open_in(sidecar_path(csv_path));
        side >> meta;
    }
    PersistenceImage image;
    image.spec.rows = meta.at("rows").get<int>();
    image.spec.cols = meta.at("cols").get<int>();
    image.spec.sigma = meta.at("sigma").get<double>();
    image.spec.weight_ceiling_b = meta.at("weight_ceiling_b").get<double>();
    image.spec.birth_min = meta.at("birth_min").get<double>();
    image.spec.birth_max = meta.at("birth_max").get<double>();
    image.spec.pers_min = meta.at("pers_min").get<double>();
    image.spec.pers_max = meta.at("pers_max").get<double>();
    image.spec.one_dimensional = meta.at("one_dimensional").get<bool>();
    image.hom_dim = meta.at("hom_dim").get<int>();
    if (rows.size() != static_cast<std::size_t>(image.spec.rows))
        throw std::runtime_error("image row count disagrees with sidecar: " + csv_path.string());
    for (const auto& row : rows) {
        if (row.size() != static_cast<std::size_t>(image.spec.cols))
            throw std::runtime_error("image col count disagrees with sidecar: " +
                                     csv_path.string());
        image.pixels.insert(image.pixels.end(), row.begin(), row.end());
    }
    return image;
}

/// Distance matrix as CSV plus a provenance sidecar `<name>.provenance.json`
/// carrying labels, metric and parameters.
inline std::filesystem::path provenance_path(const std::filesystem::path& csv_path) {
    std::filesystem::path p = csv_path;
    p.replace_extension(".provenance.json");
    return p;
}

inline void write_distance_matrix(const std::filesystem::path& csv_path,
                                  const DistanceMatrix& matrix) {
    auto out = detail::open_out(csv_path);
    const std::size_t n = matrix.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j) out << ',';
            out << format_double(matrix.at(i, j));
        }
        out << '\n';
    }
    nlohmann::json meta{
        {"labels", matrix.labels()},
        {"representation", matrix.provenance().representation},
        {"metric", matrix.provenance().metric},
        {"parameters", matrix.provenance().parameters},
    };
    auto side = detail::open_out(provenance_path(csv_path));
    side << meta.dump(2) << '\n';
}

inline DistanceMatrix read_distance_matrix(const std::filesystem::path& csv_path) {
    const auto rows = detail::read_numeric_csv(csv_path);
    nlohmann::json meta;
    {
        auto side = detail::open_in(provenance_path(csv_path));
        side >> meta;
    }
    std::vector<std::string> labels = meta.at("labels").get<std::vector<std::string>>();
    std::vector<double> values;
    values.reserve(rows.size() * rows.size());
    for (const auto& row : rows) {
        if (row.size() != rows.size())
            throw std::runtime_error("distance matrix must be square: " + csv_path.string());
        values.insert(values.end(), row.begin(), row.end());
    }
    Provenance provenance{meta.at("representation").get<std::string>(),
                          meta.at("metric").get<std::string>(),
                          meta.at("parameters").get<std::string>()};
    return DistanceMatrix(std::move(labels), std::move(values), std::move(provenance));
}

}  // namespace tda
