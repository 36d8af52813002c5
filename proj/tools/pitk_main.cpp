// Command-line front end for the toolkit: dataset generation, persistence
// of point clouds and grids, persistence images, distance matrices,
// K-medoids clustering, parameter sweeps and the stability verifier.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tda/core.hpp"
#include "tda/datasets.hpp"
#include "tda/filtration.hpp"
#include "tda/image.hpp"
#include "tda/io.hpp"
#include "tda/metrics.hpp"
#include "tda/ml.hpp"
#include "tda/stability.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Diagram files are named `<stem>_h{k}.csv`. The default object label is the
// stem with the `_h{k}` suffix and a trailing `_<index>` removed, so
// `circle_03_h1.csv` labels as `circle`. A labels file (lines `stem,label`)
// overrides that.
std::string default_label(const fs::path& path) {
    std::string stem = path.stem().string();
    const auto hpos = stem.rfind("_h");
    if (hpos != std::string::npos) stem = stem.substr(0, hpos);
    const auto upos = stem.find_last_of('_');
    if (upos != std::string::npos &&
        upos + 1 < stem.size() &&
        std::all_of(stem.begin() + upos + 1, stem.end(),
                    [](char c) { return c >= '0' && c <= '9'; }))
        stem = stem.substr(0, upos);
    return stem;
}

std::map<std::string, std::string> read_labels_file(const fs::path& path) {
    std::map<std::string, std::string> labels;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open labels file: " + path.string());
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto comma = line.find(',');
        if (comma == std::string::npos) continue;
        labels[line.substr(0, comma)] = line.substr(comma + 1);
    }
    return labels;
}

std::vector<fs::path> sorted_files(const fs::path& dir, const std::string& extension) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == extension)
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

std::string label_for(const fs::path& path,
                      const std::map<std::string, std::string>& overrides) {
    std::string stem = path.stem().string();
    const auto hpos = stem.rfind("_h");
    if (hpos != std::string::npos) stem = stem.substr(0, hpos);
    const auto it = overrides.find(stem);
    return it != overrides.end() ? it->second : default_label(path);
}

int run_generate(const std::string& dataset, const fs::path& out_dir, int per_class,
                 int points, double noise, std::uint64_t seed, std::vector<double> r_values,
                 int iterations) {
    fs::create_directories(out_dir);
    json manifest;
    manifest["generator"] = tda::Rng::generator_name();
    manifest["seed"] = seed;
    manifest["dataset"] = dataset;
    json files = json::array();

    std::uint64_t instance = 0;
    if (dataset == "shapes") {
        manifest["per_class"] = per_class;
        manifest["points"] = points;
        manifest["noise"] = noise;
        for (tda::ShapeClass cls : tda::all_shape_classes()) {
            for (int i = 0; i < per_class; ++i, ++instance) {
                const std::uint64_t s = tda::Rng::derive_seed(seed, instance);
                const auto cloud = tda::sample_shape(cls, points, noise, s);
                char name[128];
                std::snprintf(name, sizeof(name), "%s_%02d.csv",
                              tda::shape_class_name(cls).c_str(), i);
                tda::write_cloud_csv(out_dir / name, cloud);
                files.push_back({{"file", name},
                                 {"label", tda::shape_class_name(cls)},
                                 {"seed", s},
                                 {"points", points},
                                 {"noise", noise}});
            }
        }
    } else if (dataset == "ltm") {
        if (r_values.empty()) r_values = {2.5, 3.5, 4.0, 4.1, 4.3};
        manifest["per_class"] = per_class;
        manifest["iterations"] = iterations;
        manifest["r_values"] = r_values;
        for (double r : r_values) {
            for (int i = 0; i < per_class; ++i, ++instance) {
                const std::uint64_t s = tda::Rng::derive_seed(seed, instance);
                const auto cloud = tda::ltm_orbit({r, iterations, s});
                char name[128];
                std::snprintf(name, sizeof(name), "ltm_r%.2f_%02d.csv", r, i);
                tda::write_cloud_csv(out_dir / name, cloud);
                files.push_back(
                    {{"file", name}, {"label", "r=" + std::to_string(r)}, {"seed", s},
                     {"r", r}, {"iterations", iterations}});
            }
        }
    } else {
        std::cerr << "unknown dataset: " << dataset << "\n";
        return 2;
    }
    manifest["files"] = files;
    std::ofstream mout(out_dir / "manifest.json");
    mout << manifest.dump(2) << "\n";
    std::cout << "wrote " << files.size() << " clouds to " << out_dir.string() << "\n";
    return 0;
}

int run_persist(const fs::path& input, const std::string& mode, const fs::path& out_prefix,
                int max_dim, double max_scale, int max_hom_dim) {
    tda::FilteredComplex complex;
    if (mode == "rips") {
        const auto cloud = tda::read_cloud_csv(input);
        const double cap = max_scale > 0.0 ? max_scale : cloud.diameter();
        complex = tda::rips_complex(cloud, max_dim, cap);
    } else if (mode == "cubical") {
        complex = tda::cubical_sublevel(tda::read_grid_csv(input));
    } else {
        std::cerr << "unknown mode: " << mode << "\n";
        return 2;
    }
    const auto result = tda::persistence(complex, max_hom_dim);
    if (out_prefix.has_parent_path()) fs::create_directories(out_prefix.parent_path());
    for (const auto& diagram : result.diagrams) {
        const auto path = tda::diagram_path(out_prefix, diagram.hom_dim());
        tda::write_diagram_csv(path, diagram);
        std::cout << path.string() << ": " << diagram.size() << " points, "
                  << result.essential_counts[diagram.hom_dim()]
                  << " essential classes dropped\n";
    }
    return 0;
}

int run_image(const fs::path& input_dir, const fs::path& out_dir, int rows, int cols,
              double sigma, double b_override, bool one_dimensional, int hom_dim) {
    const std::string suffix = "_h" + std::to_string(hom_dim) + ".csv";
    std::vector<fs::path> files;
    for (const auto& path : sorted_files(input_dir, ".csv"))
        if (path.filename().string().size() >= suffix.size() &&
            path.filename().string().compare(path.filename().string().size() - suffix.size(),
                                             suffix.size(), suffix) == 0)
            files.push_back(path);
    if (files.empty()) {
        std::cerr << "no *" << suffix << " diagrams in " << input_dir.string() << "\n";
        return 2;
    }
    std::vector<tda::PersistenceDiagram> diagrams;
    for (const auto& path : files) diagrams.push_back(tda::read_diagram_csv(path, hom_dim));

    auto bounds = tda::shared_image_bounds(diagrams, sigma);
    if (b_override > 0.0) bounds.weight_ceiling_b = b_override;
    const auto spec = tda::make_image_spec(bounds, rows, cols, sigma, one_dimensional);

    fs::create_directories(out_dir);
    for (std::size_t i = 0; i < files.size(); ++i) {
        const auto image = one_dimensional ? tda::compute_image_1d(diagrams[i], spec)
                                           : tda::compute_image(diagrams[i], spec);
        fs::path out = out_dir / files[i].filename();
        out.replace_extension(".pi.csv");
        tda::write_image(out, image);
    }
    std::cout << "wrote " << files.size() << " images (b=" << bounds.weight_ceiling_b
              << ") to " << out_dir.string() << "\n";
    return 0;
}

int run_distmat(const fs::path& input_dir, const std::string& representation,
                const std::string& metric, const fs::path& out_csv, int hom_dim,
                const fs::path& labels_file) {
    std::map<std::string, std::string> overrides;
    if (!labels_file.empty()) overrides = read_labels_file(labels_file);

    if (out_csv.has_parent_path()) fs::create_directories(out_csv.parent_path());
    if (representation == "pd") {
        const std::string suffix = "_h" + std::to_string(hom_dim) + ".csv";
        std::vector<tda::PersistenceDiagram> diagrams;
        std::vector<std::string> labels;
        for (const auto& path : sorted_files(input_dir, ".csv")) {
            const std::string name = path.filename().string();
            if (name.size() < suffix.size() ||
                name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0)
                continue;
            diagrams.push_back(tda::read_diagram_csv(path, hom_dim));
            labels.push_back(label_for(path, overrides));
        }
        if (diagrams.empty()) {
            std::cerr << "no diagrams found in " << input_dir.string() << "\n";
            return 2;
        }
        // Diagram L1/L2/Linf are the 1-/2-Wasserstein and bottleneck metrics.
        auto fn = [&](const tda::PersistenceDiagram& a,
                      const tda::PersistenceDiagram& b) -> double {
            if (metric == "w1" || metric == "l1") return tda::wasserstein(a, b, 1.0).first;
            if (metric == "w2" || metric == "l2") return tda::wasserstein(a, b, 2.0).first;
            if (metric == "bottleneck" || metric == "linf") return tda::bottleneck(a, b).first;
            throw std::invalid_argument("unknown diagram metric: " + metric);
        };
        const auto matrix = tda::build_distance_matrix(
            diagrams, labels, fn,
            tda::Provenance{"pd", metric, "hom_dim=" + std::to_string(hom_dim)});
        tda::write_distance_matrix(out_csv, matrix);
    } else if (representation == "pi") {
        std::vector<std::vector<double>> vectors;
        std::vector<std::string> labels;
        for (const auto& path : sorted_files(input_dir, ".csv")) {
            if (path.filename().string().find(".pi.csv") == std::string::npos) continue;
            vectors.push_back(tda::read_image(path).pixels);
            labels.push_back(label_for(fs::path(path).replace_extension(""), overrides));
        }
        if (vectors.empty()) {
            std::cerr << "no *.pi.csv images found in " << input_dir.string() << "\n";
            return 2;
        }
        const tda::VectorNorm norm = tda::vector_norm_from_string(metric);
        const auto matrix = tda::build_distance_matrix(
            vectors, labels,
            [norm](const std::vector<double>& a, const std::vector<double>& b) {
                return tda::vector_distance(a, b, norm);
            },
            tda::Provenance{"pi", metric, ""});
        tda::write_distance_matrix(out_csv, matrix);
    } else {
        std::cerr << "unknown representation: " << representation << "\n";
        return 2;
    }
    std::cout << "wrote " << out_csv.string() << "\n";
    return 0;
}

int run_cluster(const fs::path& matrix_csv, int k, int restarts, std::uint64_t seed,
                const fs::path& out_json) {
    const auto matrix = tda::read_distance_matrix(matrix_csv);
    const auto clustering = tda::kmedoids(matrix, k, restarts, seed);
    const double accuracy = tda::clustering_accuracy(clustering, matrix.labels());

    json out;
    out["k"] = k;
    out["restarts"] = restarts;
    out["seed"] = seed;
    out["score"] = clustering.score;
    out["medoid_indices"] = clustering.medoid_indices;
    out["assignment"] = clustering.assignment;
    out["accuracy"] = accuracy;
    if (!out_json.empty()) {
        if (out_json.has_parent_path()) fs::create_directories(out_json.parent_path());
        std::ofstream os(out_json);
        os << out.dump(2) << "\n";
    }
    std::cout << "score " << clustering.score << " accuracy " << accuracy << "\n";
    return 0;
}

int run_sweep(const fs::path& input_dir, int hom_dim, const std::string& metric,
              std::vector<int> resolutions, std::vector<double> sigmas, int k, int restarts,
              std::uint64_t seed, const fs::path& out_csv, const fs::path& labels_file) {
    std::map<std::string, std::string> overrides;
    if (!labels_file.empty()) overrides = read_labels_file(labels_file);

    const std::string suffix = "_h" + std::to_string(hom_dim) + ".csv";
    std::vector<tda::PersistenceDiagram> diagrams;
    std::vector<std::string> labels;
    for (const auto& path : sorted_files(input_dir, ".csv")) {
        const std::string name = path.filename().string();
        if (name.size() < suffix.size() ||
            name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0)
            continue;
        diagrams.push_back(tda::read_diagram_csv(path, hom_dim));
        labels.push_back(label_for(path, overrides));
    }
    if (diagrams.empty()) {
        std::cerr << "no diagrams found in " << input_dir.string() << "\n";
        return 2;
    }
    if (resolutions.empty()) resolutions = {10, 20, 40};
    if (sigmas.empty()) sigmas = {0.05, 0.1, 0.2};

    const auto table = tda::parameter_sweep(diagrams, labels, resolutions, sigmas,
                                            tda::vector_norm_from_string(metric), k,
                                            restarts, seed);
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out_csv.empty()) {
        if (out_csv.has_parent_path()) fs::create_directories(out_csv.parent_path());
        file.open(out_csv);
        os = &file;
    }
    *os << "resolution,sigma,accuracy\n";
    for (const auto& cell : table)
        *os << cell.resolution << ',' << tda::format_double(cell.sigma) << ','
            << tda::format_double(cell.accuracy) << '\n';
    return 0;
}

int run_verify_stability(int pairs, double sigma, double b, std::uint64_t seed,
                         const fs::path& out_json) {
    const auto suite = tda::run_stability_suite(pairs, sigma, b, seed);
    const auto report_json = [](const tda::StabilityReport& r) {
        return json{{"pairs_tested", r.pairs_tested},
                    {"max_ratio", r.max_ratio},
                    {"constant_used", r.constant_used},
                    {"violations", r.violations}};
    };
    json out;
    out["seed"] = suite.seed;
    out["sigma"] = suite.sigma;
    out["weight_ceiling_b"] = suite.weight_ceiling_b;
    out["surface_general"] = report_json(suite.surface_general);
    out["image_general"] = report_json(suite.image_general);
    out["gaussian"] = report_json(suite.gaussian);
    out["violations"] = suite.total_violations();

    if (!out_json.empty()) {
        if (out_json.has_parent_path()) fs::create_directories(out_json.parent_path());
        std::ofstream os(out_json);
        os << out.dump(2) << "\n";
    }
    std::cout << out.dump(2) << "\n";
    return suite.total_violations() == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"persistence-image toolkit"};
    app.require_subcommand(1);

    // generate
    std::string g_dataset = "shapes";
    fs::path g_out = "data";
    int g_per_class = 10, g_points = 200, g_iterations = 1000;
    double g_noise = 0.05;
    std::uint64_t g_seed = 1;
    std::vector<double> g_r;
    auto* generate = app.add_subcommand("generate", "generate a synthetic dataset");
    generate->add_option("--dataset", g_dataset, "shapes|ltm");
    generate->add_option("--out", g_out, "output directory");
    generate->add_option("--per-class", g_per_class, "clouds per class");
    generate->add_option("--points", g_points, "points per cloud (shapes)");
    generate->add_option("--noise", g_noise, "Gaussian noise level (shapes)");
    generate->add_option("--seed", g_seed, "base seed");
    generate->add_option("--r", g_r, "ltm parameter values");
    generate->add_option("--iterations", g_iterations, "ltm iterations per orbit");

    // persist
    fs::path p_input, p_out = "diagram";
    std::string p_mode = "rips";
    int p_max_dim = 2, p_max_hom = 1;
    double p_max_scale = 0.0;
    auto* persist = app.add_subcommand("persist", "persistence of a cloud or grid");
    persist->add_option("--input", p_input, "point-cloud or grid CSV")->required();
    persist->add_option("--mode", p_mode, "rips|cubical");
    persist->add_option("--out", p_out, "output prefix (suffix _h{k}.csv is added)");
    persist->add_option("--max-dim", p_max_dim, "max simplex dimension (rips)");
    persist->add_option("--max-scale", p_max_scale, "rips scale cap (default: diameter)");
    persist->add_option("--max-hom-dim", p_max_hom, "compute H0..H{k}");

    // image
    fs::path i_input, i_out = "images";
    int i_rows = 20, i_cols = 20, i_hom = 1;
    double i_sigma = 0.1, i_b = 0.0;
    bool i_one_dim = false;
    auto* image = app.add_subcommand("image", "persistence images from diagrams");
    image->add_option("--input", i_input, "directory of *_h{k}.csv diagrams")->required();
    image->add_option("--out", i_out, "output directory");
    image->add_option("--rows", i_rows, "pixel rows");
    image->add_option("--cols", i_cols, "pixel cols");
    image->add_option("--sigma", i_sigma, "Gaussian std dev");
    image->add_option("--b", i_b, "weight ceiling override (default: max persistence)");
    image->add_option("--hom-dim", i_hom, "homological dimension to image");
    image->add_flag("--one-dimensional", i_one_dim, "1-D images (equal-birth diagrams)");

    // distmat
    fs::path d_input, d_out = "distmat.csv", d_labels;
    std::string d_repr = "pi", d_metric = "l2";
    int d_hom = 1;
    auto* distmat = app.add_subcommand("distmat", "pairwise distance matrix");
    distmat->add_option("--input", d_input, "directory of diagrams or images")->required();
    distmat->add_option("--representation", d_repr, "pd|pi");
    distmat->add_option("--metric", d_metric, "l1|l2|linf|w1|w2|bottleneck");
    distmat->add_option("--out", d_out, "output CSV (provenance JSON alongside)");
    distmat->add_option("--hom-dim", d_hom, "diagram dimension (pd inputs)");
    distmat->add_option("--labels", d_labels, "labels file: lines `stem,label`");

    // cluster
    fs::path c_matrix, c_out;
    int c_k = 6, c_restarts = 1000;
    std::uint64_t c_seed = 1;
    auto* cluster = app.add_subcommand("cluster", "K-medoids over a distance matrix");
    cluster->add_option("--matrix", c_matrix, "distance matrix CSV")->required();
    cluster->add_option("--k", c_k, "number of medoids");
    cluster->add_option("--restarts", c_restarts, "random restarts");
    cluster->add_option("--seed", c_seed, "seed");
    cluster->add_option("--out", c_out, "clustering JSON output");

    // sweep
    fs::path s_input, s_out, s_labels;
    std::string s_metric = "l2";
    std::vector<int> s_res;
    std::vector<double> s_sigmas;
    int s_k = 6, s_restarts = 100, s_hom = 1;
    std::uint64_t s_seed = 1;
    auto* sweep = app.add_subcommand("sweep", "accuracy over resolution x sigma");
    sweep->add_option("--input", s_input, "directory of diagram CSVs")->required();
    sweep->add_option("--hom-dim", s_hom, "diagram dimension");
    sweep->add_option("--metric", s_metric, "l1|l2|linf");
    sweep->add_option("--resolutions", s_res, "resolutions (square)");
    sweep->add_option("--sigmas", s_sigmas, "kernel widths");
    sweep->add_option("--k", s_k, "number of medoids");
    sweep->add_option("--restarts", s_restarts, "random restarts");
    sweep->add_option("--seed", s_seed, "seed");
    sweep->add_option("--out", s_out, "output CSV (stdout if omitted)");
    sweep->add_option("--labels", s_labels, "labels file: lines `stem,label`");

    // verify-stability
    int v_pairs = 200;
    double v_sigma = 0.1, v_b = 1.0;
    std::uint64_t v_seed = 7;
    fs::path v_out;
    auto* verify = app.add_subcommand("verify-stability", "check the stability theorems");
    verify->add_option("--pairs", v_pairs, "random diagram pairs");
    verify->add_option("--sigma", v_sigma, "Gaussian std dev");
    verify->add_option("--b", v_b, "weight ceiling");
    verify->add_option("--seed", v_seed, "seed");
    verify->add_option("--out", v_out, "report JSON output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed())
            return run_generate(g_dataset, g_out, g_per_class, g_points, g_noise, g_seed,
                                g_r, g_iterations);
        if (persist->parsed())
            return run_persist(p_input, p_mode, p_out, p_max_dim, p_max_scale, p_max_hom);
        if (image->parsed())
            return run_image(i_input, i_out, i_rows, i_cols, i_sigma, i_b, i_one_dim, i_hom);
        if (distmat->parsed())
            return run_distmat(d_input, d_repr, d_metric, d_out, d_hom, d_labels);
        if (cluster->parsed()) return run_cluster(c_matrix, c_k, c_restarts, c_seed, c_out);
        if (sweep->parsed())
            return run_sweep(s_input, s_hom, s_metric, s_res, s_sigmas, s_k, s_restarts,
                             s_seed, s_out, s_labels);
        if (verify->parsed())
            return run_verify_stability(v_pairs, v_sigma, v_b, v_seed, v_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
