#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "tda/io.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(PITK_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / "pitk_cli_test") {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("full pipeline through the CLI") {
    TempDir tmp;
    const std::string data = tmp.str() + "/clouds";
    const std::string diagrams = tmp.str() + "/diagrams";
    const std::string images = tmp.str() + "/images";

    REQUIRE(run("generate --dataset shapes --out " + data +
                " --per-class 2 --points 40 --noise 0.05 --seed 9") == 0);
    REQUIRE(fs::exists(data + "/manifest.json"));

    // Persist every generated cloud.
    int clouds = 0;
    for (const auto& entry : fs::directory_iterator(data)) {
        if (entry.path().extension() != ".csv") continue;
        ++clouds;
        const std::string stem = entry.path().stem().string();
        REQUIRE(run("persist --input " + entry.path().string() + " --mode rips --out " +
                    diagrams + "/" + stem) == 0);
    }
    CHECK(clouds == 12);
    CHECK(fs::exists(diagrams + "/circle_00_h0.csv"));
    CHECK(fs::exists(diagrams + "/circle_00_h1.csv"));

    REQUIRE(run("image --input " + diagrams + " --out " + images +
                " --rows 10 --cols 10 --sigma 0.1 --hom-dim 1") == 0);
    CHECK(fs::exists(images + "/circle_00_h1.pi.csv"));
    CHECK(fs::exists(images + "/circle_00_h1.pi.json"));
    const auto image = tda::read_image(images + "/circle_00_h1.pi.csv");
    CHECK(image.spec.rows == 10);
    CHECK(image.spec.cols == 10);

    const std::string matrix = tmp.str() + "/pi_l2.csv";
    REQUIRE(run("distmat --input " + images + " --representation pi --metric l2 --out " +
                matrix) == 0);
    const auto dm = tda::read_distance_matrix(matrix);
    CHECK(dm.size() == 12);
    CHECK(dm.labels()[0] == "circle");
    CHECK(dm.provenance().representation == "pi");

    REQUIRE(run("cluster --matrix " + matrix + " --k 6 --restarts 50 --seed 3 --out " +
                tmp.str() + "/clustering.json") == 0);
    nlohmann::json clustering;
    std::ifstream(tmp.str() + "/clustering.json") >> clustering;
    CHECK(clustering.at("medoid_indices").size() == 6);
    CHECK(clustering.at("accuracy").get<double>() >= 0.0);

    // Diagram-space matrix exercises the Wasserstein path.
    const std::string pd_matrix = tmp.str() + "/pd_w1.csv";
    REQUIRE(run("distmat --input " + diagrams +
                " --representation pd --metric w1 --hom-dim 1 --out " + pd_matrix) == 0);
    CHECK(tda::read_distance_matrix(pd_matrix).size() == 12);

    // Sweep over a tiny grid.
    REQUIRE(run("sweep --input " + diagrams +
                " --resolutions 5 10 --sigmas 0.05 0.1 --k 6 --restarts 10 --seed 2 --out " +
                tmp.str() + "/sweep.csv") == 0);
    std::ifstream sweep_file(tmp.str() + "/sweep.csv");
    std::string line;
    int lines = 0;
    while (std::getline(sweep_file, line))
        if (!line.empty()) ++lines;
    CHECK(lines == 5);  // header + 4 cells
}

TEST_CASE("cubical persistence through the CLI") {
    TempDir tmp;
    // The 5x5 ring grid: zero border around a raised interior.
    std::ofstream grid(tmp.path / "grid.csv");
    for (int r = 0; r < 5; ++r) {
        for (int c = 0; c < 5; ++c) {
            grid << ((r == 0 || r == 4 || c == 0 || c == 4) ? "0" : "1");
            if (c < 4) grid << ',';
        }
        grid << '\n';
    }
    grid.close();

    REQUIRE(run("persist --input " + tmp.str() + "/grid.csv --mode cubical --out " +
                tmp.str() + "/ring") == 0);
    const auto h1 = tda::read_diagram_csv(tmp.path / "ring_h1.csv", 1);
    REQUIRE(h1.size() == 1);
    CHECK(h1.points()[0].birth == 0.0);
    CHECK(h1.points()[0].death == 1.0);
}

TEST_CASE("verify-stability emits a report and a success exit code") {
    TempDir tmp;
    const std::string report = tmp.str() + "/report.json";
    REQUIRE(run("verify-stability --pairs 4 --sigma 0.1 --b 1 --seed 5 --out " + report) == 0);
    nlohmann::json j;
    std::ifstream(report) >> j;
    CHECK(j.at("violations").get<int>() == 0);
    CHECK(j.at("surface_general").at("pairs_tested").get<int>() == 4);
    CHECK(j.at("seed").get<std::uint64_t>() == 5);
}

TEST_CASE("bad inputs produce nonzero exits") {
    TempDir tmp;
    CHECK(run("persist --input " + tmp.str() + "/missing.csv --mode rips --out x") != 0);
    CHECK(run("distmat --input " + tmp.str() + " --representation pd --out " + tmp.str() +
              "/out.csv") != 0);
}
