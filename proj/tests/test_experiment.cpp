#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "ptgain/experiment.hpp"

using namespace ptgain;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "ptgain_test";
    fs::create_directories(dir);
    return dir;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("config parsing and validation") {
    const auto cfg = parse_config(R"({"dt": 0.01, "n_traj": 8, "G": [0.0, 0.5], "F": "sy"})", "fig2");
    CHECK(cfg.dt == 0.01);
    CHECK(cfg.n_traj == 8);
    CHECK(cfg.strengths == std::vector<double>{0.0, 0.5});
    REQUIRE(cfg.feedbacks.size() == 1);
    CHECK(cfg.feedbacks[0] == FeedbackSelector::SigmaY);

    CHECK_THROWS_AS(parse_config(R"({"dt": -1})", "fig2"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"gamma1": -0.5})", "fig2"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"F": "sigma_q"})", "fig2"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"delta": 0.1})", "fig2"), ConfigError);  // unknown key
    CHECK_THROWS_AS(parse_config(R"(not json)", "fig2"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({})", "bogus"), ConfigError);
}

TEST_CASE("feedback selector round trip") {
    for (const char* name : {"sx", "sy", "sz", "id", "raise-lower"})
        CHECK(feedback_selector_name(parse_feedback_selector(name)) == name);
    CHECK_THROWS_AS(parse_feedback_selector("sw"), ConfigError);
}

TEST_CASE("csv round trip") {
    CurveTable table;
    table.name = "round_trip";
    table.columns = {"a", "b", "c"};
    table.data = {{0.0, 1.0}, {0.123456789012345, -2.5e-17}, {3.0, 4.0}};
    const fs::path path = temp_dir() / "round_trip.csv";
    emit_csv(table, path);

    const std::string text = read_file(path);
    CHECK(text.rfind("a,b,c\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);

    const CurveTable parsed = parse_csv(path);
    REQUIRE(parsed.columns == table.columns);
    for (std::size_t c = 0; c < table.data.size(); ++c)
        for (std::size_t r = 0; r < table.data[c].size(); ++r)
            CHECK(parsed.data[c][r] == table.data[c][r]);
}

TEST_CASE("empty table gives a header-only csv") {
    CurveTable table;
    table.name = "empty";
    table.columns = {"x", "y"};
    table.data = {{}, {}};
    const fs::path path = temp_dir() / "empty.csv";
    emit_csv(table, path);
    CHECK(read_file(path) == "x,y\n");
}

TEST_CASE("decay-check table") {
    ExperimentConfig cfg;
    cfg.experiment = "decay-check";
    cfg.dt = 1e-3;
    const CurveTable table = run_decay_check(cfg);
    REQUIRE(table.columns.size() == 4);
    double max_err = 0.0;
    for (double err : table.data[3]) max_err = std::max(max_err, err);
    CHECK(max_err < 1e-6);

    cfg.dt = 2e-3;
    const CurveTable coarse = run_decay_check(cfg);
    double coarse_err = 0.0;
    for (double err : coarse.data[3]) coarse_err = std::max(coarse_err, err);
    const double ratio = coarse_err / max_err;
    CHECK(ratio > 8.0);
    CHECK(ratio < 32.0);
}

TEST_CASE("spectrum table hits the exceptional point") {
    ExperimentConfig cfg;
    cfg.experiment = "spectrum";
    const CurveTable table = run_spectrum(cfg);
    const std::size_t ep = 25;  // omega = gamma on the 51-point grid
    CHECK(std::abs(table.data[1][ep]) < 1e-7);
    CHECK(std::abs(table.data[2][ep]) < 1e-7);
    CHECK(std::abs(table.data[3][ep]) < 1e-7);
    CHECK(std::abs(table.data[4][ep]) < 1e-7);
}

TEST_CASE("fig3 tables: ideal columns shared, effective matches ideal") {
    ExperimentConfig cfg;
    cfg.experiment = "fig3";
    cfg.dt = 1e-2;  // coarse grid is enough for the structural checks here
    const auto tables = run_fig3(cfg);
    REQUIRE(tables.size() == 4);
    for (const auto& table : tables) {
        REQUIRE(table.columns.size() == 7);
        for (std::size_t r = 0; r < table.data[0].size(); ++r) {
            CHECK(std::abs(table.data[1][r] - tables[0].data[1][r]) < 1e-12);
            CHECK(std::abs(table.data[3][r] - table.data[1][r]) < 1e-10);
            CHECK(table.data[1][r] >= -1e-9);
            CHECK(table.data[1][r] <= 1.0 + 1e-9);
        }
    }
    // lambda-model curves approach the effective ones panel by panel
    double previous = 1e9;
    for (const auto& table : tables) {
        double worst = 0.0;
        for (std::size_t r = 0; r < table.data[0].size(); ++r)
            worst = std::max(worst, std::abs(table.data[6][r] - table.data[4][r]));
        CHECK(worst < previous);
        previous = worst;
    }
}

TEST_CASE("fig2 csv output is reproducible across worker counts") {
    ExperimentConfig cfg;
    cfg.experiment = "fig2";
    cfg.dt = 1e-3;
    cfg.total_time = 0.5;
    cfg.n_traj = 12;
    cfg.master_seed = 7;
    cfg.strengths = {0.5};
    cfg.feedbacks = {FeedbackSelector::SigmaY};

    auto render = [&](const char* threads) {
        setenv("PTGAIN_THREADS", threads, 1);
        const auto tables = run_fig2(cfg);
        unsetenv("PTGAIN_THREADS");
        const fs::path path = temp_dir() / (std::string("fig2_threads_") + threads + ".csv");
        emit_csv(tables.at(0), path);
        return read_file(path);
    };
    const std::string serial = render("1");
    const std::string threaded = render("3");
    CHECK(serial == threaded);
    CHECK(!serial.empty());
}

TEST_CASE("svg emission") {
    ExperimentConfig cfg;
    cfg.experiment = "spectrum";
    const CurveTable table = run_spectrum(cfg);
    const fs::path path = temp_dir() / "spectrum.svg";
    emit_svg(table, path);
    const std::string text = read_file(path);
    CHECK(text.find("<svg") != std::string::npos);
    CHECK(text.find("<polyline") != std::string::npos);
}
