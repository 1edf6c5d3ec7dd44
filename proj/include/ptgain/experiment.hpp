#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ptgain/algebra.hpp"

namespace ptgain {

/// Raised on configuration problems (CLI maps it to exit code 1).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class FeedbackSelector { SigmaX, SigmaY, SigmaZ, Identity, RaiseLower };

FeedbackSelector parse_feedback_selector(const std::string& name);
std::string feedback_selector_name(FeedbackSelector sel);
Mat feedback_operator(FeedbackSelector sel, int dim = 2);

struct ExperimentConfig {
    std::string experiment;  // fig2 | fig3 | spectrum | decay-check
    double dt = 1e-3;
    double total_time = 0.0;  // 0 = per-experiment default
    int n_traj = 1000;
    std::uint64_t master_seed = 1;
    double gamma1 = 1.0;
    double gamma_10 = 0.1;
    double omega_a = 0.5;
    double gamma_a = 2.5;
    double delta_a = 0.0;
    double omega_sys = 0.1;
    std::vector<double> strengths = {0.0, 0.3, 0.6, 1.0};  // fig2 G grid
    std::vector<FeedbackSelector> feedbacks = {FeedbackSelector::SigmaX, FeedbackSelector::SigmaY,
                                               FeedbackSelector::SigmaZ, FeedbackSelector::Identity};
    std::string out_dir = ".";

    void validate() const;
};

/// Strict JSON parse: unknown keys are rejected so a typo in a physics
/// parameter cannot silently fall back to a default.
ExperimentConfig load_config(const std::filesystem::path& path, const std::string& experiment);
ExperimentConfig parse_config(const std::string& json_text, const std::string& experiment);

struct CurveTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> data;  // data[c] pairs with columns[c]

    void validate() const;
};

std::vector<CurveTable> run_fig2(const ExperimentConfig& config);
std::vector<CurveTable> run_fig3(const ExperimentConfig& config);
CurveTable run_spectrum(const ExperimentConfig& config);
CurveTable run_decay_check(const ExperimentConfig& config);

std::vector<CurveTable> run_experiment(const ExperimentConfig& config);

void emit_csv(const CurveTable& table, const std::filesystem::path& path);
CurveTable parse_csv(const std::filesystem::path& path);
void emit_svg(const CurveTable& table, const std::filesystem::path& path);

/// Write each table as <out_dir>/<name>.csv and <out_dir>/<name>.svg.
void emit_all(const std::vector<CurveTable>& tables, const std::filesystem::path& out_dir);

}  // namespace ptgain
