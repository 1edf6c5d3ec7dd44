#include "ptgain/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "ptgain/effective.hpp"
#include "ptgain/feedback.hpp"
#include "ptgain/lindblad.hpp"
#include "ptgain/models.hpp"

namespace ptgain {

namespace {

using nlohmann::json;

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

int record_stride_for(int n_steps, int target_points = 1000) {
    return std::max(1, n_steps / target_points);
}

/// RK4 on an arbitrary density-matrix right-hand side, sampling P1 on the
/// same grid the ensemble records.
std::vector<double> integrate_rhs_p1(const Mat& rho0, double dt, int n_steps, int stride,
                                     const std::function<Mat(const Mat&)>& rhs) {
    std::vector<double> p1;
    p1.reserve(n_steps / stride + 1);
    Mat rho = rho0;
    p1.push_back(rho(1, 1).real());
    for (int step = 1; step <= n_steps; ++step) {
        const Mat k1 = rhs(rho);
        const Mat k2 = rhs(rho + 0.5 * dt * k1);
        const Mat k3 = rhs(rho + 0.5 * dt * k2);
        const Mat k4 = rhs(rho + dt * k3);
        rho = hermitize(rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
        if (step % stride == 0) p1.push_back(rho(1, 1).real());
    }
    return p1;
}

double json_number(const json& j, const std::string& key) {
    if (!j.at(key).is_number()) throw ConfigError("config: field '" + key + "' must be a number");
    const double v = j.at(key).get<double>();
    if (!std::isfinite(v)) throw ConfigError("config: field '" + key + "' is not finite");
    return v;
}

}  // namespace

FeedbackSelector parse_feedback_selector(const std::string& name) {
    if (name == "sx") return FeedbackSelector::SigmaX;
    if (name == "sy") return FeedbackSelector::SigmaY;
    if (name == "sz") return FeedbackSelector::SigmaZ;
    if (name == "id") return FeedbackSelector::Identity;
    if (name == "raise-lower") return FeedbackSelector::RaiseLower;
    throw ConfigError("config: unknown feedback selector '" + name +
                      "' (expected sx, sy, sz, id or raise-lower)");
}

std::string feedback_selector_name(FeedbackSelector sel) {
    switch (sel) {
        case FeedbackSelector::SigmaX: return "sx";
        case FeedbackSelector::SigmaY: return "sy";
        case FeedbackSelector::SigmaZ: return "sz";
        case FeedbackSelector::Identity: return "id";
        case FeedbackSelector::RaiseLower: return "raise-lower";
    }
    throw std::logic_error("feedback_selector_name: unreachable");
}

Mat feedback_operator(FeedbackSelector sel, int dim) {
    Mat f = Mat::Zero(dim, dim);
    switch (sel) {
        case FeedbackSelector::SigmaX:
        case FeedbackSelector::RaiseLower:
            // sigma_x and |0><1| + |1><0| coincide on the qubit block
            f(0, 1) = 1.0;
            f(1, 0) = 1.0;
            break;
        case FeedbackSelector::SigmaY:
            f(0, 1) = Complex(0, -1);
            f(1, 0) = Complex(0, 1);
            break;
        case FeedbackSelector::SigmaZ:
            f(0, 0) = 1.0;
            f(1, 1) = -1.0;
            break;
        case FeedbackSelector::Identity:
            f = Mat::Identity(dim, dim);
            break;
    }
    return f;
}

void ExperimentConfig::validate() const {
    if (experiment != "fig2" && experiment != "fig3" && experiment != "spectrum" &&
        experiment != "decay-check")
        throw ConfigError("config: unknown experiment '" + experiment + "'");
    if (dt <= 0.0) throw ConfigError("config: dt must be positive");
    if (total_time < 0.0) throw ConfigError("config: T must be >= 0");
    if (n_traj < 1) throw ConfigError("config: n_traj must be >= 1");
    if (gamma1 < 0.0) throw ConfigError("config: gamma1 must be >= 0");
    if (gamma_10 < 0.0) throw ConfigError("config: gamma10 must be >= 0");
    if (gamma_a <= 0.0) throw ConfigError("config: gamma_a must be positive");
    if (omega_a < 0.0) throw ConfigError("config: omega_a must be >= 0");
    if (feedbacks.empty()) throw ConfigError("config: feedback selector list is empty");
    if (strengths.empty()) throw ConfigError("config: G list is empty");
}

ExperimentConfig parse_config(const std::string& json_text, const std::string& experiment) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");

    ExperimentConfig cfg;
    cfg.experiment = experiment;
    for (const auto& [key, value] : j.items()) {
        if (key == "dt") cfg.dt = json_number(j, key);
        else if (key == "T") cfg.total_time = json_number(j, key);
        else if (key == "n_traj") cfg.n_traj = static_cast<int>(json_number(j, key));
        else if (key == "master_seed") cfg.master_seed = value.get<std::uint64_t>();
        else if (key == "gamma1") cfg.gamma1 = json_number(j, key);
        else if (key == "gamma10") cfg.gamma_10 = json_number(j, key);
        else if (key == "omega_a") cfg.omega_a = json_number(j, key);
        else if (key == "gamma_a") cfg.gamma_a = json_number(j, key);
        else if (key == "delta_a") cfg.delta_a = json_number(j, key);
        else if (key == "omega_sys") cfg.omega_sys = json_number(j, key);
        else if (key == "G") {
            cfg.strengths.clear();
            if (value.is_array())
                for (const auto& g : value) cfg.strengths.push_back(g.get<double>());
            else
                cfg.strengths.push_back(value.get<double>());
        } else if (key == "F") {
            cfg.feedbacks.clear();
            if (value.is_array())
                for (const auto& f : value)
                    cfg.feedbacks.push_back(parse_feedback_selector(f.get<std::string>()));
            else
                cfg.feedbacks.push_back(parse_feedback_selector(value.get<std::string>()));
        } else if (key == "out_dir") cfg.out_dir = value.get<std::string>();
        else throw ConfigError("config: unknown key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, const std::string& experiment) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), experiment);
}

void CurveTable::validate() const {
    if (columns.size() != data.size())
        throw std::runtime_error("CurveTable: column name/data count mismatch");
    for (std::size_t c = 0; c < data.size(); ++c) {
        if (data[c].size() != data[0].size())
            throw std::runtime_error("CurveTable: ragged columns in " + name);
        for (double v : data[c])
            if (!std::isfinite(v))
                throw std::runtime_error("CurveTable: non-finite value in column " + columns[c]);
    }
}

std::vector<CurveTable> run_fig2(const ExperimentConfig& config) {
    config.validate();
    const double total_time = config.total_time > 0.0 ? config.total_time : 5.0;
    const int n_steps = static_cast<int>(std::llround(total_time / config.dt));
    const int stride = record_stride_for(n_steps);

    Mat rho0 = Mat::Zero(2, 2);
    rho0(1, 1) = 1.0;
    Mat monitored = Mat::Zero(2, 2);
    monitored(0, 1) = 1.0;  // L = |0><1|
    const Mat h_sys = Mat::Zero(2, 2);

    std::vector<CurveTable> tables;
    for (FeedbackSelector sel : config.feedbacks) {
        CurveTable table;
        table.name = "fig2_" + feedback_selector_name(sel);
        const Mat f = feedback_operator(sel);

        bool have_time = false;
        for (double g : config.strengths) {
            FeedbackConfig fb{config.gamma1, monitored, f, g};
            EnsembleResult ens = ensemble_average(fb, h_sys, rho0, config.dt, total_time,
                                                  config.n_traj, config.master_seed, stride);
            if (!have_time) {
                table.columns.push_back("t");
                table.data.push_back(ens.times);
                have_time = true;
            }
            const std::string tag = "_G" + format_label(g);
            std::vector<double> mean(ens.times.size()), err(ens.times.size());
            for (std::size_t r = 0; r < ens.times.size(); ++r) {
                mean[r] = ens.mean[r][1];
                err[r] = ens.stderr_[r][1];
            }
            table.columns.push_back("P1_sme_mean" + tag);
            table.data.push_back(std::move(mean));
            table.columns.push_back("P1_sme_stderr" + tag);
            table.data.push_back(std::move(err));
            table.columns.push_back("P1_unconditional" + tag);
            table.data.push_back(integrate_rhs_p1(
                rho0, config.dt, n_steps, stride,
                [&](const Mat& rho) { return unconditional_feedback_rhs(rho, fb, h_sys); }));
        }
        table.validate();
        tables.push_back(std::move(table));
    }
    return tables;
}

std::vector<CurveTable> run_fig3(const ExperimentConfig& config) {
    config.validate();
    const double total_time = config.total_time > 0.0 ? config.total_time : 20.0;
    static const std::vector<std::pair<double, double>> panels = {
        {0.5, 2.5}, {1.0, 10.0}, {1.5, 22.5}, {2.0, 40.0}};
    static const char* panel_names[] = {"a", "b", "c", "d"};

    const Mat h_sys = config.omega_sys * sigma_x();
    Mat rho0_2 = Mat::Zero(2, 2);
    rho0_2(0, 0) = rho0_2(1, 1) = 0.5;
    Mat rho0_3 = Mat::Zero(3, 3);
    rho0_3(0, 0) = rho0_3(1, 1) = 0.5;

    std::vector<CurveTable> tables;
    for (std::size_t panel = 0; panel < panels.size(); ++panel) {
        LambdaParams p{panels[panel].first, 0.0, panels[panel].second, config.gamma_10};
        const double g_eff = gamma_eff(p);
        const double strength = feedback_gain_for_balance(g_eff, p.gamma_10);

        const Mat h_ideal = ideal_pt_hamiltonian(p.gamma_10, h_sys);
        const Mat h_eff = effective_feedback_hamiltonian(p, strength, default_feedback_operator(2), h_sys);
        const Mat h_orig = original_lambda_hamiltonian(p, strength, default_feedback_operator(3), h_sys);

        auto ideal = integrate_nonhermitian({h_ideal, std::nullopt}, rho0_2, config.dt, total_time);
        auto eff = integrate_nonhermitian({h_eff, std::nullopt}, rho0_2, config.dt, total_time);
        auto orig = integrate_nonhermitian({h_orig, std::nullopt}, rho0_3, config.dt, total_time);

        const int n_steps = static_cast<int>(ideal.times.size()) - 1;
        const int stride = record_stride_for(n_steps);
        CurveTable table;
        table.name = std::string("fig3_") + panel_names[panel];
        table.columns = {"t", "P0_ideal", "P1_ideal", "P0_eff", "P1_eff", "P0_orig", "P1_orig"};
        table.data.assign(7, {});
        for (int r = 0; r <= n_steps; r += stride) {
            table.data[0].push_back(ideal.times[r]);
            const auto pi = populations(renormalize(ideal.states[r]));
            const auto pe = populations(renormalize(eff.states[r]));
            const auto po = populations(renormalize(orig.states[r]));
            table.data[1].push_back(pi[0]);
            table.data[2].push_back(pi[1]);
            table.data[3].push_back(pe[0]);
            table.data[4].push_back(pe[1]);
            table.data[5].push_back(po[0]);
            table.data[6].push_back(po[1]);
        }
        table.validate();
        tables.push_back(std::move(table));
    }
    return tables;
}

CurveTable run_spectrum(const ExperimentConfig& config) {
    config.validate();
    const double gamma = 0.5 * config.gamma_10;
    CurveTable table;
    table.name = "spectrum";
    table.columns = {"omega_sys", "re_lower", "im_lower", "re_upper", "im_upper"};
    table.data.assign(5, {});
    // 51 points on [0, 2*gamma]; index 25 sits exactly on the EP
    for (int i = 0; i <= 50; ++i) {
        const double omega = gamma * i / 25.0;
        const PTSpectrum s = pt_spectrum({omega, gamma});
        table.data[0].push_back(omega);
        table.data[1].push_back(s.lower.real());
        table.data[2].push_back(s.lower.imag());
        table.data[3].push_back(s.upper.real());
        table.data[4].push_back(s.upper.imag());
    }
    table.validate();
    return table;
}

CurveTable run_decay_check(const ExperimentConfig& config) {
    config.validate();
    const double total_time = config.total_time > 0.0 ? config.total_time : 5.0;
    Mat monitored = Mat::Zero(2, 2);
    monitored(0, 1) = 1.0;
    Mat rho0 = Mat::Zero(2, 2);
    rho0(1, 1) = 1.0;
    LindbladModel model{Mat::Zero(2, 2), {{config.gamma1, monitored}}};
    const auto result = integrate_master(model, rho0, config.dt, total_time);

    CurveTable table;
    table.name = "decay_check";
    table.columns = {"t", "P1_numeric", "P1_exact", "abs_error"};
    table.data.assign(4, {});
    for (std::size_t r = 0; r < result.times.size(); ++r) {
        const double exact = std::exp(-config.gamma1 * result.times[r]);
        const double numeric = result.states[r](1, 1).real();
        table.data[0].push_back(result.times[r]);
        table.data[1].push_back(numeric);
        table.data[2].push_back(exact);
        table.data[3].push_back(std::abs(numeric - exact));
    }
    table.validate();
    return table;
}

std::vector<CurveTable> run_experiment(const ExperimentConfig& config) {
    if (config.experiment == "fig2") return run_fig2(config);
    if (config.experiment == "fig3") return run_fig3(config);
    if (config.experiment == "spectrum") return {run_spectrum(config)};
    if (config.experiment == "decay-check") return {run_decay_check(config)};
    throw ConfigError("run_experiment: unknown experiment '" + config.experiment + "'");
}

void emit_csv(const CurveTable& table, const std::filesystem::path& path) {
    table.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_csv: cannot open " + path.string());
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out << (c ? "," : "") << table.columns[c];
    out << "\n";
    const std::size_t rows = table.data.empty() ? 0 : table.data[0].size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < table.data.size(); ++c)
            out << (c ? "," : "") << format_value(table.data[c][r]);
        out << "\n";
    }
    if (!out) throw std::runtime_error("emit_csv: write failed for " + path.string());
}

CurveTable parse_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("parse_csv: cannot open " + path.string());
    CurveTable table;
    table.name = path.stem().string();
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("parse_csv: empty file " + path.string());
    std::stringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) table.columns.push_back(cell);
    table.data.assign(table.columns.size(), {});
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (!std::getline(row, cell, ','))
                throw std::runtime_error("parse_csv: short row in " + path.string());
            table.data[c].push_back(std::stod(cell));
        }
    }
    table.validate();
    return table;
}

void emit_svg(const CurveTable& table, const std::filesystem::path& path) {
    table.validate();
    const int width = 800, height = 480, margin = 60;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_svg: cannot open " + path.string());

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\">\n";
    if (table.data.size() < 2 || table.data[0].empty()) {
        out << "</svg>\n";
        return;
    }

    const auto& x = table.data[0];
    double xmin = x.front(), xmax = x.back();
    double ymin = table.data[1][0], ymax = ymin;
    for (std::size_t c = 1; c < table.data.size(); ++c)
        for (double v : table.data[c]) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;

    auto px = [&](double v) { return margin + (v - xmin) / (xmax - xmin) * (width - 2 * margin); };
    auto py = [&](double v) { return height - margin - (v - ymin) / (ymax - ymin) * (height - 2 * margin); };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << width - 2 * margin
        << "\" height=\"" << height - 2 * margin << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (std::size_t c = 1; c < table.data.size(); ++c) {
        out << "<polyline fill=\"none\" stroke=\"" << colors[(c - 1) % 8] << "\" points=\"";
        for (std::size_t r = 0; r < x.size(); ++r)
            out << px(x[r]) << "," << py(table.data[c][r]) << " ";
        out << "\"/>\n";
        out << "<text x=\"" << width - margin + 4 << "\" y=\"" << margin + 14 * c << "\" font-size=\"10\" fill=\""
            << colors[(c - 1) % 8] << "\">" << table.columns[c] << "</text>\n";
    }
    out << "<text x=\"" << margin << "\" y=\"" << height - margin / 3 << "\" font-size=\"12\">"
        << table.columns[0] << " in [" << format_label(xmin) << ", " << format_label(xmax)
        << "]</text>\n";
    out << "<text x=\"4\" y=\"" << margin / 2 << "\" font-size=\"12\">y in [" << format_label(ymin)
        << ", " << format_label(ymax) << "]</text>\n";
    out << "</svg>\n";
    if (!out) throw std::runtime_error("emit_svg: write failed for " + path.string());
}

void emit_all(const std::vector<CurveTable>& tables, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    for (const auto& table : tables) {
        emit_csv(table, out_dir / (table.name + ".csv"));
        emit_svg(table, out_dir / (table.name + ".svg"));
    }
}

}  // namespace ptgain
