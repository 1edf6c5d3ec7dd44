#include "ptgain/feedback.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>

#include "ptgain/detail/sme_kernel.hpp"

namespace ptgain {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

int checked_steps(double dt, double total_time) {
    if (dt <= 0.0) throw std::invalid_argument("run_trajectory: dt must be positive");
    if (total_time < dt) return 0;
    return static_cast<int>(std::llround(total_time / dt));
}

template <typename MatT, typename Recorder>
void run_steps(const detail::SmeKernel<MatT>& kernel, MatT rho, double dt, int n_steps,
               NoiseStream& stream, int record_stride, Recorder&& record) {
    record(0, rho);
    for (int step = 1; step <= n_steps; ++step) {
        const double dw = stream.wiener_increment(dt);
        kernel.step(rho, dw, dt);
        if (step % record_stride == 0) record(step, rho);
    }
}

}  // namespace

void FeedbackConfig::validate() const {
    if (gamma1 < 0.0) throw std::invalid_argument("FeedbackConfig: gamma1 must be >= 0");
    require_same_dim(monitored, feedback, "FeedbackConfig");
    if (!is_hermitian(feedback, 1e-12))
        throw std::invalid_argument("FeedbackConfig: feedback operator must be Hermitian");
}

NoiseStream::NoiseStream(std::uint64_t master_seed, std::uint64_t trajectory_index) {
    // decorrelate (seed, index) pairs before streaming
    std::uint64_t mix = master_seed;
    splitmix64(mix);
    mix ^= 0x9e3779b97f4a7c15ULL * (trajectory_index + 1);
    state_ = splitmix64(mix);
}

std::uint64_t NoiseStream::next_u64() { return splitmix64(state_); }

double NoiseStream::next_uniform() {
    // 53-bit mantissa, shifted into (0, 1]
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double NoiseStream::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

double NoiseStream::wiener_increment(double dt) {
    if (dt <= 0.0) throw std::invalid_argument("wiener_increment: dt must be positive");
    return std::sqrt(dt) * gaussian();
}

double photocurrent_increment(const Mat& rho_c, const FeedbackConfig& cfg, double dw, double dt) {
    return std::sqrt(cfg.gamma1) * expectation(cfg.feedback, rho_c).real() * dt + dw;
}

Mat sme_step(const Mat& rho_c, const FeedbackConfig& cfg, const Mat& h_sys, double dw, double dt) {
    cfg.validate();
    detail::SmeKernel<Mat> kernel(cfg, h_sys, /*apply_feedback=*/false);
    Mat rho = rho_c;
    kernel.step(rho, dw, dt);
    return rho;
}

Mat feedback_step(const Mat& rho_c, const FeedbackConfig& cfg, const Mat& h_sys, double dw, double dt) {
    cfg.validate();
    detail::SmeKernel<Mat> kernel(cfg, h_sys, /*apply_feedback=*/true);
    Mat rho = rho_c;
    kernel.step(rho, dw, dt);
    return rho;
}

EvolutionResult run_trajectory(const FeedbackConfig& cfg, const Mat& h_sys, const Mat& rho0, double dt,
                               double total_time, NoiseStream& stream, int record_stride) {
    cfg.validate();
    require_same_dim(cfg.monitored, rho0, "run_trajectory");
    if (record_stride < 1) throw std::invalid_argument("run_trajectory: record_stride must be >= 1");
    const int n_steps = checked_steps(dt, total_time);

    EvolutionResult result;
    result.dt = dt;
    auto record = [&](int step, const auto& rho) {
        result.times.push_back(step * dt);
        result.states.push_back(Mat(rho));
        result.traces.push_back(rho.trace().real());
    };

    if (rho0.rows() == 2) {
        detail::SmeKernel<Eigen::Matrix2cd> kernel(cfg, h_sys, true);
        run_steps<Eigen::Matrix2cd>(kernel, Eigen::Matrix2cd(rho0), dt, n_steps, stream, record_stride,
                                    record);
    } else if (rho0.rows() == 3) {
        detail::SmeKernel<Eigen::Matrix3cd> kernel(cfg, h_sys, true);
        run_steps<Eigen::Matrix3cd>(kernel, Eigen::Matrix3cd(rho0), dt, n_steps, stream, record_stride,
                                    record);
    } else {
        detail::SmeKernel<Mat> kernel(cfg, h_sys, true);
        run_steps<Mat>(kernel, rho0, dt, n_steps, stream, record_stride, record);
    }
    return result;
}

int ensemble_worker_count() {
    if (const char* env = std::getenv("PTGAIN_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) return cap;
    }
    int workers = static_cast<int>(std::thread::hardware_concurrency());
    return workers < 1 ? 1 : workers;
}

EnsembleResult ensemble_average(const FeedbackConfig& cfg, const Mat& h_sys, const Mat& rho0, double dt,
                                double total_time, int n_traj, std::uint64_t master_seed,
                                int record_stride) {
    cfg.validate();
    require_same_dim(cfg.monitored, rho0, "ensemble_average");
    if (n_traj < 1) throw std::invalid_argument("ensemble_average: n_traj must be >= 1");
    if (record_stride < 1) throw std::invalid_argument("ensemble_average: record_stride must be >= 1");

    const int n_steps = checked_steps(dt, total_time);
    const int n_rec = n_steps / record_stride + 1;
    const int dim = static_cast<int>(rho0.rows());

    // every trajectory writes its own slice; the reduction below walks the
    // slices in index order, so the result is independent of scheduling
    std::vector<double> records(static_cast<std::size_t>(n_traj) * n_rec * dim);

    auto run_one = [&](int traj) {
        NoiseStream stream(master_seed, static_cast<std::uint64_t>(traj));
        double* slice = records.data() + static_cast<std::size_t>(traj) * n_rec * dim;
        auto record = [&](int step, const auto& rho) {
            double* row = slice + static_cast<std::size_t>(step / record_stride) * dim;
            for (int i = 0; i < dim; ++i) row[i] = rho(i, i).real();
        };
        if (dim == 2) {
            detail::SmeKernel<Eigen::Matrix2cd> kernel(cfg, h_sys, true);
            run_steps<Eigen::Matrix2cd>(kernel, Eigen::Matrix2cd(rho0), dt, n_steps, stream,
                                        record_stride, record);
        } else if (dim == 3) {
            detail::SmeKernel<Eigen::Matrix3cd> kernel(cfg, h_sys, true);
            run_steps<Eigen::Matrix3cd>(kernel, Eigen::Matrix3cd(rho0), dt, n_steps, stream,
                                        record_stride, record);
        } else {
            detail::SmeKernel<Mat> kernel(cfg, h_sys, true);
            run_steps<Mat>(kernel, rho0, dt, n_steps, stream, record_stride, record);
        }
    };

    const int workers = std::min(ensemble_worker_count(), n_traj);
    if (workers == 1) {
        for (int traj = 0; traj < n_traj; ++traj) {
            try {
                run_one(traj);
            } catch (const std::exception& e) {
                throw std::runtime_error("ensemble_average: trajectory " + std::to_string(traj) +
                                         " failed: " + e.what());
            }
        }
    } else {
        std::atomic<int> next{0};
        std::mutex error_mutex;
        std::string first_error;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int traj = next.fetch_add(1); traj < n_traj; traj = next.fetch_add(1)) {
                    try {
                        run_one(traj);
                    } catch (const std::exception& e) {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (first_error.empty())
                            first_error = "ensemble_average: trajectory " + std::to_string(traj) +
                                          " failed: " + e.what();
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        if (!first_error.empty()) throw std::runtime_error(first_error);
    }

    EnsembleResult result;
    result.n_traj = n_traj;
    result.times.resize(n_rec);
    for (int r = 0; r < n_rec; ++r) result.times[r] = r * record_stride * dt;
    result.mean.assign(n_rec, std::vector<double>(dim, 0.0));
    result.stderr_.assign(n_rec, std::vector<double>(dim, 0.0));

    std::vector<std::vector<double>> sum_sq(n_rec, std::vector<double>(dim, 0.0));
    for (int traj = 0; traj < n_traj; ++traj) {
        const double* slice = records.data() + static_cast<std::size_t>(traj) * n_rec * dim;
        for (int r = 0; r < n_rec; ++r)
            for (int i = 0; i < dim; ++i) {
                const double p = slice[static_cast<std::size_t>(r) * dim + i];
                result.mean[r][i] += p;
                sum_sq[r][i] += p * p;
            }
    }
    for (int r = 0; r < n_rec; ++r)
        for (int i = 0; i < dim; ++i) {
            const double mean = result.mean[r][i] / n_traj;
            result.mean[r][i] = mean;
            if (n_traj > 1) {
                const double var = std::max(0.0, (sum_sq[r][i] - n_traj * mean * mean) / (n_traj - 1));
                result.stderr_[r][i] = std::sqrt(var / n_traj);
            }
        }
    return result;
}

Mat unconditional_feedback_rhs(const Mat& rho, const FeedbackConfig& cfg, const Mat& h_sys) {
    cfg.validate();
    require_same_dim(rho, cfg.monitored, "unconditional_feedback_rhs");
    const Mat& l = cfg.monitored;
    const Mat& f = cfg.feedback;
    const double sqrt_g1 = std::sqrt(cfg.gamma1);
    Mat out = -I_UNIT * commutator(h_sys, rho);
    out += cfg.gamma1 * dissipator(l, rho);
    out += -I_UNIT * cfg.strength * sqrt_g1 * commutator(f, l * rho + rho * l.adjoint());
    out += cfg.strength * cfg.strength * dissipator(f, rho);
    return out;
}

Mat effective_collapse(const FeedbackConfig& cfg) {
    if (!is_hermitian(cfg.feedback, 1e-12))
        throw std::invalid_argument("effective_collapse: feedback operator must be Hermitian");
    return std::sqrt(cfg.gamma1) * cfg.monitored - I_UNIT * cfg.strength * cfg.feedback;
}

}  // namespace ptgain
