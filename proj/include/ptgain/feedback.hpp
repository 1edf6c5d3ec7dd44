#pragma once

#include <cstdint>
#include <vector>

#include "ptgain/algebra.hpp"
#include "ptgain/lindblad.hpp"

namespace ptgain {

/// Homodyne monitoring of channel (gamma1, L) with instantaneous feedback
/// exp(-i G F dy) applied after every measurement step.
struct FeedbackConfig {
    double gamma1 = 0.0;
    Mat monitored;  // L
    Mat feedback;   // F, Hermitian
    double strength = 0.0;  // G

    void validate() const;
};

/// Deterministic per-trajectory Gaussian stream. The state is seeded by
/// splitmix64-mixing (master_seed, trajectory_index); normals come from
/// Box-Muller on consecutive splitmix64 uniforms. Two streams built from
/// the same pair reproduce the same sequence bit for bit, so ensemble
/// results do not depend on how trajectories are scheduled.
class NoiseStream {
public:
    NoiseStream(std::uint64_t master_seed, std::uint64_t trajectory_index);

    double gaussian();
    /// N(0, dt) Wiener increment.
    double wiener_increment(double dt);

private:
    std::uint64_t next_u64();
    double next_uniform();  // in (0, 1]

    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

struct EnsembleResult {
    std::vector<double> times;
    // mean[t][level], stderr[t][level]; standard error = sample std / sqrt(N)
    std::vector<std::vector<double>> mean;
    std::vector<std::vector<double>> stderr_;
    int n_traj = 0;
};

/// I(t)dt = sqrt(gamma1) <F>_c dt + dW.
double photocurrent_increment(const Mat& rho_c, const FeedbackConfig& cfg, double dw, double dt);

/// One Euler-Maruyama step of the conditional SME without feedback;
/// output is re-Hermitized and renormalized.
Mat sme_step(const Mat& rho_c, const FeedbackConfig& cfg, const Mat& h_sys, double dw, double dt);

/// sme_step followed by exact conjugation with exp(-i G F dy),
/// dy = sqrt(gamma1) <F>_c dt + dW evaluated on the pre-step state.
Mat feedback_step(const Mat& rho_c, const FeedbackConfig& cfg, const Mat& h_sys, double dw, double dt);

/// Iterate feedback_step on a uniform grid, recording every
/// `record_stride` steps (grid point 0 is always recorded).
EvolutionResult run_trajectory(const FeedbackConfig& cfg, const Mat& h_sys, const Mat& rho0, double dt,
                               double total_time, NoiseStream& stream, int record_stride = 1);

/// Average N_traj trajectories, trajectory k driven by
/// NoiseStream(master_seed, k). The reduction is done in trajectory-index
/// order, so the result is a pure function of the arguments regardless of
/// the worker count (PTGAIN_THREADS caps parallelism).
EnsembleResult ensemble_average(const FeedbackConfig& cfg, const Mat& h_sys, const Mat& rho0, double dt,
                                double total_time, int n_traj, std::uint64_t master_seed,
                                int record_stride = 1);

/// Right-hand side of the unconditional feedback master equation:
/// -i[H,rho] + gamma1 D[L]rho - i G sqrt(gamma1) [F, L rho + rho L^dag] + G^2 D[F]rho.
Mat unconditional_feedback_rhs(const Mat& rho, const FeedbackConfig& cfg, const Mat& h_sys);

/// Effective collapse operator c~ = sqrt(gamma1) L - i G F; the three
/// feedback dissipation terms above collapse to the single term D[c~].
Mat effective_collapse(const FeedbackConfig& cfg);

int ensemble_worker_count();

}  // namespace ptgain
