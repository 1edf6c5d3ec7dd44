#pragma once

#include "ptgain/algebra.hpp"
#include "ptgain/feedback.hpp"

namespace ptgain {

/// Lambda-system parameters: |0> <-> |a> driven at Rabi frequency omega_a
/// with detuning delta_a, |a> decays to |1> at gamma_a, |1> decays to |0>
/// at gamma_10. All angular-frequency units.
struct LambdaParams {
    double omega_a = 0.0;
    double delta_a = 0.0;
    double gamma_a = 0.0;
    double gamma_10 = 0.0;

    void validate() const;
};

/// Balanced gain/loss qubit: H = omega_sys sigma_x + i gamma (|0><0| - |1><1|).
struct PTParams {
    double omega_sys = 0.0;
    double gamma = 0.0;
};

enum class PTPhase { Unbroken, ExceptionalPoint, Broken };

struct PTSpectrum {
    Complex lower;
    Complex upper;
    PTPhase phase;
};

/// gamma_eff = omega_a^2 / gamma_a.
double gamma_eff(const LambdaParams& p);

/// Feedback strength solving G sqrt(gamma_eff) - gamma_eff/2 = gamma_10/2.
double feedback_gain_for_balance(double gamma_eff_rate, double gamma_10);

/// Default feedback operator |0><1| + |1><0| (= sigma_x on the qubit).
Mat default_feedback_operator(int dim = 2);

/// Effective jump i sqrt(gamma_eff) |1><0|, embedded in `dim` levels.
Mat effective_lambda_jump(const LambdaParams& p, int dim = 2);

/// Non-Hermitian Hamiltonian for feedback on a natural decay channel:
/// H_sys - i gamma1/2 L^dag L - G sqrt(gamma1)/2 (L^dag F - F L).
Mat natural_feedback_hamiltonian(const FeedbackConfig& cfg, const Mat& h_sys);

/// Magnitude of the |0><0| coefficient generated by the feedback terms
/// above when monitoring L = |0><1|. Vanishes for every Hermitian F and
/// every G: natural decay cannot produce ground-state gain.
double no_ground_gain_witness(const FeedbackConfig& cfg);

/// Qubit Hamiltonian after eliminating |a>, feedback acting on the
/// effective decay (delta_a = 0):
/// H_sys - i gamma_10/2 |1><1| - i/2 L_eff^dag L_eff - G/2 (L_eff^dag F - F L_eff).
Mat effective_feedback_hamiltonian(const LambdaParams& p, double strength, const Mat& feedback,
                                   const Mat& h_sys);

/// H_sys - i gamma_10/2 |1><1| + i gamma_10/2 |0><0|.
Mat ideal_pt_hamiltonian(double gamma_10, const Mat& h_sys);

/// Full three-level non-Hermitian Hamiltonian with |a> kept explicit; the
/// feedback term is built from the effective jump, the same operator the
/// reduced model uses, so the two agree as omega_a/gamma_a -> 0.
Mat original_lambda_hamiltonian(const LambdaParams& p, double strength, const Mat& feedback,
                                const Mat& h_sys);

/// Eigenvalues +-sqrt(omega_sys^2 - gamma^2) with the phase classified by
/// coalescence.
PTSpectrum pt_spectrum(const PTParams& p);

/// The matrix whose spectrum pt_spectrum reports.
Mat pt_hamiltonian(const PTParams& p);

}  // namespace ptgain
