#pragma once

#include <optional>
#include <vector>

#include "ptgain/algebra.hpp"

namespace ptgain {

struct Channel {
    double rate;  // gamma_k >= 0, units 1/time
    Mat op;       // jump operator L_k
};

struct LindbladModel {
    Mat hamiltonian;
    std::vector<Channel> channels;

    void validate() const;
};

/// Non-Hermitian flow drho/dt = -i(H rho - rho H^dag) [+ jump recycling
/// term c rho c^dag when `jump` is set]. Trace is not preserved.
struct NonHermitianModel {
    Mat hamiltonian;
    std::optional<Mat> jump;
};

struct EvolutionResult {
    double dt = 0.0;
    std::vector<double> times;
    std::vector<Mat> states;
    std::vector<double> traces;  // raw norm track, recorded before any renormalization
};

/// D[A]rho = A rho A^dag - 1/2 {A^dag A, rho}.
Mat dissipator(const Mat& a, const Mat& rho);

/// -i[H, rho] + sum_k gamma_k D[L_k] rho.
Mat liouvillian_apply(const LindbladModel& model, const Mat& rho);

/// Fixed-step RK4 on the Lindblad master equation. States are
/// re-Hermitized each step; positivity is monitored by tests, not
/// projected. T < dt returns only rho0.
EvolutionResult integrate_master(const LindbladModel& model, const Mat& rho0, double dt, double total_time);

/// Fixed-step RK4 on the non-Hermitian flow. Aborts with an error if the
/// trace exceeds 1e6 (gain blow-up).
EvolutionResult integrate_nonhermitian(const NonHermitianModel& model, const Mat& rho0, double dt,
                                       double total_time);

/// rho / Tr(rho); throws when the trace has vanished.
Mat renormalize(const Mat& rho);

/// Real diagonal of rho.
std::vector<double> populations(const Mat& rho);

}  // namespace ptgain
