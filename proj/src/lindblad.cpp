#include "ptgain/lindblad.hpp"

#include <cmath>
#include <string>

namespace ptgain {

namespace {

bool all_finite(const Mat& m) { return m.allFinite(); }

int step_count(double dt, double total_time) {
    if (dt <= 0.0) throw std::invalid_argument("integrate: dt must be positive");
    if (total_time < dt) return 0;
    return static_cast<int>(std::llround(total_time / dt));
}

template <typename Rhs>
EvolutionResult integrate_rk4(const Mat& rho0, double dt, double total_time, Rhs&& rhs,
                              double trace_limit) {
    const int n_steps = step_count(dt, total_time);
    EvolutionResult result;
    result.dt = dt;
    result.times.reserve(n_steps + 1);
    result.states.reserve(n_steps + 1);
    result.traces.reserve(n_steps + 1);

    Mat rho = hermitize(rho0);
    result.times.push_back(0.0);
    result.states.push_back(rho);
    result.traces.push_back(rho.trace().real());

    for (int step = 1; step <= n_steps; ++step) {
        const Mat k1 = rhs(rho);
        const Mat k2 = rhs(rho + 0.5 * dt * k1);
        const Mat k3 = rhs(rho + 0.5 * dt * k2);
        const Mat k4 = rhs(rho + dt * k3);
        rho = hermitize(rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
        if (!all_finite(rho))
            throw std::runtime_error("integrate: non-finite state at step " + std::to_string(step));
        const double trace = rho.trace().real();
        if (trace_limit > 0.0 && trace > trace_limit)
            throw std::runtime_error("integrate: gain blow-up, trace " + std::to_string(trace) +
                                     " at step " + std::to_string(step));
        result.times.push_back(step * dt);
        result.states.push_back(rho);
        result.traces.push_back(trace);
    }
    return result;
}

}  // namespace

void LindbladModel::validate() const {
    for (const auto& ch : channels) {
        if (ch.rate < 0.0) throw std::invalid_argument("LindbladModel: negative channel rate");
        require_same_dim(hamiltonian, ch.op, "LindbladModel channel");
    }
}

Mat dissipator(const Mat& a, const Mat& rho) {
    require_same_dim(a, rho, "dissipator");
    const Mat adag_a = a.adjoint() * a;
    return a * rho * a.adjoint() - 0.5 * (adag_a * rho + rho * adag_a);
}

Mat liouvillian_apply(const LindbladModel& model, const Mat& rho) {
    require_same_dim(model.hamiltonian, rho, "liouvillian_apply");
    Mat out = -I_UNIT * commutator(model.hamiltonian, rho);
    for (const auto& ch : model.channels) out += ch.rate * dissipator(ch.op, rho);
    return out;
}

EvolutionResult integrate_master(const LindbladModel& model, const Mat& rho0, double dt,
                                 double total_time) {
    model.validate();
    require_same_dim(model.hamiltonian, rho0, "integrate_master");
    return integrate_rk4(
        rho0, dt, total_time, [&](const Mat& rho) { return liouvillian_apply(model, rho); },
        /*trace_limit=*/0.0);
}

EvolutionResult integrate_nonhermitian(const NonHermitianModel& model, const Mat& rho0, double dt,
                                       double total_time) {
    require_same_dim(model.hamiltonian, rho0, "integrate_nonhermitian");
    const Mat& h = model.hamiltonian;
    if (model.jump) require_same_dim(h, *model.jump, "integrate_nonhermitian jump");
    return integrate_rk4(
        rho0, dt, total_time,
        [&](const Mat& rho) {
            Mat out = -I_UNIT * (h * rho - rho * h.adjoint());
            if (model.jump) out += (*model.jump) * rho * model.jump->adjoint();
            return out;
        },
        /*trace_limit=*/1e6);
}

Mat renormalize(const Mat& rho) {
    const double trace = rho.trace().real();
    if (std::abs(trace) <= 1e-12) throw std::runtime_error("renormalize: vanishing trace");
    return rho / trace;
}

std::vector<double> populations(const Mat& rho) {
    std::vector<double> p(rho.rows());
    for (Eigen::Index i = 0; i < rho.rows(); ++i) p[i] = rho(i, i).real();
    return p;
}

}  // namespace ptgain
