#include "ptgain/models.hpp"

#include <cmath>

namespace ptgain {

namespace {

Mat level_projector(int dim, int level) {
    Mat p = Mat::Zero(dim, dim);
    p(level, level) = 1.0;
    return p;
}

}  // namespace

void LambdaParams::validate() const {
    if (gamma_a <= 0.0) throw std::invalid_argument("LambdaParams: gamma_a must be positive");
    if (gamma_10 < 0.0) throw std::invalid_argument("LambdaParams: gamma_10 must be >= 0");
    if (omega_a < 0.0) throw std::invalid_argument("LambdaParams: omega_a must be >= 0");
}

double gamma_eff(const LambdaParams& p) {
    p.validate();
    return p.omega_a * p.omega_a / p.gamma_a;
}

double feedback_gain_for_balance(double gamma_eff_rate, double gamma_10) {
    if (gamma_eff_rate <= 0.0)
        throw std::invalid_argument("feedback_gain_for_balance: gamma_eff must be positive");
    return (gamma_10 + gamma_eff_rate) / (2.0 * std::sqrt(gamma_eff_rate));
}

Mat default_feedback_operator(int dim) {
    Mat f = Mat::Zero(dim, dim);
    f(0, 1) = 1.0;
    f(1, 0) = 1.0;
    return f;
}

Mat effective_lambda_jump(const LambdaParams& p, int dim) {
    Mat jump = Mat::Zero(dim, dim);
    jump(1, 0) = I_UNIT * std::sqrt(gamma_eff(p));
    return jump;
}

Mat natural_feedback_hamiltonian(const FeedbackConfig& cfg, const Mat& h_sys) {
    cfg.validate();
    const Mat& l = cfg.monitored;
    const Mat& f = cfg.feedback;
    return h_sys - 0.5 * I_UNIT * cfg.gamma1 * (l.adjoint() * l) -
           0.5 * cfg.strength * std::sqrt(cfg.gamma1) * (l.adjoint() * f - f * l);
}

double no_ground_gain_witness(const FeedbackConfig& cfg) {
    const Mat h_sys = Mat::Zero(cfg.monitored.rows(), cfg.monitored.cols());
    return std::abs(natural_feedback_hamiltonian(cfg, h_sys)(0, 0));
}

Mat effective_feedback_hamiltonian(const LambdaParams& p, double strength, const Mat& feedback,
                                   const Mat& h_sys) {
    if (p.delta_a != 0.0)
        throw std::invalid_argument(
            "effective_feedback_hamiltonian: closed form requires delta_a = 0");
    const int dim = static_cast<int>(h_sys.rows());
    const Mat jump = effective_lambda_jump(p, dim);
    return h_sys - 0.5 * I_UNIT * p.gamma_10 * level_projector(dim, 1) -
           0.5 * I_UNIT * (jump.adjoint() * jump) -
           0.5 * strength * (jump.adjoint() * feedback - feedback * jump);
}

Mat ideal_pt_hamiltonian(double gamma_10, const Mat& h_sys) {
    const int dim = static_cast<int>(h_sys.rows());
    return h_sys +
           0.5 * I_UNIT * gamma_10 * (level_projector(dim, 0) - level_projector(dim, 1));
}

Mat original_lambda_hamiltonian(const LambdaParams& p, double strength, const Mat& feedback,
                                const Mat& h_sys) {
    p.validate();
    constexpr int dim = 3;  // |0>, |1>, |a>
    Mat h = Mat::Zero(dim, dim);
    h.topLeftCorner(h_sys.rows(), h_sys.cols()) = h_sys;
    h(2, 0) += 0.5 * p.omega_a;
    h(0, 2) += 0.5 * p.omega_a;
    h(2, 2) += p.delta_a - 0.5 * I_UNIT * p.gamma_a;
    h(1, 1) += -0.5 * I_UNIT * p.gamma_10;
    const Mat jump = effective_lambda_jump(p, dim);
    h -= 0.5 * strength * (jump.adjoint() * feedback - feedback * jump);
    return h;
}

Mat pt_hamiltonian(const PTParams& p) {
    return p.omega_sys * sigma_x() + I_UNIT * p.gamma * sigma_z();
}

PTSpectrum pt_spectrum(const PTParams& p) {
    const EigResult result = eig(pt_hamiltonian(p));
    PTSpectrum spectrum;
    spectrum.lower = result.values(0);
    spectrum.upper = result.values(1);
    if (std::abs(p.omega_sys - p.gamma) <= 1e-12)
        spectrum.phase = PTPhase::ExceptionalPoint;
    else if (p.omega_sys > p.gamma)
        spectrum.phase = PTPhase::Unbroken;
    else
        spectrum.phase = PTPhase::Broken;
    return spectrum;
}

}  // namespace ptgain
