#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "ptgain/algebra.hpp"
#include "ptgain/feedback.hpp"

namespace ptgain::detail {

// Euler-Maruyama step of the conditional feedback SME, templated on the
// matrix type so the 2x2/3x3 trajectory loops run entirely on the stack.
// The feedback conjugation exp(-i G F dy) is exact: it is built from the
// spectral decomposition of the Hermitian feedback operator.
template <typename MatT>
class SmeKernel {
public:
    using RealVec = Eigen::Matrix<double, MatT::RowsAtCompileTime, 1>;

    SmeKernel(const FeedbackConfig& cfg, const Mat& h_sys, bool apply_feedback)
        : gamma1_(cfg.gamma1),
          sqrt_gamma1_(std::sqrt(cfg.gamma1)),
          strength_(cfg.strength),
          monitored_(cfg.monitored),
          monitored_dag_(cfg.monitored.adjoint()),
          feedback_(cfg.feedback),
          hamiltonian_(h_sys),
          has_hamiltonian_(h_sys.norm() > 0.0),
          apply_feedback_(apply_feedback && cfg.strength != 0.0) {
        Eigen::SelfAdjointEigenSolver<MatT> solver(feedback_);
        if (solver.info() != Eigen::Success)
            throw std::runtime_error("SmeKernel: feedback operator eigendecomposition failed");
        feedback_vecs_ = solver.eigenvectors();
        feedback_vals_ = solver.eigenvalues();
    }

    void step(MatT& rho, double dw, double dt) const {
        // dy from the homodyne record of the pre-step conditional state; the
        // current measures the monitored quadrature, <L + L^dag> = 2 Re tr(L rho)
        const double mean_x = 2.0 * (monitored_ * rho).trace().real();
        const double dy = sqrt_gamma1_ * mean_x * dt + dw;

        MatT drift = MatT::Zero(rho.rows(), rho.cols());
        if (has_hamiltonian_) drift = -I_UNIT * (hamiltonian_ * rho - rho * hamiltonian_);
        if (gamma1_ != 0.0) {
            const MatT m = monitored_ * rho;                     // L rho
            const MatT sandwich = m * monitored_dag_;            // L rho L^dag
            const MatT ldl_rho = monitored_dag_ * m;             // L^dag L rho
            drift += gamma1_ * (sandwich - 0.5 * (ldl_rho + ldl_rho.adjoint()));
            // measurement backaction H[L]rho = (L rho + rho L^dag) - <L+L^dag> rho
            const MatT sym = m + m.adjoint();
            rho += dt * drift + (sqrt_gamma1_ * dw) * (sym - sym.trace().real() * rho);
        } else {
            rho += dt * drift;
        }

        if (apply_feedback_) {
            // U = V diag(exp(-i G lambda_j dy)) V^dag, exact for Hermitian F
            MatT scaled = feedback_vecs_;
            for (Eigen::Index j = 0; j < scaled.cols(); ++j)
                scaled.col(j) *= std::polar(1.0, -strength_ * feedback_vals_(j) * dy);
            const MatT u = scaled * feedback_vecs_.adjoint();
            rho = u * rho * u.adjoint();
        }

        rho = 0.5 * (rho + rho.adjoint()).eval();
        const double trace = rho.trace().real();
        if (!(trace > 1e-12) || !rho.allFinite())
            throw std::runtime_error("SmeKernel: state lost normalizability");
        rho /= trace;
    }

private:
    double gamma1_;
    double sqrt_gamma1_;
    double strength_;
    MatT monitored_;
    MatT monitored_dag_;
    MatT feedback_;
    MatT hamiltonian_;
    bool has_hamiltonian_;
    bool apply_feedback_;
    MatT feedback_vecs_;
    RealVec feedback_vals_;
};

}  // namespace ptgain::detail
