#pragma once

#include <vector>

#include "ptgain/algebra.hpp"
#include "ptgain/lindblad.hpp"

namespace ptgain {

/// Disjoint ground/excited split of the basis indices.
struct SubspaceSplit {
    std::vector<int> ground;
    std::vector<int> excited;

    void validate(int dim) const;
    Mat ground_projector(int dim) const;
    Mat excited_projector(int dim) const;
};

/// Block-split model for the effective-operator reduction. Jump operators
/// carry their rate inside the amplitude (stored as sqrt(gamma_k) L_k) and
/// must map the excited manifold into the ground manifold.
struct PerturbativeModel {
    int dim = 0;
    SubspaceSplit split;
    Mat h_ground;   // P_g H P_g
    Mat h_excited;  // P_e H P_e
    Mat v_plus;     // P_e H P_g
    Mat v_minus;    // P_g H P_e
    std::vector<Mat> jumps;  // amplitude-folded, excited -> ground
};

struct EffectiveModel {
    Mat h_eff;
    std::vector<Mat> jumps;  // amplitude-folded, ground -> ground
};

/// Split H into H_g + H_e + V_+ + V_- by projector sandwiches and fold the
/// channel rates into the jump amplitudes. Throws if a channel does not
/// have the excited -> ground block structure.
PerturbativeModel split_hamiltonian(const Mat& h, const SubspaceSplit& split,
                                    const std::vector<Channel>& channels);

/// H_NH = H_e - i/2 sum_k L_k^dag L_k (full-dimension matrix, supported on
/// the excited block).
Mat nonhermitian_excited(const PerturbativeModel& model);

/// H_eff = H_g - 1/2 V_- (H_NH^-1 + H_NH^-dag) V_+, Hermitian and
/// ground-block supported. Throws when H_NH is singular on the excited
/// block (the reduction is invalid there).
Mat effective_hamiltonian(const PerturbativeModel& model);

/// L_eff^(k) = L_k H_NH^-1 V_+ for every channel.
std::vector<Mat> effective_jumps(const PerturbativeModel& model);

EffectiveModel reduce(const PerturbativeModel& model);

/// ||V_+||_op divided by the smallest total decay rate out of the excited
/// manifold. Values above ~0.1 mean the perturbative reduction is
/// unreliable; zero decay reports +infinity.
double validity_metric(const PerturbativeModel& model);

}  // namespace ptgain
