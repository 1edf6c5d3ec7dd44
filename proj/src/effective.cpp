#include "ptgain/effective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace ptgain {

namespace {

constexpr double kBlockTol = 1e-12;

Mat extract_block(const Mat& full, const std::vector<int>& rows, const std::vector<int>& cols) {
    Mat block(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) block(i, j) = full(rows[i], cols[j]);
    return block;
}

Mat embed_block(int dim, const Mat& block, const std::vector<int>& rows, const std::vector<int>& cols) {
    Mat full = Mat::Zero(dim, dim);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) full(rows[i], cols[j]) = block(i, j);
    return full;
}

/// Inverse of H_NH on the excited subblock, re-embedded into the full
/// dimension (zero elsewhere).
Mat excited_inverse(const PerturbativeModel& model) {
    const Mat h_nh = nonhermitian_excited(model);
    const Mat block = extract_block(h_nh, model.split.excited, model.split.excited);
    return embed_block(model.dim, inverse_checked(block), model.split.excited, model.split.excited);
}

}  // namespace

void SubspaceSplit::validate(int dim) const {
    std::vector<bool> seen(dim, false);
    auto mark = [&](const std::vector<int>& indices) {
        for (int i : indices) {
            if (i < 0 || i >= dim) throw std::invalid_argument("SubspaceSplit: index out of range");
            if (seen[i]) throw std::invalid_argument("SubspaceSplit: ground and excited sets overlap");
            seen[i] = true;
        }
    };
    mark(ground);
    mark(excited);
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
        throw std::invalid_argument("SubspaceSplit: split does not cover all basis indices");
}

Mat SubspaceSplit::ground_projector(int dim) const { return projector(dim, ground); }
Mat SubspaceSplit::excited_projector(int dim) const { return projector(dim, excited); }

PerturbativeModel split_hamiltonian(const Mat& h, const SubspaceSplit& split,
                                    const std::vector<Channel>& channels) {
    const int dim = static_cast<int>(h.rows());
    split.validate(dim);
    const Mat p_g = split.ground_projector(dim);
    const Mat p_e = split.excited_projector(dim);

    PerturbativeModel model;
    model.dim = dim;
    model.split = split;
    model.h_ground = p_g * h * p_g;
    model.h_excited = p_e * h * p_e;
    model.v_plus = p_e * h * p_g;
    model.v_minus = p_g * h * p_e;

    for (const auto& ch : channels) {
        if (ch.rate < 0.0) throw std::invalid_argument("split_hamiltonian: negative channel rate");
        require_same_dim(h, ch.op, "split_hamiltonian channel");
        // every decay must be excited -> ground: L = P_g L P_e
        if ((ch.op - p_g * ch.op * p_e).norm() > kBlockTol)
            throw std::invalid_argument(
                "split_hamiltonian: channel is not an excited-to-ground decay");
        model.jumps.push_back(std::sqrt(ch.rate) * ch.op);
    }
    return model;
}

Mat nonhermitian_excited(const PerturbativeModel& model) {
    Mat h_nh = model.h_excited;
    for (const auto& jump : model.jumps) h_nh -= 0.5 * I_UNIT * (jump.adjoint() * jump);
    return h_nh;
}

Mat effective_hamiltonian(const PerturbativeModel& model) {
    const Mat inv = excited_inverse(model);
    return model.h_ground - 0.5 * model.v_minus * (inv + inv.adjoint()) * model.v_plus;
}

std::vector<Mat> effective_jumps(const PerturbativeModel& model) {
    const Mat inv = excited_inverse(model);
    std::vector<Mat> out;
    out.reserve(model.jumps.size());
    for (const auto& jump : model.jumps) out.push_back(jump * inv * model.v_plus);
    return out;
}

EffectiveModel reduce(const PerturbativeModel& model) {
    return EffectiveModel{effective_hamiltonian(model), effective_jumps(model)};
}

double validity_metric(const PerturbativeModel& model) {
    Eigen::JacobiSVD<Mat> svd(model.v_plus);
    const double coupling = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    if (coupling == 0.0) return 0.0;

    Mat decay = Mat::Zero(model.dim, model.dim);
    for (const auto& jump : model.jumps) decay += jump.adjoint() * jump;
    const Mat block = extract_block(decay, model.split.excited, model.split.excited);
    if (block.rows() == 0) return std::numeric_limits<double>::infinity();
    Eigen::SelfAdjointEigenSolver<Mat> solver(block);
    const double min_rate = solver.eigenvalues()(0);
    if (min_rate <= 0.0) return std::numeric_limits<double>::infinity();
    return coupling / min_rate;
}

}  // namespace ptgain
