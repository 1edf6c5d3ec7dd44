#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "ptgain/lindblad.hpp"
#include "test_util.hpp"

using namespace ptgain;

namespace {

Mat lower01() {  // |0><1|
    Mat m = Mat::Zero(2, 2);
    m(0, 1) = 1.0;
    return m;
}

Mat excited_state() {
    Mat rho = Mat::Zero(2, 2);
    rho(1, 1) = 1.0;
    return rho;
}

double min_eigenvalue(const Mat& rho) {
    Eigen::SelfAdjointEigenSolver<Mat> solver(rho);
    return solver.eigenvalues()(0);
}

}  // namespace

TEST_CASE("dissipator on basis states") {
    const Mat d = dissipator(lower01(), excited_state());
    Mat expected = Mat::Zero(2, 2);
    expected(0, 0) = 1.0;
    expected(1, 1) = -1.0;
    CHECK(frobenius_distance(d, expected) < 1e-15);

    Mat ground = Mat::Zero(2, 2);
    ground(0, 0) = 1.0;
    CHECK(frobenius_norm(dissipator(lower01(), ground)) < 1e-15);
    CHECK(frobenius_norm(dissipator(sigma_x(), 0.5 * Mat::Identity(2, 2))) < 1e-15);
}

TEST_CASE("liouvillian is traceless") {
    LindbladModel decay{Mat::Zero(2, 2), {{1.0, lower01()}}};
    Mat expected = Mat::Zero(2, 2);
    expected(0, 0) = 1.0;
    expected(1, 1) = -1.0;
    CHECK(frobenius_distance(liouvillian_apply(decay, excited_state()), expected) < 1e-15);

    LindbladModel rabi{sigma_x(), {}};
    Mat ground = Mat::Zero(2, 2);
    ground(0, 0) = 1.0;
    CHECK(frobenius_distance(liouvillian_apply(rabi, ground),
                             -I_UNIT * commutator(sigma_x(), ground)) < 1e-15);

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = 2 + static_cast<int>(rng() % 3);
        LindbladModel model{testutil::random_hermitian(rng, dim),
                            {{0.7, testutil::random_matrix(rng, dim)},
                             {1.3, testutil::random_matrix(rng, dim)}}};
        const Mat out = liouvillian_apply(model, testutil::random_density(rng, dim));
        CHECK(std::abs(out.trace()) < 1e-12);
    }
}

TEST_CASE("exponential decay oracle") {
    LindbladModel model{Mat::Zero(2, 2), {{1.0, lower01()}}};
    const auto result = integrate_master(model, excited_state(), 1e-3, 1.0);
    CHECK(result.states.back()(1, 1).real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
    CHECK(std::abs(result.traces.back() - 1.0) < 1e-8);
}

TEST_CASE("Rabi oscillation oracle") {
    LindbladModel model{sigma_x(), {}};
    Mat ground = Mat::Zero(2, 2);
    ground(0, 0) = 1.0;
    const auto result = integrate_master(model, ground, 1e-3, std::numbers::pi / 2.0);
    // P1(t) = sin^2(t); the grid lands within dt of t = pi/2
    CHECK(result.states.back()(1, 1).real() == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("T below dt returns initial state only") {
    LindbladModel model{Mat::Zero(2, 2), {{1.0, lower01()}}};
    const auto result = integrate_master(model, excited_state(), 1e-3, 0.0);
    CHECK(result.states.size() == 1);
    CHECK(frobenius_distance(result.states[0], excited_state()) == 0.0);
}

TEST_CASE("RK4 order against the decay oracle") {
    LindbladModel model{Mat::Zero(2, 2), {{1.0, lower01()}}};
    auto error_at = [&](double dt) {
        const auto r = integrate_master(model, excited_state(), dt, 1.0);
        return std::abs(r.states.back()(1, 1).real() - std::exp(-1.0));
    };
    const double ratio = error_at(2e-3) / error_at(1e-3);
    CHECK(ratio > 8.0);
    CHECK(ratio < 32.0);
}

TEST_CASE("trace preservation and positivity on random models") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        const int dim = 2 + static_cast<int>(rng() % 3);
        const int n_channels = 1 + static_cast<int>(rng() % 3);
        LindbladModel model{testutil::random_hermitian(rng, dim), {}};
        for (int k = 0; k < n_channels; ++k)
            model.channels.push_back({0.2 + 0.3 * k, testutil::random_matrix(rng, dim)});
        const Mat rho0 = testutil::random_density(rng, dim);
        const auto result = integrate_master(model, rho0, 1e-3, 10.0);
        for (std::size_t s = 0; s < result.states.size(); s += 500) {
            CHECK(std::abs(result.traces[s] - 1.0) < 1e-7);
            CHECK(frobenius_distance(result.states[s], result.states[s].adjoint()) < 1e-10);
            CHECK(min_eigenvalue(result.states[s]) > -1e-7);
        }
    }
}

TEST_CASE("non-Hermitian decay of the norm") {
    Mat h = Mat::Zero(2, 2);
    h(1, 1) = Complex(0.0, -0.5);
    const auto result = integrate_nonhermitian({h, std::nullopt}, excited_state(), 1e-3, 1.0);
    CHECK(result.traces.back() == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
}

TEST_CASE("balanced gain and loss gives cosh norm growth") {
    Mat h = Mat::Zero(2, 2);
    h(0, 0) = Complex(0.0, 0.05);
    h(1, 1) = Complex(0.0, -0.05);
    const Mat rho0 = 0.5 * Mat::Identity(2, 2);
    const auto result = integrate_nonhermitian({h, std::nullopt}, rho0, 1e-3, 20.0);
    for (std::size_t s = 0; s < result.times.size(); s += 1000) {
        const double t = result.times[s];
        CHECK(std::abs(result.traces[s] - std::cosh(0.1 * t)) < 1e-6);
        const Mat renorm = renormalize(result.states[s]);
        CHECK(renorm(0, 0).real() ==
              doctest::Approx(std::exp(0.1 * t) / (2.0 * std::cosh(0.1 * t))).epsilon(1e-6));
    }
}

TEST_CASE("Hermitian Hamiltonian preserves the norm") {
    std::mt19937_64 rng(19);
    const Mat h = testutil::random_hermitian(rng, 3);
    const Mat rho0 = testutil::random_density(rng, 3);
    const auto result = integrate_nonhermitian({h, std::nullopt}, rho0, 1e-3, 5.0);
    for (double trace : result.traces) CHECK(std::abs(trace - 1.0) < 1e-8);
}

TEST_CASE("renormalize and populations") {
    Mat rho = Mat::Zero(2, 2);
    rho(0, 0) = 2.0;
    const Mat unit = renormalize(rho);
    CHECK(unit(0, 0).real() == doctest::Approx(1.0));

    Mat mixed = Mat::Zero(2, 2);
    mixed(0, 0) = 0.3;
    mixed(1, 1) = 0.7;
    const auto p = populations(mixed);
    CHECK(p[0] == doctest::Approx(0.3));
    CHECK(p[1] == doctest::Approx(0.7));

    CHECK_THROWS_AS(renormalize(Mat::Zero(2, 2)), std::runtime_error);
}
