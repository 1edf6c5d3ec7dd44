#include <doctest.h>

#include <cmath>

#include "ptgain/algebra.hpp"
#include "test_util.hpp"

using namespace ptgain;

namespace {

Mat op01() {  // |0><1|
    Mat m = Mat::Zero(2, 2);
    m(0, 1) = 1.0;
    return m;
}

}  // namespace

TEST_CASE("dagger basics") {
    CHECK(frobenius_distance(dagger(op01()), op01().adjoint()) == 0.0);
    CHECK(dagger(op01())(1, 0) == Complex(1.0, 0.0));
    CHECK(frobenius_distance(dagger(sigma_y()), sigma_y()) == 0.0);
    const Mat m = I_UNIT * Mat::Identity(2, 2);
    CHECK(frobenius_distance(dagger(m), -m) == 0.0);
    // involution
    std::mt19937_64 rng(7);
    const Mat a = testutil::random_matrix(rng, 4);
    CHECK(frobenius_distance(dagger(dagger(a)), a) == 0.0);
}

TEST_CASE("commutator and anticommutator") {
    CHECK(frobenius_distance(commutator(sigma_x(), sigma_y()), 2.0 * I_UNIT * sigma_z()) < 1e-15);
    CHECK(frobenius_distance(anticommutator(sigma_x(), sigma_x()), 2.0 * Mat::Identity(2, 2)) < 1e-15);
    std::mt19937_64 rng(3);
    const Mat a = testutil::random_matrix(rng, 3);
    CHECK(frobenius_norm(commutator(a, a)) < 1e-14);
    CHECK_THROWS_AS(commutator(sigma_x(), testutil::random_matrix(rng, 3)), std::invalid_argument);
}

TEST_CASE("expectation values") {
    const Mat ground = ketbra(basis_ket(2, 0), basis_ket(2, 0));
    CHECK(expectation(sigma_z(), ground).real() == doctest::Approx(1.0));
    CHECK(std::abs(expectation(sigma_x(), 0.5 * Mat::Identity(2, 2))) < 1e-15);
    Mat rho = Mat::Zero(2, 2);
    rho(0, 0) = 1.0 - 0.3679;
    rho(1, 1) = 0.3679;
    const Mat excited = ketbra(basis_ket(2, 1), basis_ket(2, 1));
    CHECK(expectation(excited, rho).real() == doctest::Approx(0.3679));
}

TEST_CASE("ket invariants") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> dist;
    Vec v(3);
    for (int i = 0; i < 3; ++i) v(i) = Complex(dist(rng), dist(rng));
    const Mat kb = ketbra(v, v);
    CHECK(is_hermitian(kb, 1e-12));
    CHECK(kb.trace().real() == doctest::Approx(v.squaredNorm()));
}

TEST_CASE("eig on small matrices") {
    const EigResult sx = eig(sigma_x());
    CHECK(sx.values(0).real() == doctest::Approx(-1.0));
    CHECK(sx.values(1).real() == doctest::Approx(1.0));

    // Omega sigma_x + i gamma sigma_z, eigenvalues +-sqrt(Omega^2 - gamma^2)
    const Mat h = sigma_x() + I_UNIT * 0.5 * sigma_z();
    const EigResult r = eig(h);
    CHECK(std::abs(r.values(0) + std::sqrt(0.75)) < 1e-12);
    CHECK(std::abs(r.values(1) - std::sqrt(0.75)) < 1e-12);

    const Mat ep = 0.5 * sigma_x() + I_UNIT * 0.5 * sigma_z();
    const EigResult c = eig(ep);
    CHECK(std::abs(c.values(0)) < 1e-8);
    CHECK(std::abs(c.values(1)) < 1e-8);
}

TEST_CASE("eig of random Hermitian is real") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const int dim = 2 + static_cast<int>(rng() % 3);
        const EigResult r = eig(testutil::random_hermitian(rng, dim));
        for (int k = 0; k < dim; ++k) CHECK(std::abs(r.values(k).imag()) < 1e-10);
    }
}

TEST_CASE("eigenvector consistency") {
    std::mt19937_64 rng(29);
    const Mat a = testutil::random_matrix(rng, 4);
    const EigResult r = eig(a);
    for (int k = 0; k < 4; ++k)
        CHECK((a * r.vectors.col(k) - r.values(k) * r.vectors.col(k)).norm() < 1e-10);
}

TEST_CASE("inverse_checked") {
    // 1-dim excited manifold at -i gamma_a / 2, gamma_a = 2.5
    Mat block(1, 1);
    block(0, 0) = Complex(0.0, -1.25);
    const Mat inv = inverse_checked(block);
    CHECK(std::abs(inv(0, 0) - Complex(0.0, 0.8)) < 1e-14);

    CHECK(frobenius_distance(inverse_checked(Mat::Identity(3, 3)), Mat::Identity(3, 3)) < 1e-14);
    CHECK_THROWS_AS(inverse_checked(Mat::Zero(2, 2)), std::runtime_error);

    std::mt19937_64 rng(31);
    const Mat a = testutil::random_matrix(rng, 3);
    CHECK(frobenius_distance(a * inverse_checked(a), Mat::Identity(3, 3)) < 1e-12);
}

TEST_CASE("projector algebra") {
    for (int dim = 2; dim <= 4; ++dim) {
        const Mat pg = projector(dim, {0, 1});
        std::vector<int> rest;
        for (int i = 2; i < dim; ++i) rest.push_back(i);
        const Mat pe = projector(dim, rest);
        CHECK(frobenius_distance(pg + pe, Mat::Identity(dim, dim)) == 0.0);
        CHECK(frobenius_norm(pg * pe) == 0.0);
    }
}

TEST_CASE("Frobenius distance is a metric") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const Mat a = testutil::random_matrix(rng, 3);
        const Mat b = testutil::random_matrix(rng, 3);
        const Mat c = testutil::random_matrix(rng, 3);
        CHECK(frobenius_distance(a, b) == doctest::Approx(frobenius_distance(b, a)));
        CHECK(frobenius_distance(a, a) < 1e-14);
        CHECK(frobenius_distance(a, c) <= frobenius_distance(a, b) + frobenius_distance(b, c) + 1e-12);
    }
}
