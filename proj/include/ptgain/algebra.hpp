#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace ptgain {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr Complex I_UNIT{0.0, 1.0};

// Basis convention used throughout: index 0 = ground |0>, index 1 = excited
// |1>, index 2 = auxiliary |a>. sigma_z = |0><0| - |1><1|, so gain on |0>
// is gain on the +1 eigenstate of sigma_z.
Mat sigma_x();
Mat sigma_y();
Mat sigma_z();

Vec basis_ket(int dim, int index);
Mat ketbra(const Vec& left, const Vec& right);

/// Projector onto the span of the given basis indices.
Mat projector(int dim, const std::vector<int>& indices);

inline Mat dagger(const Mat& a) { return a.adjoint(); }

Mat commutator(const Mat& a, const Mat& b);
Mat anticommutator(const Mat& a, const Mat& b);

/// Tr(A rho).
Complex expectation(const Mat& a, const Mat& rho);

double frobenius_norm(const Mat& a);
double frobenius_distance(const Mat& a, const Mat& b);

inline Mat hermitize(const Mat& a) { return 0.5 * (a + a.adjoint()); }
bool is_hermitian(const Mat& a, double tol = 1e-12);

/// Eigenvalues (and eigenvectors) of a general complex matrix, sorted by
/// (real part, imaginary part) so output order is reproducible.
struct EigResult {
    Vec values;
    Mat vectors;  // column k pairs with values(k)
};
EigResult eig(const Mat& a);

/// Inverse with a singularity check: throws if the condition number
/// exceeds 1e8 or the smallest singular value underflows. Used for the
/// excited-manifold inversion, where a near-singular block signals an
/// invalid reduction rather than a numerical detail.
Mat inverse_checked(const Mat& a, double max_condition = 1e8);

void require_same_dim(const Mat& a, const Mat& b, const char* what);

}  // namespace ptgain
