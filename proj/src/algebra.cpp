#include "ptgain/algebra.hpp"

#include <algorithm>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace ptgain {

Mat sigma_x() {
    Mat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Mat sigma_y() {
    Mat m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

Mat sigma_z() {
    Mat m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Vec basis_ket(int dim, int index) {
    if (index < 0 || index >= dim) throw std::invalid_argument("basis_ket: index out of range");
    Vec v = Vec::Zero(dim);
    v(index) = 1.0;
    return v;
}

Mat ketbra(const Vec& left, const Vec& right) {
    if (left.size() != right.size()) throw std::invalid_argument("ketbra: dimension mismatch");
    return left * right.adjoint();
}

Mat projector(int dim, const std::vector<int>& indices) {
    Mat p = Mat::Zero(dim, dim);
    for (int i : indices) {
        if (i < 0 || i >= dim) throw std::invalid_argument("projector: index out of range");
        p(i, i) = 1.0;
    }
    return p;
}

void require_same_dim(const Mat& a, const Mat& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

Mat commutator(const Mat& a, const Mat& b) {
    require_same_dim(a, b, "commutator");
    return a * b - b * a;
}

Mat anticommutator(const Mat& a, const Mat& b) {
    require_same_dim(a, b, "anticommutator");
    return a * b + b * a;
}

Complex expectation(const Mat& a, const Mat& rho) {
    require_same_dim(a, rho, "expectation");
    return (a * rho).trace();
}

double frobenius_norm(const Mat& a) { return a.norm(); }

double frobenius_distance(const Mat& a, const Mat& b) {
    require_same_dim(a, b, "frobenius_distance");
    return (a - b).norm();
}

bool is_hermitian(const Mat& a, double tol) {
    return a.rows() == a.cols() && (a - a.adjoint()).norm() <= tol;
}

EigResult eig(const Mat& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("eig: matrix not square");
    Eigen::ComplexEigenSolver<Mat> solver(a, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eig: solver failed to converge");

    const int n = static_cast<int>(a.rows());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    const Vec& vals = solver.eigenvalues();
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        if (vals(i).real() != vals(j).real()) return vals(i).real() < vals(j).real();
        return vals(i).imag() < vals(j).imag();
    });

    EigResult result;
    result.values = Vec(n);
    result.vectors = Mat(n, n);
    for (int k = 0; k < n; ++k) {
        result.values(k) = vals(order[k]);
        result.vectors.col(k) = solver.eigenvectors().col(order[k]);
    }
    return result;
}

Mat inverse_checked(const Mat& a, double max_condition) {
    if (a.rows() != a.cols()) throw std::invalid_argument("inverse_checked: matrix not square");
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (smin <= 0.0 || smax / smin > max_condition)
        throw std::runtime_error("inverse_checked: operator singular to tolerance (condition number exceeds limit)");
    return a.inverse();
}

}  // namespace ptgain
