#include "dtlab/numkernel.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace dtlab {

namespace {

// Swaps the eigenvalues at diagonal positions (i, i+1) of the upper
// triangular T by a 2x2 unitary similarity, updating U accordingly.
// The rotation's first column is the normalized eigenvector of the 2x2
// block for the lower-right eigenvalue, so the transformed block is again
// upper triangular with the diagonal swapped.
void swap_adjacent(Matrix& t, Matrix& u, Eigen::Index i) {
    const Eigen::Index n = t.rows();
    const Complex a = t(i, i);
    const Complex b = t(i, i + 1);
    const Complex d = t(i + 1, i + 1);

    const Complex x0 = b;
    const Complex x1 = d - a;
    const double r = std::hypot(std::abs(x0), std::abs(x1));

    Eigen::Matrix2cd g;
    if (r == 0.0) {
        g << 0.0, 1.0, 1.0, 0.0; // both entries equal and b == 0: plain permutation
    } else {
        g << x0 / r, -std::conj(x1) / r, x1 / r, std::conj(x0) / r;
    }

    t.block(0, i, i + 2, 2) = t.block(0, i, i + 2, 2) * g;
    t.block(i, i, 2, n - i) = g.adjoint() * t.block(i, i, 2, n - i);
    u.middleCols(i, 2) = u.middleCols(i, 2) * g;

    // The exact transformed diagonal is (d, a); pin it and re-zero the
    // subdiagonal entry the finite arithmetic left behind.
    t(i, i) = d;
    t(i + 1, i + 1) = a;
    t(i + 1, i) = 0.0;
}

} // namespace

SchurForm schur_ordered(const Matrix& a, const std::function<bool(const Complex&)>& inside) {
    if (a.rows() != a.cols()) throw std::invalid_argument("schur_ordered: matrix must be square");
    const Eigen::Index n = a.rows();

    Eigen::ComplexSchur<Matrix> schur(a, /*computeU=*/true);
    if (schur.info() != Eigen::Success) {
        throw std::runtime_error(
            "schur_ordered: QR iteration did not converge within " +
            std::to_string(static_cast<long long>(schur.getMaxIterations()) * n) +
            " iterations");
    }
    Matrix t = schur.matrixT();
    Matrix u = schur.matrixU();

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::vector<char> in(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) in[static_cast<std::size_t>(i)] = inside(t(i, i)) ? 1 : 0;

    // Stable partition: bubble each selected eigenvalue down to the front.
    Eigen::Index target = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
        if (!in[static_cast<std::size_t>(j)]) continue;
        for (Eigen::Index i = j; i > target; --i) {
            swap_adjacent(t, u, i - 1);
            std::swap(in[static_cast<std::size_t>(i - 1)], in[static_cast<std::size_t>(i)]);
            std::swap(order[static_cast<std::size_t>(i - 1)], order[static_cast<std::size_t>(i)]);
        }
        ++target;
    }

    return SchurForm{std::move(u), std::move(t), std::move(order), static_cast<int>(target)};
}

std::vector<double> svd_values(const Matrix& a) {
    Eigen::BDCSVD<Matrix> svd(a);
    const auto& s = svd.singularValues();
    return std::vector<double>(s.data(), s.data() + s.size());
}

Matrix qr_orthonormalize(const Matrix& a) {
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = Matrix::Identity(a.rows(), std::min(a.rows(), a.cols()));
    q = qr.householderQ() * q;
    return q;
}

namespace {

void check_triangular_solvable(const Matrix& t) {
    if (t.rows() != t.cols()) throw std::invalid_argument("triangular solve: T must be square");
    const double dmax = t.diagonal().cwiseAbs().maxCoeff();
    const double dmin = t.diagonal().cwiseAbs().minCoeff();
    if (dmax == 0.0 || dmin <= tol::singular * dmax) {
        throw std::runtime_error("triangular solve: singular diagonal (|T_ii| below tolerance)");
    }
}

} // namespace

Matrix solve_upper_triangular(const Matrix& t, const Matrix& b) {
    check_triangular_solvable(t);
    return t.triangularView<Eigen::Upper>().solve(b);
}

Matrix solve_upper_triangular_right(const Matrix& t, const Matrix& b) {
    check_triangular_solvable(t);
    Matrix x = b;
    t.triangularView<Eigen::Upper>().solveInPlace<Eigen::OnTheRight>(x);
    return x;
}

double operator_norm(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::BDCSVD<Matrix> svd(a);
    return svd.singularValues()(0);
}

double frobenius_norm(const Matrix& a) { return a.norm(); }

Matrix sylvester_solve(const Matrix& a, const Matrix& b, const Matrix& c) {
    if (a.rows() != a.cols() || b.rows() != b.cols())
        throw std::invalid_argument("sylvester_solve: A and B must be square");
    if (c.rows() != a.rows() || c.cols() != b.rows())
        throw std::invalid_argument("sylvester_solve: C must be A.rows x B.rows");

    const Eigen::Index m = a.rows();
    const Eigen::Index k = b.rows();

    Eigen::ComplexSchur<Matrix> sa(a, true);
    Eigen::ComplexSchur<Matrix> sb(b, true);
    if (sa.info() != Eigen::Success || sb.info() != Eigen::Success)
        throw std::runtime_error("sylvester_solve: Schur factorization failed to converge");

    const Matrix& ta = sa.matrixT();
    const Matrix& tb = sb.matrixT();
    const Matrix& ua = sa.matrixU();
    const Matrix& ub = sb.matrixU();

    const double scale = ta.diagonal().cwiseAbs().maxCoeff() + tb.diagonal().cwiseAbs().maxCoeff();
    const double gap_floor = tol::spectra_gap * std::max(scale, 1e-300);

    Matrix cp = ua.adjoint() * c * ub;
    Matrix w(m, k);
    Matrix shifted = -ta; // diagonal rewritten per column

    for (Eigen::Index j = 0; j < k; ++j) {
        const Complex beta = tb(j, j);
        for (Eigen::Index i = 0; i < m; ++i) {
            if (std::abs(beta - ta(i, i)) <= gap_floor) {
                throw std::runtime_error(
                    "sylvester_solve: non-unique solution (spectra of A and B overlap)");
            }
            shifted(i, i) = beta - ta(i, i);
        }
        Vector rhs = cp.col(j);
        if (j > 0) rhs.noalias() -= w.leftCols(j) * tb.col(j).head(j);
        w.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
    }

    return ua * w * ub.adjoint();
}

} // namespace dtlab
