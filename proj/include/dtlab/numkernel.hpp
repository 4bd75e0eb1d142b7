#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace dtlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Unitary Schur factorization A = U T U* with the T diagonal reordered so
/// that selected eigenvalues come first.
struct SchurForm {
    Matrix unitary;            ///< U, orthonormal columns
    Matrix triangular;         ///< T, upper triangular
    std::vector<int> eigen_order; ///< eigen_order[i] = position of T(i,i) in the unordered form
    int selected;              ///< number of leading diagonal entries satisfying the predicate
};

/// Schur form of a square matrix with every eigenvalue satisfying `inside`
/// moved (stably) to the front of the diagonal. The leading `selected`
/// columns of U then span the invariant subspace for those eigenvalues.
///
/// The reordering swaps adjacent diagonal pairs with 2x2 unitary similarities;
/// equal eigenvalues are never swapped, so Jordan structure is not disturbed.
/// Throws on QR-iteration non-convergence.
SchurForm schur_ordered(const Matrix& a, const std::function<bool(const Complex&)>& inside);

/// Singular values, nonincreasing.
std::vector<double> svd_values(const Matrix& a);

/// Orthonormal columns spanning (at least) the column space of A.
Matrix qr_orthonormalize(const Matrix& a);

/// Solves T X = B for upper triangular T. Throws if some |T(i,i)| is below
/// tol_singular * max_j |T(j,j)|.
Matrix solve_upper_triangular(const Matrix& t, const Matrix& b);

/// Solves X T = B for upper triangular T (same singularity contract).
Matrix solve_upper_triangular_right(const Matrix& t, const Matrix& b);

/// Largest singular value.
double operator_norm(const Matrix& a);

double frobenius_norm(const Matrix& a);

/// Solves Y*B - A*Y = C for Y (A: m x m, B: k x k, C: m x k) by
/// Bartels-Stewart on complex Schur forms. Requires the spectra of A and B
/// to be disjoint; throws "non-unique solution" otherwise.
Matrix sylvester_solve(const Matrix& a, const Matrix& b, const Matrix& c);

namespace tol {
inline constexpr double singular = 1e-14;  // relative diagonal floor for triangular solves
inline constexpr double spectra_gap = 1e-13; // relative separation floor for sylvester_solve
} // namespace tol

} // namespace dtlab
