#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "dtlab/numkernel.hpp"
#include "dtlab/rng.hpp"

using namespace dtlab;

namespace {

Matrix random_matrix(int n, Philox& g, double scale = 1.0) {
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = scale * g.complex_gaussian();
    return a;
}

// Characteristic polynomial coefficients by Faddeev-LeVerrier (trace
// recursion; no eigendecomposition involved), then Durand-Kerner roots.
// This is the independent oracle for the Schur diagonal.
std::vector<Complex> char_poly_roots(const Matrix& a) {
    const int n = static_cast<int>(a.rows());
    std::vector<Complex> c(static_cast<std::size_t>(n) + 1); // p(x) = x^n + c1 x^{n-1} + ... + cn
    Matrix m = Matrix::Zero(n, n);
    Complex ck = 1.0;
    c[0] = 1.0;
    for (int k = 1; k <= n; ++k) {
        m = a * m + ck * Matrix::Identity(n, n);
        ck = -(a * m).trace() / static_cast<double>(k);
        c[static_cast<std::size_t>(k)] = ck;
    }
    auto eval = [&](Complex x) {
        Complex v = 0.0;
        for (int k = 0; k <= n; ++k) v = v * x + c[static_cast<std::size_t>(k)];
        return v;
    };
    // Durand-Kerner from a spread of starting points
    std::vector<Complex> r(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) r[static_cast<std::size_t>(i)] = std::polar(0.4 + 0.9 * i / n, 0.7 * i + 0.3);
    for (int iter = 0; iter < 500; ++iter) {
        double shift = 0.0;
        for (int i = 0; i < n; ++i) {
            Complex denom = 1.0;
            for (int j = 0; j < n; ++j)
                if (j != i) denom *= r[static_cast<std::size_t>(i)] - r[static_cast<std::size_t>(j)];
            const Complex delta = eval(r[static_cast<std::size_t>(i)]) / denom;
            r[static_cast<std::size_t>(i)] -= delta;
            shift = std::max(shift, std::abs(delta));
        }
        if (shift < 1e-13) break;
    }
    return r;
}

void check_multiset_match(std::vector<Complex> a, std::vector<Complex> b, double tol) {
    REQUIRE(a.size() == b.size());
    for (const auto& x : a) {
        double best = 1e300;
        std::size_t best_j = 0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            const double d = std::abs(x - b[j]);
            if (d < best) {
                best = d;
                best_j = j;
            }
        }
        CHECK(best <= tol);
        b.erase(b.begin() + static_cast<std::ptrdiff_t>(best_j));
    }
}

} // namespace

TEST_CASE("schur_ordered on diagonal and block-triangular basics") {
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 0.0;
    a(1, 1) = 3.0;
    auto sf = schur_ordered(a, [](const Complex& z) { return std::abs(z) < 1.0; });
    CHECK(sf.selected == 1);
    CHECK(std::abs(sf.triangular(0, 0)) < 1e-14);
    CHECK(std::abs(std::abs(sf.unitary(0, 0)) - 1.0) < 1e-14); // e1 up to phase
    CHECK(std::abs(sf.unitary(1, 0)) < 1e-14);

    // needs an actual swap: eigenvalue 3 first, 0 second
    Matrix b = Matrix::Zero(2, 2);
    b(0, 0) = 3.0;
    b(0, 1) = 1.5;
    b(1, 1) = 0.0;
    sf = schur_ordered(b, [](const Complex& z) { return std::abs(z) < 1.0; });
    CHECK(sf.selected == 1);
    CHECK(std::abs(sf.triangular(0, 0)) < 1e-13);
    CHECK(std::abs(sf.triangular(1, 1) - 3.0) < 1e-13);
    CHECK((sf.unitary * sf.triangular * sf.unitary.adjoint() - b).norm() < 1e-13 * b.norm());
    CHECK(sf.eigen_order == std::vector<int>{1, 0});

    Matrix c = Matrix::Zero(2, 2);
    c(0, 1) = 1.0;
    c(1, 1) = 2.0;
    sf = schur_ordered(c, [](const Complex& z) { return std::abs(z) < 1.0; });
    // invariant subspace for the eigenvalue 0 is span{e1}
    CHECK(sf.selected == 1);
    CHECK(std::abs(std::abs(sf.unitary(0, 0)) - 1.0) < 1e-13);
}

TEST_CASE("schur_ordered random reconstruction, unitarity and ordering") {
    Philox g(11, 0);
    for (int n : {4, 8, 16, 64}) {
        const Matrix a = random_matrix(n, g);
        const auto inside = [](const Complex& z) { return z.real() > 0.0; };
        const auto sf = schur_ordered(a, inside);
        const double na = a.norm();
        CHECK((sf.unitary * sf.triangular * sf.unitary.adjoint() - a).norm() <= 1e-12 * na);
        CHECK((sf.unitary.adjoint() * sf.unitary - Matrix::Identity(n, n)).norm() <= 1e-12);
        for (int i = 0; i < n; ++i) {
            const bool in = inside(sf.triangular(i, i));
            CHECK(in == (i < sf.selected));
        }
        // eigen_order is a permutation
        std::vector<int> ord = sf.eigen_order;
        std::sort(ord.begin(), ord.end());
        for (int i = 0; i < n; ++i) CHECK(ord[static_cast<std::size_t>(i)] == i);
        // strictly triangular below the diagonal
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < i; ++j) CHECK(sf.triangular(i, j) == Complex(0.0, 0.0));
    }
}

TEST_CASE("schur diagonal matches characteristic polynomial roots for N <= 6") {
    Philox g(17, 0);
    for (int n : {3, 4, 5, 6}) {
        for (int rep = 0; rep < 3; ++rep) {
            const Matrix a = random_matrix(n, g);
            const auto sf = schur_ordered(a, [](const Complex& z) { return z.imag() > 0.0; });
            std::vector<Complex> diag;
            for (int i = 0; i < n; ++i) diag.push_back(sf.triangular(i, i));
            check_multiset_match(diag, char_poly_roots(a), 1e-8);
        }
    }
}

TEST_CASE("svd, norms, qr") {
    const auto ones = svd_values(Matrix::Identity(3, 3));
    REQUIRE(ones.size() == 3);
    for (double s : ones) CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
    Matrix n2 = Matrix::Zero(2, 2);
    n2(0, 1) = 2.0;
    CHECK(operator_norm(n2) == doctest::Approx(2.0).epsilon(1e-14));

    Philox g(23, 0);
    const Matrix a = random_matrix(16, g);
    const auto sv = svd_values(a);
    double sum_sq = 0;
    for (std::size_t i = 1; i < sv.size(); ++i) CHECK(sv[i] <= sv[i - 1]);
    for (double s : sv) sum_sq += s * s;
    const double f2 = frobenius_norm(a) * frobenius_norm(a);
    CHECK(std::abs(sum_sq - f2) <= 1e-12 * f2);

    const Matrix q = qr_orthonormalize(random_matrix(12, g).leftCols(5));
    CHECK((q.adjoint() * q - Matrix::Identity(5, 5)).norm() <= 1e-12);
}

TEST_CASE("triangular solves") {
    Philox g(31, 0);
    Matrix t = random_matrix(8, g).triangularView<Eigen::Upper>();
    for (int i = 0; i < 8; ++i) t(i, i) += 3.0; // well conditioned
    const Matrix x = random_matrix(8, g);
    const Matrix b_left = t * x;
    CHECK((solve_upper_triangular(t, b_left) - x).norm() <= 1e-11 * x.norm());
    const Matrix b_right = x * t;
    CHECK((solve_upper_triangular_right(t, b_right) - x).norm() <= 1e-11 * x.norm());

    Matrix sing = t;
    sing(3, 3) = 0.0;
    CHECK_THROWS(solve_upper_triangular(sing, b_left));
}

TEST_CASE("sylvester_solve basics and residual contract") {
    // A = 0, B = I: Y = C
    Matrix a0 = Matrix::Zero(2, 2);
    Matrix b1 = Matrix::Identity(2, 2);
    Philox g(41, 0);
    Matrix c = random_matrix(2, g);
    CHECK((sylvester_solve(a0, b1, c) - c).norm() <= 1e-13 * c.norm());

    // scalar: 2y = 4
    Matrix sa(1, 1), sb(1, 1), sc(1, 1);
    sa(0, 0) = 0.0;
    sb(0, 0) = 2.0;
    sc(0, 0) = 4.0;
    CHECK(std::abs(sylvester_solve(sa, sb, sc)(0, 0) - 2.0) <= 1e-14);

    // random nilpotent A (4x4 strict upper), invertible B
    for (int rep = 0; rep < 10; ++rep) {
        Matrix a = Matrix::Zero(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) a(i, j) = g.complex_gaussian();
        Matrix b = random_matrix(6, g, 0.3);
        for (int i = 0; i < 6; ++i) b(i, i) += Complex(2.0, 0.5);
        Matrix rhs(4, 6);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 6; ++j) rhs(i, j) = g.complex_gaussian();
        const Matrix y = sylvester_solve(a, b, rhs);
        const double resid = (y * b - a * y - rhs).norm();
        CHECK(resid <= 1e-10 * ((a.norm() + b.norm()) * y.norm()));
    }

    // overlapping spectra must throw
    Matrix one(1, 1);
    one(0, 0) = 1.0;
    CHECK_THROWS_WITH_AS(static_cast<void>(sylvester_solve(one, one, one)),
                         doctest::Contains("non-unique"), std::runtime_error);
}
