#include "dtlab/matmodel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dtlab {

namespace {

void fill_strict_upper(Matrix& z, double sd, Philox& rng) {
    const Eigen::Index n = z.rows();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) z(i, j) = sd * rng.complex_gaussian();
}

double arg01(const Complex& z) {
    const double a = std::arg(z);
    return a < 0.0 ? a + 2.0 * M_PI : a;
}

// Total order putting equal values adjacent and small moduli first.
bool diag_less(const Complex& a, const Complex& b) {
    const double ra = std::abs(a), rb = std::abs(b);
    if (ra != rb) return ra < rb;
    const double ta = arg01(a), tb = arg01(b);
    if (ta != tb) return ta < tb;
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

std::vector<Complex> sample_diagonal(const AtomicMeasure& mu, int n, DiagonalPolicy policy,
                                     Philox& rng) {
    std::vector<Complex> d;
    d.reserve(static_cast<std::size_t>(n));
    if (policy == DiagonalPolicy::quantile) {
        for (int j = 0; j < n; ++j) {
            const double u = (j + 0.5) / n;
            d.push_back(sample_point(mu, u, rng.uniform01(), rng.uniform01()));
        }
        std::sort(d.begin(), d.end(), diag_less);
    } else {
        for (int j = 0; j < n; ++j) {
            const double u = rng.uniform01();
            d.push_back(sample_point(mu, u, rng.uniform01(), rng.uniform01()));
        }
    }
    return d;
}

} // namespace

Matrix sample_dt_matrix(const DTModelParams& params, Philox& rng) {
    if (params.N < 2) throw std::invalid_argument("sample_dt_matrix: N must be >= 2");
    if (!(params.c > 0.0)) throw std::invalid_argument("sample_dt_matrix: c must be positive");
    const int n = params.N;
    Matrix z = Matrix::Zero(n, n);
    fill_strict_upper(z, params.c / std::sqrt(static_cast<double>(n)), rng);
    const auto d = sample_diagonal(params.measure, n, params.policy, rng);
    for (int j = 0; j < n; ++j) z(j, j) = d[static_cast<std::size_t>(j)];
    return z;
}

BlockModel sample_block_model(double t, const AtomicMeasure& annulus_measure, double c, int N,
                              std::uint64_t seed, std::uint64_t stream,
                              Orientation orientation, DiagonalPolicy policy) {
    if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("sample_block_model: t must be in (0,1)");
    if (!(c > 0.0)) throw std::invalid_argument("sample_block_model: c must be positive");
    if (N < 2) throw std::invalid_argument("sample_block_model: N must be >= 2");

    const int m = static_cast<int>(std::nearbyint(t * N)); // ties to even
    if (m < 1 || N - m < 1)
        throw std::invalid_argument("sample_block_model: degenerate block (t*N or (1-t)*N < 1)");

    Philox rng(seed, stream);
    const double sd = c / std::sqrt(static_cast<double>(N));

    BlockModel b;
    b.m = m;
    b.t = t;
    b.orientation = orientation;

    b.Z1 = Matrix::Zero(m, m);
    fill_strict_upper(b.Z1, sd, rng);

    const int k = N - m;
    b.Z2 = Matrix::Zero(k, k);
    fill_strict_upper(b.Z2, sd, rng);
    const auto diag = sample_diagonal(annulus_measure, k, policy, rng);
    double s_lo = std::numeric_limits<double>::infinity(), s_hi = 0.0;
    for (int j = 0; j < k; ++j) {
        b.Z2(j, j) = diag[static_cast<std::size_t>(j)];
        const double r = std::abs(diag[static_cast<std::size_t>(j)]);
        s_lo = std::min(s_lo, r);
        s_hi = std::max(s_hi, r);
    }
    if (s_lo <= 0.0)
        throw std::invalid_argument("sample_block_model: annulus measure put mass at 0 "
                                    "(needs support in A(s', s) with s' > 0)");
    b.s_prime = s_lo;
    b.s = s_hi;

    const int cr = orientation == Orientation::zero_first ? m : k;
    const int cc = orientation == Orientation::zero_first ? k : m;
    b.corner = Matrix(cr, cc);
    for (int i = 0; i < cr; ++i)
        for (int j = 0; j < cc; ++j) b.corner(i, j) = sd * rng.complex_gaussian();

    b.Z = Matrix::Zero(N, N);
    if (orientation == Orientation::zero_first) {
        b.Z.topLeftCorner(m, m) = b.Z1;
        b.Z.topRightCorner(m, k) = b.corner;
        b.Z.bottomRightCorner(k, k) = b.Z2;
    } else {
        b.Z.topLeftCorner(k, k) = b.Z2;
        b.Z.topRightCorner(k, m) = b.corner;
        b.Z.bottomRightCorner(m, m) = b.Z1;
    }
    return b;
}

Matrix compute_y_series(const BlockModel& block) {
    const int m = block.m;
    Matrix y, term;
    if (block.orientation == Orientation::zero_first) {
        // Y = sum_k Z1^k corner Z2^{-k-1}; Z1^m = 0 cuts the sum off exactly.
        term = solve_upper_triangular_right(block.Z2, block.corner);
        y = term;
        for (int k = 1; k < m; ++k) {
            term = block.Z1 * term;
            term = solve_upper_triangular_right(block.Z2, term);
            y += term;
            const double tn = term.norm();
            if (tn == 0.0 || tn <= 1e-18 * y.norm()) break; // below double resolution
        }
    } else {
        // Y = -sum_k Z2^{-k-1} corner Z1^k
        term = -solve_upper_triangular(block.Z2, block.corner);
        y = term;
        for (int k = 1; k < m; ++k) {
            term = solve_upper_triangular(block.Z2, Matrix(term * block.Z1));
            y += term;
            const double tn = term.norm();
            if (tn == 0.0 || tn <= 1e-18 * y.norm()) break;
        }
    }
    return y;
}

Matrix y_via_sylvester(const BlockModel& block) {
    return sylvester_solve(block.top(), block.bottom(), block.corner);
}

double sylvester_residual(const BlockModel& block, const Matrix& y) {
    const Matrix r = y * block.bottom() - block.top() * y - block.corner;
    const double scale = (block.top().norm() + block.bottom().norm()) * y.norm();
    return r.norm() / std::max(scale, std::numeric_limits<double>::min());
}

Matrix embed_corner_block(const Matrix& y, int split, int n) {
    if (split != y.rows() || split + y.cols() != n)
        throw std::invalid_argument("embed_corner_block: block shape inconsistent with split");
    Matrix e = Matrix::Zero(n, n);
    e.topRightCorner(y.rows(), y.cols()) = y;
    return e;
}

std::pair<Matrix, Matrix> build_similarity(const Matrix& y_embedded, int split) {
    const Eigen::Index n = y_embedded.rows();
    if (y_embedded.cols() != n) throw std::invalid_argument("build_similarity: Y must be square");
    if (split < 1 || split >= n) throw std::invalid_argument("build_similarity: bad split index");
    if (!y_embedded.bottomRows(n - split).isZero(0.0) ||
        !y_embedded.topLeftCorner(split, split).isZero(0.0))
        throw std::invalid_argument("build_similarity: Y not supported on the top-right block");
    const Matrix id = Matrix::Identity(n, n);
    return {id + y_embedded, id - y_embedded};
}

double verify_conjugation(const BlockModel& block, const Matrix& s, const Matrix& s_inv) {
    const int n = block.size();
    const int top = block.top_rows();
    Matrix d = Matrix::Zero(n, n);
    d.topLeftCorner(top, top) = block.top();
    d.bottomRightCorner(n - top, n - top) = block.bottom();
    return (s * d * s_inv - block.Z).norm() / block.Z.norm();
}

TraceValue tau(const Matrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("tau: matrix must be square");
    return TraceValue{a.trace() / static_cast<double>(a.rows())};
}

double tau_frob(const Matrix& a) {
    const double f = a.norm();
    return f * f / static_cast<double>(a.rows());
}

} // namespace dtlab
