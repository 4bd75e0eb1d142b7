#pragma once

#include <cstdint>
#include <utility>

#include "dtlab/measure.hpp"
#include "dtlab/numkernel.hpp"
#include "dtlab/rng.hpp"

namespace dtlab {

enum class DiagonalPolicy { quantile, iid };

/// Which diagonal block leads in the assembled upper triangular model. Both
/// variants realize the same operator data; running both exercises the two
/// halves of the sharp max(t, 1-t) bound.
enum class Orientation { zero_first, annulus_first };

struct DTModelParams {
    AtomicMeasure measure;
    double c = 1.0;
    int N = 2;
    std::uint64_t seed = 0;
    DiagonalPolicy policy = DiagonalPolicy::quantile;
};

/// One sampled block decomposition
///   zero_first:    Z = [ Z1  corner ]      annulus_first: Z = [ Z2  corner ]
///                      [ 0   Z2     ]                         [ 0   Z1     ]
/// Z1 is the strictly upper (nilpotent) block modeling the Dirac mass at 0,
/// Z2 carries the annulus part on its diagonal, and the Gaussian corner
/// already includes the factor c.
struct BlockModel {
    Matrix Z;
    Matrix Z1;
    Matrix Z2;
    Matrix corner;
    int m = 0;       ///< rows of Z1 = round_half_even(t N)
    double t = 0.0;
    double s_prime = 0.0, s = 0.0; ///< annulus radii of the sampled measure (bookkeeping)
    Orientation orientation = Orientation::zero_first;

    int size() const { return static_cast<int>(Z.rows()); }
    int top_rows() const {
        return orientation == Orientation::zero_first ? m : size() - m;
    }
    const Matrix& top() const { return orientation == Orientation::zero_first ? Z1 : Z2; }
    const Matrix& bottom() const { return orientation == Orientation::zero_first ? Z2 : Z1; }
};

struct TraceValue {
    Complex value; ///< normalization: tau = (1/N) * matrix trace
};

/// N x N upper triangular sample: strictly upper entries iid complex Gaussian
/// with E|g|^2 = c^2/N; diagonal per policy (quantile: inverse-CDF at
/// midpoints (j-1/2)/N, sorted so equal values are contiguous; iid: plain
/// draws). Deterministic given the rng state.
Matrix sample_dt_matrix(const DTModelParams& params, Philox& rng);

BlockModel sample_block_model(double t, const AtomicMeasure& annulus_measure, double c, int N,
                              std::uint64_t seed, std::uint64_t stream = 0,
                              Orientation orientation = Orientation::zero_first,
                              DiagonalPolicy policy = DiagonalPolicy::quantile);

/// The intertwiner solving Y * bottom - top * Y = corner via the terminating
/// Neumann-type series (the nilpotent block cuts it off after m terms).
Matrix compute_y_series(const BlockModel& block);

/// Same Y through the independent Bartels-Stewart route.
Matrix y_via_sylvester(const BlockModel& block);

/// ||Y*bottom - top*Y - corner||_F relative to (||top||_F+||bottom||_F)||Y||_F.
double sylvester_residual(const BlockModel& block, const Matrix& y);

/// Places the corner-shaped block y into the top-right of an N x N zero matrix.
Matrix embed_corner_block(const Matrix& y, int split, int n);

/// S = I + Y, S^-1 = I - Y for block-supported Y (Y^2 = 0 structurally).
/// Throws unless y is supported on the top-right block given by `split`.
std::pair<Matrix, Matrix> build_similarity(const Matrix& y_embedded, int split);

/// ||S diag(top, bottom) S^-1 - Z||_F / ||Z||_F.
double verify_conjugation(const BlockModel& block, const Matrix& s, const Matrix& s_inv);

TraceValue tau(const Matrix& a);

/// tau(A* A) = ||A||_F^2 / rows, the matrix stand-in for the L^2 norm squared.
double tau_frob(const Matrix& a);

} // namespace dtlab
