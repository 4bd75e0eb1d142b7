#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dtlab/bounds.hpp"
#include "dtlab/matmodel.hpp"
#include "dtlab/measure.hpp"
#include "dtlab/numkernel.hpp"

namespace dtlab {

/// Eigenvalues closer than this to a region boundary are flagged and
/// classified inside (determinism at boundaries).
inline constexpr double tol_boundary = 1e-9;

struct SubspaceBasis {
    Matrix basis; ///< orthonormal columns
    RegionSpec region;
    int dim = 0;
};

struct AngleMeasurement {
    double cos_alpha = 0.0;                 ///< largest principal cosine
    std::vector<double> principal_cosines;  ///< nonincreasing
    AngleBound bound;                       ///< the applicable closed form
    bool satisfied = false;                 ///< cos_alpha >= bound.cos_lower - slack
};

/// Span of the Schur vectors for the eigenvalues inside the region.
/// dim = number of eigenvalues classified inside; boundary-close eigenvalues
/// are classified inside and a warning is appended when a sink is given.
SubspaceBasis spectral_subspace(const Matrix& z, const RegionSpec& region,
                                std::vector<std::string>* warnings = nullptr);

/// Principal cosines = singular values of U* V.
AngleMeasurement principal_cos(const SubspaceBasis& u, const SubspaceBasis& v,
                               const AngleBound& bound, double slack_add = 0.1);

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

struct Lemma1Config {
    double t = 0.5;
    double s_prime = 0.9;
    double s = 1.0;
    double c = 1.0;
    int N = 256;
    int trials = 50;
    std::uint64_t seed = 0;
    bool both_orientations = true;
    DiagonalPolicy policy = DiagonalPolicy::quantile;
    double slack_mult = 0.9; ///< multiplicative slack on mean checks
    double slack_add = 0.1;  ///< additive slack on per-trial/min checks
    /// Annulus part of the sampled measure; uniform-in-area on A(s', s) by default.
    std::optional<AtomicMeasure> annulus_measure;
};

struct Lemma1TrialRow {
    int trial = 0;
    Orientation orientation = Orientation::zero_first;
    int N = 0;
    double t = 0, c = 0, s_prime = 0, s = 0;
    int dim_zero = 0, dim_annulus = 0;
    double cos_alpha = 0;
    double bound_sharp = 0, bound_weak = 0;
    bool satisfied = false;
    // model-level trial record
    double sigma_max_y = 0, tau_frob_y = 0, tau_frob_z2inv = 0;
    double residual_conjugation = 0, y_route_gap = 0;
};

struct Lemma1Summary {
    int trials = 0, rows = 0;
    double mean_cos = 0, min_cos = 0;
    double bound_sharp = 0, bound_weak = 0;
    double satisfied_fraction = 0;
    double mean_tau_frob_y = 0, mean_tau_frob_z2inv = 0;
    double max_residual_conjugation = 0, max_y_route_gap = 0;
    double slack_mult = 0, slack_add = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> warnings;
};

struct Lemma1Report {
    std::vector<Lemma1TrialRow> rows;
    Lemma1Summary summary;
};

Lemma1Report lemma1_experiment(const Lemma1Config& cfg);

struct Theorem2Config {
    AtomicMeasure measure; ///< needs an atom at 0 and support accumulating there
    double c = 1.0;
    int N = 256;
    int trials = 20;
    std::uint64_t seed = 0;
    std::vector<double> schedule;  ///< outer radii s_n, typically decreasing
    double s_prime_ratio = 0.25;   ///< s'_n = ratio * s_n
    DiagonalPolicy policy = DiagonalPolicy::quantile;
    double slack_mult = 0.9;
    double slack_add = 0.1;
};

struct Theorem2TrialRow {
    int step = 0, trial = 0;
    double s_n = 0, s_prime_n = 0;
    double mass_bn = 0, t_tilde = 0, c_eff = 0;
    int dim_zero = 0, dim_annulus = 0;
    double cos_alpha = 0, bound_weak = 0;
    bool satisfied = false;
};

struct Theorem2StepSummary {
    int step = 0;
    double s_n = 0, s_prime_n = 0, mass_bn = 0, bound_weak = 0;
    double mean_cos = 0, min_cos = 0;
    bool skipped = false;
    std::string notice;
};

struct Theorem2Summary {
    std::vector<Theorem2StepSummary> steps;
    bool mean_cos_nondecreasing = false; ///< trend across executed steps
    double slack_mult = 0, slack_add = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> warnings;
};

struct Theorem2Report {
    std::vector<Theorem2TrialRow> rows;
    Theorem2Summary summary;
};

Theorem2Report theorem2_experiment(const Theorem2Config& cfg);

} // namespace dtlab
