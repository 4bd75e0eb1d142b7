#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dtlab/bounds.hpp"
#include "dtlab/measure.hpp"

namespace dtlab {

enum class DStrategy { min_gap, tail_radius, custom };

std::string to_string(DStrategy s);

struct StrategySpec {
    DStrategy kind = DStrategy::min_gap;
    std::vector<double> custom_d; ///< aligned with the trace range when kind == custom
};

/// One row of the criterion sweep at atom index n (1-based).
struct CriterionTrace {
    int n = 0;
    Complex a_n;
    double t_n = 0;
    double d_n = 0;
    MassInterval m_n;          ///< punctured-ball mass; interval under tail uncertainty
    double ratio_unza_lo = 0;  ///< d^2/(m_hi + t)
    double ratio_unza_hi = 0;  ///< d^2/(m_lo + t); the proven upper bound
    double ratio_nza = 0;      ///< d^2/t, exact
    double chain_cos = 0;      ///< chain lower bound for this sequence kind
};

enum class Trend { tends_to_zero, bounded_away, undetermined };
std::string to_string(Trend t);

struct TrendCall {
    Trend trend = Trend::undetermined;
    double inf_estimate = 0; ///< min of the proven ratio upper bounds over the range
    std::string rule;        ///< inference rule that produced the call
};

struct Theorem2Call {
    bool applies = false;
    std::optional<Complex> witness; ///< the atom sitting at an accumulation point
    std::string reason;
};

enum class Verdict { fails_NZA, fails_UNZA, inconclusive };
std::string to_string(Verdict v);

struct Warning {
    std::string kind;
    std::string detail;
};

struct HypothesisReport {
    Verdict verdict = Verdict::inconclusive;
    bool unza_failure_implied = false; ///< set with fails_NZA (UNZA implies NZA)
    Theorem2Call theorem2;
    TrendCall unza, nza;
    std::string unza_strategy, nza_strategy;
    std::vector<CriterionTrace> unza_traces, nza_traces;
    std::vector<Warning> warnings;
    std::string witness; ///< evidence behind the verdict
    double c = 0;
};

/// Atom with its chosen ball radius, the selector's working unit.
struct AtomWithGap {
    Complex a;
    double t = 0;
    double d = 0;
};

struct SubsequenceSelection {
    std::vector<int> selected; ///< 1-based indices into the input list
    double rotation = 0;       ///< radians applied after translating by the limit
    std::vector<Complex> set_a;
    struct Ball {
        Complex center;
        double radius;
    };
    std::vector<Ball> set_b;        ///< open punctured balls around selected atoms
    std::vector<double> d_selected; ///< final (possibly shrunk) radii
};

/// f_n study for the third family: per-case bounds at every split point k,
/// the critical points r_n, s_n of f_n(x) = ((n-x)/x) 2^(x/2), and the four
/// limit-relevant values. All 2^(x/2) work happens in log space (n up to 1e4
/// would overflow otherwise); unbounded branches are reported as logs.
struct Example3Analysis {
    int n = 0;
    int k_star = 0;
    double min_bound = 0;     ///< min over k in {1..n}; always <= ((n-1)/n)^2
    double log_min_bound = 0; ///< natural log of the same
    std::optional<double> r_n, s_n; ///< real when n >= ceil(8/ln 2) = 12
    double value_at_x1 = 0;
    std::optional<double> value_at_rn;
    std::optional<double> log_value_at_sn;
    double log_value_at_nm1 = 0;
    double log_bound_k_eq_n = 0;
};

struct ClassifyOptions {
    int n_lo = 1;
    int n_hi = 0; ///< 0: auto = min(#atoms - 1, 1000)
    StrategySpec unza_strategy{DStrategy::tail_radius, {}};
    StrategySpec nza_strategy{DStrategy::min_gap, {}};
    double theorem2_tol = 1e-9;
};

/// Does some atom sit at an accumulation point of the support? Exact for
/// generator families (analytic accumulation set); always "finite support"
/// for plain finite atom lists.
Theorem2Call check_theorem2(const AtomicMeasure& mu, double tol);

std::vector<CriterionTrace> unza_sequence(const AtomicMeasure& mu, double c,
                                          const StrategySpec& strategy, int n_lo, int n_hi);
std::vector<CriterionTrace> nza_sequence(const AtomicMeasure& mu, double c,
                                         const StrategySpec& strategy, int n_lo, int n_hi);

/// Realizes the sector / decreasing-moduli / gap-chain subsequence step:
/// picks a rotation and subsequence so that moduli strictly decrease,
/// arguments fit in a width-pi/3 sector, |a_{n+1}| < |a_n| - d_n, the d's
/// strictly decrease, and the atom set A is disjoint from the ball union B.
/// Every invariant is re-asserted pairwise on the output.
SubsequenceSelection select_nza_subsequence(const std::vector<AtomWithGap>& atoms, Complex limit);

Example3Analysis example3_min_bound(int n);

HypothesisReport classify(const AtomicMeasure& mu, double c, const ClassifyOptions& opt = {});

} // namespace dtlab
