#include "dtlab/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dtlab {

std::string to_string(DStrategy s) {
    switch (s) {
        case DStrategy::min_gap: return "min_gap";
        case DStrategy::tail_radius: return "tail_radius";
        case DStrategy::custom: return "custom";
    }
    return "?";
}

std::string to_string(Trend t) {
    switch (t) {
        case Trend::tends_to_zero: return "tends_to_zero";
        case Trend::bounded_away: return "bounded_away";
        case Trend::undetermined: return "undetermined";
    }
    return "?";
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::fails_NZA: return "fails_NZA";
        case Verdict::fails_UNZA: return "fails_UNZA";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Criterion sweeps
// ---------------------------------------------------------------------------

namespace {

enum class SeqKind { unza, nza };

std::vector<CriterionTrace> build_sequence(const AtomicMeasure& mu, double c,
                                           const StrategySpec& strategy, int n_lo, int n_hi,
                                           SeqKind kind) {
    if (mu.atoms.size() < 2)
        throw std::invalid_argument("criterion sweep: measure needs at least 2 atoms");
    if (n_lo < 1 || n_hi < n_lo || static_cast<std::size_t>(n_hi) > mu.atoms.size())
        throw std::out_of_range("criterion sweep: bad index range");
    if (strategy.kind == DStrategy::custom &&
        strategy.custom_d.size() != static_cast<std::size_t>(n_hi - n_lo + 1))
        throw std::invalid_argument("criterion sweep: custom d list length mismatch");

    std::vector<CriterionTrace> out;
    out.reserve(static_cast<std::size_t>(n_hi - n_lo + 1));

    for (int n = n_lo; n <= n_hi; ++n) {
        CriterionTrace tr;
        tr.n = n;
        tr.a_n = mu.atoms[static_cast<std::size_t>(n - 1)].location;
        tr.t_n = mu.atoms[static_cast<std::size_t>(n - 1)].mass;

        const double gap = nearest_support_gap(mu, n);
        switch (strategy.kind) {
            case DStrategy::min_gap: tr.d_n = gap; break;
            case DStrategy::tail_radius: tr.d_n = tail_cover_radius(mu, n); break;
            case DStrategy::custom:
                tr.d_n = strategy.custom_d[static_cast<std::size_t>(n - n_lo)];
                break;
        }
        if (tr.d_n < gap)
            throw std::invalid_argument("criterion sweep: d_n below the nearest support gap at n=" +
                                        std::to_string(n) + " (m_n = 0)");

        tr.m_n = mass_in(mu, RegionSpec::punctured_ball(tr.a_n, tr.d_n));
        tr.ratio_unza_lo = tr.d_n * tr.d_n / (tr.m_n.hi + tr.t_n);
        tr.ratio_unza_hi = tr.d_n * tr.d_n / (tr.m_n.lo + tr.t_n);
        tr.ratio_nza = tr.d_n * tr.d_n / tr.t_n;
        // chain bound stays valid for the smallest consistent m
        const double m_lo = std::max(tr.m_n.lo, std::numeric_limits<double>::min());
        tr.chain_cos = kind == SeqKind::unza
                           ? unza_chain_cos(tr.d_n, c, m_lo, tr.t_n).cos_lower
                           : nza_chain_cos(tr.d_n, c, tr.t_n).cos_lower;
        out.push_back(tr);
    }
    return out;
}

} // namespace

std::vector<CriterionTrace> unza_sequence(const AtomicMeasure& mu, double c,
                                          const StrategySpec& strategy, int n_lo, int n_hi) {
    return build_sequence(mu, c, strategy, n_lo, n_hi, SeqKind::unza);
}

std::vector<CriterionTrace> nza_sequence(const AtomicMeasure& mu, double c,
                                         const StrategySpec& strategy, int n_lo, int n_hi) {
    return build_sequence(mu, c, strategy, n_lo, n_hi, SeqKind::nza);
}

// ---------------------------------------------------------------------------
// Theorem 2 check
// ---------------------------------------------------------------------------

Theorem2Call check_theorem2(const AtomicMeasure& mu, double tol) {
    // accumulation candidates: the analytic points plus every continuous support
    std::vector<Complex> points = mu.accumulation_points;
    for (const auto& a : mu.atoms) {
        for (const auto& p : points) {
            if (std::abs(a.location - p) <= tol)
                return Theorem2Call{true, a.location, "atom within tol of accumulation point"};
        }
        for (const auto& c : mu.continuous) {
            const double delta = std::abs(a.location - c.center);
            const double dist = c.profile == RadialProfile::circle_uniform
                                    ? std::abs(delta - c.r_out)
                                    : std::max({0.0, delta - c.r_out, c.r_in - delta});
            if (dist <= tol)
                return Theorem2Call{true, a.location, "atom within tol of a continuous support"};
        }
    }
    if (points.empty() && mu.continuous.empty())
        return Theorem2Call{false, std::nullopt, "finite support"};
    std::ostringstream os;
    if (!points.empty()) {
        os << "accumulation point (" << points.front().real() << "," << points.front().imag()
           << ") carries no atom";
    } else {
        os << "no atom meets the continuous support";
    }
    return Theorem2Call{false, std::nullopt, os.str()};
}

// ---------------------------------------------------------------------------
// Subsequence selector
// ---------------------------------------------------------------------------

namespace {

double arg_2pi(const Complex& z) {
    const double a = std::arg(z);
    return a < 0.0 ? a + 2.0 * M_PI : a;
}

} // namespace

SubsequenceSelection select_nza_subsequence(const std::vector<AtomWithGap>& atoms, Complex limit) {
    if (atoms.size() < 2)
        throw std::invalid_argument("select_nza_subsequence: need at least 2 atoms");

    // numeric accumulation check: the trailing quarter must sit well inside
    // the overall radius around the limit
    double max_all = 0.0, max_tail = 0.0;
    const std::size_t tail_from = atoms.size() - std::max<std::size_t>(1, atoms.size() / 4);
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const double r = std::abs(atoms[i].a - limit);
        max_all = std::max(max_all, r);
        if (i >= tail_from) max_tail = std::max(max_tail, r);
    }
    if (max_all == 0.0 || max_tail > 0.25 * max_all)
        throw std::invalid_argument("select_nza_subsequence: atoms do not accumulate at limit");

    // six fixed sectors of width pi/3; keep the best-populated one
    const double sector_width = M_PI / 3.0;
    int counts[6] = {0, 0, 0, 0, 0, 0};
    for (const auto& at : atoms) {
        const Complex b = at.a - limit;
        if (std::abs(b) == 0.0) continue; // an atom at the limit is never selectable
        counts[static_cast<int>(arg_2pi(b) / sector_width) % 6]++;
    }
    int sector = 0;
    for (int s = 1; s < 6; ++s)
        if (counts[s] > counts[sector]) sector = s;
    if (counts[sector] == 0)
        throw std::invalid_argument(
            "select_nza_subsequence: no sector contains infinitely many atoms within range");
    const double rotation = -sector * sector_width;
    const Complex rot = std::polar(1.0, rotation);

    // nearest-neighbor distances: the safe shrink target keeping m_n > 0
    std::vector<double> nn(atoms.size(), std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < atoms.size(); ++i)
        for (std::size_t j = 0; j < atoms.size(); ++j)
            if (i != j) nn[i] = std::min(nn[i], std::abs(atoms[i].a - atoms[j].a));

    SubsequenceSelection sel;
    sel.rotation = rotation;

    double last_mod = std::numeric_limits<double>::infinity();
    double last_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const Complex b = atoms[i].a - limit;
        const double mod = std::abs(b);
        if (mod == 0.0) continue;
        const double theta = arg_2pi(b);
        if (static_cast<int>(theta / sector_width) % 6 != sector) continue;
        if (!(mod < last_mod - (sel.selected.empty() ? 0.0 : last_d))) continue;

        // shrink d as far as the nearest neighbor allows, if the chain needs it
        double d = atoms[i].d;
        const double ceiling = std::min(mod, last_d) * (1.0 - 1e-12);
        if (d >= ceiling) d = std::min(d, std::max(nn[i], 0.0));
        if (!(d > 0.0) || d >= ceiling) continue; // cannot make this atom admissible

        sel.selected.push_back(static_cast<int>(i) + 1);
        sel.set_a.push_back(atoms[i].a);
        sel.set_b.push_back({atoms[i].a, d});
        sel.d_selected.push_back(d);
        last_mod = mod;
        last_d = d;
    }

    if (sel.selected.size() < 2)
        throw std::invalid_argument("select_nza_subsequence: selection collapsed (fewer than 2 atoms)");

    // re-assert every invariant pairwise on the output
    const std::size_t k = sel.selected.size();
    for (std::size_t i = 0; i < k; ++i) {
        const Complex bi = (sel.set_a[i] - limit) * rot;
        const double mi = std::abs(bi);
        if (!(sel.d_selected[i] < mi))
            throw std::logic_error("select_nza_subsequence: d_n >= |a_n| after selection");
        const double th = arg_2pi(bi);
        if (!(th <= sector_width * (1.0 + 1e-12) || th >= 2.0 * M_PI - 1e-12))
            throw std::logic_error("select_nza_subsequence: rotated argument outside sector");
        for (std::size_t j = i + 1; j < k; ++j) {
            const Complex bj = (sel.set_a[j] - limit) * rot;
            const double mj = std::abs(bj);
            if (!(mj < mi)) throw std::logic_error("select_nza_subsequence: moduli not decreasing");
            if (!(mi - mj > sel.d_selected[i]))
                throw std::logic_error("select_nza_subsequence: |a_n|-|a_{n+k}| <= d_n");
            if (!(sel.d_selected[j] < sel.d_selected[i]))
                throw std::logic_error("select_nza_subsequence: d not strictly decreasing");
            if (!(std::abs(sel.set_a[i] - sel.set_a[j]) > sel.d_selected[i]))
                throw std::logic_error("select_nza_subsequence: |a_n - a_{n+k}| <= d_n");
        }
    }
    // A and B disjoint: no selected atom falls in any selected open ball
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j) continue;
            const double dist = std::abs(sel.set_a[i] - sel.set_b[j].center);
            if (dist > 0.0 && dist < sel.set_b[j].radius)
                throw std::logic_error("select_nza_subsequence: A intersects B");
        }
    }
    return sel;
}

// ---------------------------------------------------------------------------
// Example 3 f_n analysis
// ---------------------------------------------------------------------------

namespace {

// log of (1/(2n^2)) f_n(x)^2 with f_n(x) = ((n-x)/x) 2^(x/2); valid on (0, n)
double log_case_bound(int n, double x) {
    const double nd = static_cast<double>(n);
    return -std::log(2.0) - 2.0 * std::log(nd) +
           2.0 * (std::log(nd - x) - std::log(x) + 0.5 * x * std::log(2.0));
}

} // namespace

Example3Analysis example3_min_bound(int n) {
    if (n < 2) throw std::invalid_argument("example3_min_bound: n must be >= 2");
    Example3Analysis out;
    out.n = n;

    const double nd = static_cast<double>(n);
    const double ln2 = std::log(2.0);
    out.log_bound_k_eq_n =
        (nd + 1.0) * ln2 - std::log(3.0) - 2.0 * std::log(nd) - 2.0 * std::log(nd + 1.0);

    const double disc = nd * nd - 8.0 * nd / ln2;
    if (disc >= 0.0) {
        const double q = std::sqrt(disc);
        out.r_n = (nd - q) / 2.0;
        out.s_n = (nd + q) / 2.0;
    }

    // discrete minimum: endpoints, the integers around r_n, and the k = n case
    std::vector<int> candidates{1, n - 1, n};
    if (out.r_n) {
        const int lo = static_cast<int>(std::floor(*out.r_n));
        candidates.push_back(std::clamp(lo, 1, n - 1));
        candidates.push_back(std::clamp(lo + 1, 1, n - 1));
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    double best_log = std::numeric_limits<double>::infinity();
    int best_k = 0;
    for (int k : candidates) {
        if (k < 1 || k > n) continue;
        const double lb = (k == n) ? out.log_bound_k_eq_n : log_case_bound(n, k);
        if (lb < best_log) {
            best_log = lb;
            best_k = k;
        }
    }
    out.k_star = best_k;
    out.log_min_bound = best_log;
    out.min_bound = std::exp(best_log);

    out.value_at_x1 = std::exp(log_case_bound(n, 1.0));
    out.log_value_at_nm1 = log_case_bound(n, nd - 1.0);
    if (out.r_n) {
        out.value_at_rn = std::exp(log_case_bound(n, *out.r_n));
        out.log_value_at_sn = log_case_bound(n, *out.s_n);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Trend rules and the verdict
// ---------------------------------------------------------------------------

namespace {

// Inference rules are deliberately explicit: a finite sweep can only declare
// a limit under a stated rule.

// Monotone-envelope fit: the suffix-max envelope must not grow from the
// first quarter of the range to the last (pointwise monotonicity is too
// strict; m_n jumps as atoms cross the ball boundary).
bool envelope_not_increasing(const std::vector<double>& v) {
    if (v.size() < 8) return false;
    std::vector<double> suffix(v.size());
    double m = 0.0;
    for (std::size_t i = v.size(); i-- > 0;) {
        m = std::max(m, v[i]);
        suffix[i] = m;
    }
    const std::size_t q1 = v.size() / 4;
    const std::size_t q3 = (3 * v.size()) / 4;
    return suffix[q3] <= suffix[q1] * (1.0 + 1e-9);
}

// Running max over dyadic index blocks decays by >= 2x per block across >= 4
// consecutive block transitions ending at the last complete block.
bool dyadic_halving(const std::vector<int>& ns, const std::vector<double>& v) {
    if (ns.empty()) return false;
    std::vector<double> block_max;
    int block = -1;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        int b = 0;
        while ((1 << (b + 1)) <= ns[i]) ++b;
        if (b != block) {
            block = b;
            block_max.push_back(v[i]);
        } else {
            block_max.back() = std::max(block_max.back(), v[i]);
        }
    }
    if (block_max.size() < 5) return false;
    for (std::size_t j = block_max.size() - 4; j < block_max.size(); ++j)
        if (!(block_max[j] <= 0.5 * block_max[j - 1])) return false;
    return true;
}

// Running min stopped decreasing: min over the second half is no lower than
// (almost) the min over the first half.
bool suffix_min_stable(const std::vector<double>& v) {
    if (v.size() < 8) return false;
    const std::size_t mid = v.size() / 2;
    double first = std::numeric_limits<double>::infinity();
    double second = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < mid; ++i) first = std::min(first, v[i]);
    for (std::size_t i = mid; i < v.size(); ++i) second = std::min(second, v[i]);
    return first > 0.0 && second >= 0.999 * first;
}

struct Attachment {
    enum class Kind { none, to_zero, floor, conflicted } kind = Kind::none;
    std::function<double(int)> rate; ///< dominating curve when kind == to_zero (may be empty)
    std::string label;
};

Attachment family_attachment(const AtomicMeasure& mu, SeqKind seq, DStrategy strat) {
    Attachment a;
    if (mu.family == FamilyTag::example1 && seq == SeqKind::nza && strat == DStrategy::min_gap) {
        const double p = mu.family_p;
        const double cp = mu.atoms.front().mass; // t_1 = C_p exactly
        if (p < 4.0) {
            a.kind = Attachment::Kind::to_zero;
            a.rate = [p, cp](int n) { return std::pow(static_cast<double>(n), p - 4.0) / cp; };
            a.label = "example1 rate n^(p-4)/C_p with p < 4";
        }
    } else if (mu.family == FamilyTag::example2 && seq == SeqKind::unza &&
               strat == DStrategy::tail_radius) {
        const double c = 6.0 / (M_PI * M_PI);
        a.kind = Attachment::Kind::to_zero;
        a.rate = [c](int n) {
            const double l = 1.0 + std::log(static_cast<double>(n));
            return l * l / (c * n);
        };
        a.label = "example2 rate (1+log n)^2/(C n)";
    } else if (mu.family == FamilyTag::example2 && seq == SeqKind::nza) {
        a.kind = Attachment::Kind::conflicted;
        a.label = "example2 stated gap formula conflicts with numeric gaps";
    } else if (mu.family == FamilyTag::example3 && seq == SeqKind::unza) {
        a.kind = Attachment::Kind::floor;
        a.label = "example3 per-case f_n minimum stays above a positive floor";
    }
    return a;
}

TrendCall detect_trend(const std::vector<CriterionTrace>& traces, SeqKind seq,
                       const Attachment& att) {
    TrendCall call;
    std::vector<int> ns;
    std::vector<double> upper, lower;
    ns.reserve(traces.size());
    for (const auto& t : traces) {
        ns.push_back(t.n);
        upper.push_back(seq == SeqKind::unza ? t.ratio_unza_hi : t.ratio_nza);
        lower.push_back(seq == SeqKind::unza ? t.ratio_unza_lo : t.ratio_nza);
    }
    call.inf_estimate = *std::min_element(upper.begin(), upper.end());

    switch (att.kind) {
        case Attachment::Kind::conflicted:
            call.trend = Trend::undetermined;
            call.rule = att.label + "; no trend called";
            return call;
        case Attachment::Kind::floor:
            call.trend = Trend::bounded_away;
            call.rule = att.label;
            return call;
        case Attachment::Kind::to_zero: {
            if (!envelope_not_increasing(upper)) {
                call.trend = Trend::undetermined;
                call.rule = "analytic rate tends to zero but the data envelope grows";
                return call;
            }
            if (att.rate) {
                for (std::size_t i = 0; i < ns.size(); ++i) {
                    if (upper[i] > att.rate(ns[i]) * (1.0 + 1e-9)) {
                        call.trend = Trend::undetermined;
                        call.rule = "data exceeds the analytic rate at n=" + std::to_string(ns[i]);
                        return call;
                    }
                }
            }
            call.trend = Trend::tends_to_zero;
            call.rule = att.label + "; monotone envelope and rate dominance hold on the range";
            return call;
        }
        case Attachment::Kind::none:
            break;
    }

    if (dyadic_halving(ns, upper)) {
        call.trend = Trend::tends_to_zero;
        call.rule = "dyadic block maxima halve over >= 4 consecutive blocks";
    } else if (suffix_min_stable(lower)) {
        call.trend = Trend::bounded_away;
        call.rule = "running min stabilized above a positive floor";
    } else {
        call.trend = Trend::undetermined;
        call.rule = "no inference rule fired on the computed range";
    }
    return call;
}

} // namespace

HypothesisReport classify(const AtomicMeasure& mu, double c, const ClassifyOptions& opt) {
    mu.validate();
    if (!(c > 0.0)) throw std::invalid_argument("classify: c must be positive");

    HypothesisReport rep;
    rep.c = c;
    rep.theorem2 = check_theorem2(mu, opt.theorem2_tol);

    const int n_atoms = static_cast<int>(mu.atoms.size());
    int n_hi = opt.n_hi > 0 ? opt.n_hi : std::min(n_atoms - 1, 1000);
    n_hi = std::min(n_hi, n_atoms);
    const int n_lo = std::max(1, opt.n_lo);

    rep.unza_strategy = to_string(opt.unza_strategy.kind);
    rep.nza_strategy = to_string(opt.nza_strategy.kind);
    rep.unza_traces = unza_sequence(mu, c, opt.unza_strategy, n_lo, n_hi);
    rep.nza_traces = nza_sequence(mu, c, opt.nza_strategy, n_lo, n_hi);

    rep.unza = detect_trend(rep.unza_traces, SeqKind::unza,
                            family_attachment(mu, SeqKind::unza, opt.unza_strategy.kind));
    rep.nza = detect_trend(rep.nza_traces, SeqKind::nza,
                           family_attachment(mu, SeqKind::nza, opt.nza_strategy.kind));

    if (mu.family == FamilyTag::example2 && n_atoms >= 11) {
        // the family's stated forward gap log(n+1)/(n+1) disagrees with the
        // numeric gap log(n+1)/(n+1)^2; report both, resolve neither
        const int nref = 10;
        const double numeric =
            std::abs(mu.atoms[static_cast<std::size_t>(nref)].location -
                     mu.atoms[static_cast<std::size_t>(nref - 1)].location);
        const double stated = std::log(nref + 1.0) / (nref + 1.0);
        std::ostringstream os;
        os << "example2 forward gap at n=" << nref << ": stated formula log(n+1)/(n+1) gives "
           << stated << " but the atoms give " << numeric
           << " (= log(n+1)/(n+1)^2); mismatch factor ~" << stated / numeric
           << ". The NZA trend is left undetermined instead of resolving the conflict.";
        rep.warnings.push_back({"gap_discrepancy", os.str()});
    }

    if (rep.theorem2.applies) {
        rep.verdict = Verdict::fails_NZA;
        rep.witness = "atom at an accumulation point of the support (theorem2 check)";
    } else if (rep.nza.trend == Trend::tends_to_zero) {
        rep.verdict = Verdict::fails_NZA;
        rep.witness = "nza ratio sequence d_n^2/t_n tends to zero (" + rep.nza.rule + ")";
    } else if (rep.unza.trend == Trend::tends_to_zero) {
        rep.verdict = Verdict::fails_UNZA;
        rep.witness = "unza ratio sequence d_n^2/(m_n+t_n) tends to zero (" + rep.unza.rule + ")";
    } else {
        rep.verdict = Verdict::inconclusive;
        rep.witness = "no criterion fired on the computed range";
    }
    rep.unza_failure_implied = rep.verdict == Verdict::fails_NZA;

    if (rep.verdict == Verdict::inconclusive &&
        (rep.unza.trend == Trend::undetermined || rep.nza.trend == Trend::undetermined)) {
        rep.warnings.push_back(
            {"trend_undetermined", "at least one ratio trend could not be called on the range"});
    }
    return rep;
}

} // namespace dtlab
