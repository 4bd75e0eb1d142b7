#include "dtlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dtlab {

namespace {

constexpr long long kSeriesHorizon = 1000000; // partial-sum length for family constants
constexpr long long kMaxTailSteps = 2000000;  // tail enumeration cap in sample_point

double sq(double x) { return x * x; }

} // namespace

// ---------------------------------------------------------------------------
// RegionSpec
// ---------------------------------------------------------------------------

RegionSpec RegionSpec::singleton(Complex p) { return RegionSpec{SingletonRegion{p}}; }

RegionSpec RegionSpec::punctured_ball(Complex center, double radius) {
    if (!(radius >= 0.0) || !std::isfinite(radius))
        throw std::invalid_argument("region: punctured ball radius must be finite and nonnegative");
    return RegionSpec{PuncturedBallRegion{center, radius}};
}

RegionSpec RegionSpec::closed_annulus(Complex center, double r_in, double r_out) {
    if (!(r_in >= 0.0) || !(r_out >= r_in) || !std::isfinite(r_out))
        throw std::invalid_argument("region: annulus radii must satisfy 0 <= r_in <= r_out < inf");
    return RegionSpec{ClosedAnnulusRegion{center, r_in, r_out}};
}

RegionSpec RegionSpec::complement(RegionSpec inner) {
    return RegionSpec{ComplementRegion{std::make_shared<const RegionSpec>(std::move(inner))}};
}

RegionSpec RegionSpec::union_of(std::vector<RegionSpec> members) {
    if (members.empty()) throw std::invalid_argument("region: empty union");
    return RegionSpec{UnionRegion{std::move(members)}};
}

bool RegionSpec::contains(const Complex& z) const {
    return std::visit(
        [&](const auto& r) -> bool {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, SingletonRegion>) {
                return z.real() == r.point.real() && z.imag() == r.point.imag();
            } else if constexpr (std::is_same_v<T, PuncturedBallRegion>) {
                const double dr = std::abs(z - r.center);
                return dr > 0.0 && dr <= r.radius;
            } else if constexpr (std::is_same_v<T, ClosedAnnulusRegion>) {
                const double dr = std::abs(z - r.center);
                return r.r_in <= dr && dr <= r.r_out;
            } else if constexpr (std::is_same_v<T, ComplementRegion>) {
                return !r.inner->contains(z);
            } else {
                for (const auto& m : r.members)
                    if (m.contains(z)) return true;
                return false;
            }
        },
        node);
}

double RegionSpec::boundary_distance(const Complex& z) const {
    return std::visit(
        [&](const auto& r) -> double {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, SingletonRegion>) {
                return std::abs(z - r.point);
            } else if constexpr (std::is_same_v<T, PuncturedBallRegion>) {
                const double dr = std::abs(z - r.center);
                return std::min(dr, std::abs(r.radius - dr));
            } else if constexpr (std::is_same_v<T, ClosedAnnulusRegion>) {
                const double dr = std::abs(z - r.center);
                const double outer = std::abs(r.r_out - dr);
                return r.r_in > 0.0 ? std::min(std::abs(r.r_in - dr), outer) : outer;
            } else if constexpr (std::is_same_v<T, ComplementRegion>) {
                return r.inner->boundary_distance(z);
            } else {
                double best = std::numeric_limits<double>::infinity();
                for (const auto& m : r.members) best = std::min(best, m.boundary_distance(z));
                return best;
            }
        },
        node);
}

// ---------------------------------------------------------------------------
// Enclosures: sets known to contain some mass whose exact positions are not
// enumerated (truncated tails, continuous supports). Mass queries resolve
// them by proving the whole enclosure inside or outside a region.
// ---------------------------------------------------------------------------

namespace {

struct SegEnclosure { // real-axis interval, open flags mark unattained ends
    double lo, hi;
    bool lo_open, hi_open;
};

struct RingEnclosure { // closed annulus (or circle) support of a RadialComponent
    Complex center;
    double r_in, r_out;
    bool circle;
};

double seg_dist_min(const SegEnclosure& s, const Complex& a) {
    const double dx = std::max({0.0, s.lo - a.real(), a.real() - s.hi});
    return std::hypot(dx, a.imag());
}

double seg_dist_max(const SegEnclosure& s, const Complex& a) {
    const double dx = std::max(a.real() - s.lo, s.hi - a.real());
    return std::hypot(dx, a.imag());
}

bool seg_may_contain(const SegEnclosure& s, const Complex& p) {
    if (p.imag() != 0.0) return false;
    const double x = p.real();
    const bool above_lo = x > s.lo || (x == s.lo && !s.lo_open);
    const bool below_hi = x < s.hi || (x == s.hi && !s.hi_open);
    return above_lo && below_hi;
}

double ring_dist_min(const RingEnclosure& e, const Complex& a) {
    const double delta = std::abs(a - e.center);
    if (e.circle) return std::abs(delta - e.r_out);
    return std::max({0.0, delta - e.r_out, e.r_in - delta});
}

double ring_dist_max(const RingEnclosure& e, const Complex& a) {
    return std::abs(a - e.center) + e.r_out;
}

bool ring_may_contain(const RingEnclosure& e, const Complex& p) {
    const double delta = std::abs(p - e.center);
    if (e.circle) return delta == e.r_out;
    return e.r_in <= delta && delta <= e.r_out;
}

struct Enclosure {
    std::variant<SegEnclosure, RingEnclosure> shape;
    double dist_min(const Complex& a) const {
        return std::holds_alternative<SegEnclosure>(shape)
                   ? seg_dist_min(std::get<SegEnclosure>(shape), a)
                   : ring_dist_min(std::get<RingEnclosure>(shape), a);
    }
    double dist_max(const Complex& a) const {
        return std::holds_alternative<SegEnclosure>(shape)
                   ? seg_dist_max(std::get<SegEnclosure>(shape), a)
                   : ring_dist_max(std::get<RingEnclosure>(shape), a);
    }
    bool may_contain(const Complex& p) const {
        return std::holds_alternative<SegEnclosure>(shape)
                   ? seg_may_contain(std::get<SegEnclosure>(shape), p)
                   : ring_may_contain(std::get<RingEnclosure>(shape), p);
    }
};

bool region_disjoint(const RegionSpec& r, const Enclosure& e);

// Sufficient (conservative) proof that the whole enclosure lies inside r.
bool region_covers(const RegionSpec& r, const Enclosure& e) {
    return std::visit(
        [&](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, SingletonRegion>) {
                return false;
            } else if constexpr (std::is_same_v<T, PuncturedBallRegion>) {
                return e.dist_max(n.center) <= n.radius && !e.may_contain(n.center);
            } else if constexpr (std::is_same_v<T, ClosedAnnulusRegion>) {
                return e.dist_min(n.center) >= n.r_in && e.dist_max(n.center) <= n.r_out;
            } else if constexpr (std::is_same_v<T, ComplementRegion>) {
                return region_disjoint(*n.inner, e);
            } else {
                for (const auto& m : n.members)
                    if (region_covers(m, e)) return true;
                return false;
            }
        },
        r.node);
}

bool region_disjoint(const RegionSpec& r, const Enclosure& e) {
    return std::visit(
        [&](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, SingletonRegion>) {
                return !e.may_contain(n.point);
            } else if constexpr (std::is_same_v<T, PuncturedBallRegion>) {
                return e.dist_min(n.center) > n.radius;
            } else if constexpr (std::is_same_v<T, ClosedAnnulusRegion>) {
                const double lo = e.dist_min(n.center), hi = e.dist_max(n.center);
                return hi < n.r_in || lo > n.r_out;
            } else if constexpr (std::is_same_v<T, ComplementRegion>) {
                return region_covers(*n.inner, e);
            } else {
                for (const auto& m : n.members)
                    if (!region_disjoint(m, e)) return false;
                return true;
            }
        },
        r.node);
}

// ---------------------------------------------------------------------------
// Radially symmetric resolution of continuous components.
// ---------------------------------------------------------------------------

bool same_point(const Complex& a, const Complex& b) {
    return a.real() == b.real() && a.imag() == b.imag();
}

// True when every node of the region tree is radially symmetric about
// `center` (singletons excepted: they carry no mass for these profiles).
bool radially_decidable(const RegionSpec& r, const Complex& center) {
    return std::visit(
        [&](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, SingletonRegion>) {
                return true;
            } else if constexpr (std::is_same_v<T, PuncturedBallRegion>) {
                return same_point(n.center, center);
            } else if constexpr (std::is_same_v<T, ClosedAnnulusRegion>) {
                return same_point(n.center, center);
            } else if constexpr (std::is_same_v<T, ComplementRegion>) {
                return radially_decidable(*n.inner, center);
            } else {
                for (const auto& m : n.members)
                    if (!radially_decidable(m, center)) return false;
                return true;
            }
        },
        r.node);
}

// Membership of the circle of radius `rad` about `center`. Exact boundary
// semantics; singleton nodes count as empty (zero arc/area mass).
bool radial_member(const RegionSpec& r, double rad) {
    return std::visit(
        [&](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, SingletonRegion>) {
                return false;
            } else if constexpr (std::is_same_v<T, PuncturedBallRegion>) {
                return rad > 0.0 && rad <= n.radius;
            } else if constexpr (std::is_same_v<T, ClosedAnnulusRegion>) {
                return n.r_in <= rad && rad <= n.r_out;
            } else if constexpr (std::is_same_v<T, ComplementRegion>) {
                return !radial_member(*n.inner, rad);
            } else {
                for (const auto& m : n.members)
                    if (radial_member(m, rad)) return true;
                return false;
            }
        },
        r.node);
}

void collect_radii(const RegionSpec& r, std::vector<double>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, PuncturedBallRegion>) {
                out.push_back(n.radius);
            } else if constexpr (std::is_same_v<T, ClosedAnnulusRegion>) {
                out.push_back(n.r_in);
                out.push_back(n.r_out);
            } else if constexpr (std::is_same_v<T, ComplementRegion>) {
                collect_radii(*n.inner, out);
            } else if constexpr (std::is_same_v<T, UnionRegion>) {
                for (const auto& m : n.members) collect_radii(m, out);
            }
        },
        r.node);
}

// Sub-intervals of the radial support on which membership is constant are
// integrated in the r^2 (area) measure; circle profiles test their single
// radius with exact boundary comparisons.
MassInterval component_mass_in(const RadialComponent& rc, const RegionSpec& region) {
    if (radially_decidable(region, rc.center)) {
        if (rc.profile == RadialProfile::circle_uniform) {
            return radial_member(region, rc.r_out) ? MassInterval{rc.mass, rc.mass}
                                                   : MassInterval{0.0, 0.0};
        }
        std::vector<double> bps{rc.r_in, rc.r_out};
        collect_radii(region, bps);
        std::sort(bps.begin(), bps.end());
        double covered = 0.0;
        double prev = rc.r_in;
        for (double b : bps) {
            const double hi = std::min(std::max(b, rc.r_in), rc.r_out);
            if (hi > prev) {
                if (radial_member(region, 0.5 * (prev + hi))) covered += sq(hi) - sq(prev);
                prev = hi;
            }
        }
        if (rc.r_out > prev && radial_member(region, 0.5 * (prev + rc.r_out)))
            covered += sq(rc.r_out) - sq(prev);
        const double frac = covered / (sq(rc.r_out) - sq(rc.r_in));
        const double m = rc.mass * std::clamp(frac, 0.0, 1.0);
        return MassInterval{m, m};
    }

    const Enclosure enc{RingEnclosure{rc.center, rc.r_in, rc.r_out,
                                      rc.profile == RadialProfile::circle_uniform}};
    if (region_covers(region, enc)) return MassInterval{rc.mass, rc.mass};
    if (region_disjoint(region, enc)) return MassInterval{0.0, 0.0};
    return MassInterval{0.0, rc.mass};
}

Enclosure tail_enclosure(const TailSegment& seg) {
    return Enclosure{SegEnclosure{seg.lo, seg.hi, seg.lo_open, seg.hi_open}};
}

} // namespace

// ---------------------------------------------------------------------------
// Measure queries
// ---------------------------------------------------------------------------

double MassInterval::value() const {
    if (!exact()) throw std::runtime_error("mass query unresolved: interval [" +
                                           std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return lo;
}

double AtomicMeasure::listed_mass() const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.mass;
    for (const auto& c : continuous) s += c.mass;
    return s;
}

void AtomicMeasure::validate() const {
    for (const auto& a : atoms) {
        if (!(a.mass > 0.0) || !std::isfinite(a.mass))
            throw std::invalid_argument("measure: atom mass must be positive and finite");
        if (!std::isfinite(a.location.real()) || !std::isfinite(a.location.imag()))
            throw std::invalid_argument("measure: atom location must be finite");
    }
    std::vector<Complex> locs;
    locs.reserve(atoms.size());
    for (const auto& a : atoms) locs.push_back(a.location);
    std::sort(locs.begin(), locs.end(), [](const Complex& a, const Complex& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    for (std::size_t i = 1; i < locs.size(); ++i)
        if (same_point(locs[i - 1], locs[i]))
            throw std::invalid_argument("measure: atom locations must be pairwise distinct");
    for (const auto& c : continuous) {
        if (!(c.mass > 0.0)) throw std::invalid_argument("measure: component mass must be positive");
        if (c.profile == RadialProfile::annulus_uniform) {
            if (!(c.r_in >= 0.0 && c.r_in < c.r_out))
                throw std::invalid_argument("measure: annulus component needs 0 <= r_in < r_out");
        } else {
            if (!(c.r_in == c.r_out && c.r_out > 0.0))
                throw std::invalid_argument("measure: circle component needs r_in == r_out > 0");
        }
    }
    double total = listed_mass();
    if (truncation) {
        if (truncation->tail_mass < 0.0 || truncation->n_max < 1)
            throw std::invalid_argument("measure: invalid truncation record");
        total += truncation->tail_mass;
    }
    if (total < 1.0 - eps_mass || total > 1.0 + 1e-12)
        throw std::invalid_argument("measure: total mass " + std::to_string(total) +
                                    " outside [1 - eps_mass, 1]");
}

MassInterval mass_in(const AtomicMeasure& mu, const RegionSpec& region) {
    double lo = 0.0, hi = 0.0;
    for (const auto& a : mu.atoms) {
        if (region.contains(a.location)) {
            lo += a.mass;
            hi += a.mass;
        }
    }
    for (const auto& c : mu.continuous) {
        const MassInterval m = component_mass_in(c, region);
        lo += m.lo;
        hi += m.hi;
    }
    if (mu.truncation && mu.truncation->tail_mass > 0.0) {
        if (!mu.tail)
            throw std::logic_error("measure: truncated measure lacks a tail enclosure");
        const Enclosure enc = tail_enclosure(*mu.tail);
        if (region_covers(region, enc)) {
            lo += mu.truncation->tail_mass;
            hi += mu.truncation->tail_mass;
        } else if (!region_disjoint(region, enc)) {
            hi += mu.truncation->tail_mass;
        }
    }
    return MassInterval{lo, hi};
}

double nearest_support_gap(const AtomicMeasure& mu, int n) {
    if (n < 1 || static_cast<std::size_t>(n) > mu.atoms.size())
        throw std::out_of_range("nearest_support_gap: atom index out of range");
    const Complex a = mu.atoms[static_cast<std::size_t>(n - 1)].location;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < mu.atoms.size(); ++k) {
        if (k == static_cast<std::size_t>(n - 1)) continue;
        best = std::min(best, std::abs(mu.atoms[k].location - a));
    }
    for (const auto& c : mu.continuous) {
        const RingEnclosure ring{c.center, c.r_in, c.r_out,
                                 c.profile == RadialProfile::circle_uniform};
        best = std::min(best, ring_dist_min(ring, a));
    }
    if (mu.tail && mu.truncation && mu.truncation->tail_mass > 0.0) {
        // only attained endpoints are known support points
        if (!mu.tail->lo_open) best = std::min(best, std::abs(a - Complex(mu.tail->lo, 0.0)));
        if (!mu.tail->hi_open) best = std::min(best, std::abs(a - Complex(mu.tail->hi, 0.0)));
    }
    if (!std::isfinite(best) || best == 0.0)
        throw std::runtime_error("nearest_support_gap: no admissible d_n");
    return best;
}

double tail_cover_radius(const AtomicMeasure& mu, int n) {
    if (n < 1 || static_cast<std::size_t>(n) > mu.atoms.size())
        throw std::out_of_range("tail_cover_radius: atom index out of range");
    const Complex a = mu.atoms[static_cast<std::size_t>(n - 1)].location;
    double best = 0.0;
    for (std::size_t k = static_cast<std::size_t>(n); k < mu.atoms.size(); ++k)
        best = std::max(best, std::abs(mu.atoms[k].location - a));
    if (mu.tail && mu.truncation && mu.truncation->tail_mass > 0.0)
        best = std::max(best, seg_dist_max(SegEnclosure{mu.tail->lo, mu.tail->hi,
                                                        mu.tail->lo_open, mu.tail->hi_open}, a));
    if (best == 0.0)
        throw std::runtime_error("tail_cover_radius: no remaining support beyond atom " +
                                 std::to_string(n));
    return best;
}

AtomicMeasure renormalized_restriction(const AtomicMeasure& mu, const RegionSpec& region) {
    const MassInterval total = mass_in(mu, region);
    if (!total.exact())
        throw std::runtime_error("renormalized_restriction: region mass unresolved (tail or "
                                 "component straddles the region)");
    const double m = total.value();
    if (!(m > 0.0)) throw std::runtime_error("renormalized_restriction: region has zero mass");

    double full = mu.listed_mass();
    if (mu.truncation) full += mu.truncation->tail_mass;
    if (std::abs(m - full) <= 1e-12) return mu; // identity restriction

    AtomicMeasure out;
    const double scale = 1.0 / m;
    for (const auto& a : mu.atoms)
        if (region.contains(a.location)) out.atoms.push_back({a.location, a.mass * scale});

    for (const auto& c : mu.continuous) {
        if (radially_decidable(region, c.center)) {
            if (c.profile == RadialProfile::circle_uniform) {
                if (radial_member(region, c.r_out)) {
                    RadialComponent kept = c;
                    kept.mass *= scale;
                    out.continuous.push_back(kept);
                }
                continue;
            }
            std::vector<double> bps{c.r_in, c.r_out};
            collect_radii(region, bps);
            std::sort(bps.begin(), bps.end());
            const double density = c.mass / (sq(c.r_out) - sq(c.r_in));
            double prev = c.r_in;
            auto emit = [&](double alpha, double beta) {
                if (beta > alpha && radial_member(region, 0.5 * (alpha + beta))) {
                    out.continuous.push_back({c.center, alpha, beta,
                                              density * (sq(beta) - sq(alpha)) * scale,
                                              RadialProfile::annulus_uniform});
                }
            };
            for (double b : bps) {
                const double hiv = std::min(std::max(b, c.r_in), c.r_out);
                emit(prev, hiv);
                prev = std::max(prev, hiv);
            }
            emit(prev, c.r_out);
            continue;
        }
        const Enclosure enc{RingEnclosure{c.center, c.r_in, c.r_out,
                                          c.profile == RadialProfile::circle_uniform}};
        if (region_covers(region, enc)) {
            RadialComponent kept = c;
            kept.mass *= scale;
            out.continuous.push_back(kept);
        } else if (!region_disjoint(region, enc)) {
            throw std::runtime_error("renormalized_restriction: continuous component straddles "
                                     "the region and cannot be split analytically");
        }
    }

    if (mu.truncation && mu.truncation->tail_mass > 0.0) {
        const Enclosure enc = tail_enclosure(*mu.tail);
        if (region_covers(region, enc)) {
            Truncation t = *mu.truncation;
            t.tail_mass *= scale;
            t.generator_weight *= scale;
            out.truncation = t;
            out.tail = mu.tail;
        } else if (!region_disjoint(region, enc)) {
            throw std::runtime_error("renormalized_restriction: unresolved tail");
        }
    }

    for (const auto& p : mu.accumulation_points)
        if (region.contains(p)) out.accumulation_points.push_back(p);

    out.validate();
    return out;
}

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

std::string to_string(FamilyTag tag) {
    switch (tag) {
        case FamilyTag::custom: return "custom";
        case FamilyTag::example1: return "example1";
        case FamilyTag::example2: return "example2";
        case FamilyTag::example3: return "example3";
    }
    return "?";
}

// Euler-Maclaurin remainder for sum_{k>m} k^-p; error O(p^5 m^{-p-5}).
static double em_tail(double p, double m) {
    const double mp = std::pow(m, -p);
    return m * mp / (p - 1.0) - 0.5 * mp + p * mp / (12.0 * m) -
           p * (p + 1.0) * (p + 2.0) * mp / (720.0 * m * m * m);
}

double zeta_tail(double p, long long m) {
    if (!(p > 1.0)) throw std::invalid_argument("zeta_tail: requires p > 1");
    double s = 0.0;
    const long long horizon = std::max(m, kSeriesHorizon);
    for (long long k = horizon; k > m; --k) s += std::pow(static_cast<double>(k), -p);
    return s + em_tail(p, static_cast<double>(horizon));
}

double zeta_sum(double p) {
    if (!(p > 1.0)) throw std::invalid_argument("zeta_sum: requires p > 1 (mass diverges)");
    double s = 0.0;
    for (long long k = kSeriesHorizon; k >= 1; --k) s += std::pow(static_cast<double>(k), -p);
    return s + em_tail(p, static_cast<double>(kSeriesHorizon));
}

Bracket log_weight_limit() {
    double s = 0.0;
    for (long long k = kSeriesHorizon; k >= 2; --k) {
        const double kd = static_cast<double>(k);
        s += std::log(kd) / (kd * kd);
    }
    // log(x)/x^2 decreases for x >= 2, so integral brackets hold at 10^6
    const double m = static_cast<double>(kSeriesHorizon);
    const double lo = (1.0 + std::log(m + 1.0)) / (m + 1.0);
    const double hi = (1.0 + std::log(m)) / m;
    return Bracket{s + lo, s + hi};
}

Complex family_location(FamilyTag tag, double /*p*/, int k) {
    if (k < 1) throw std::out_of_range("family_location: k must be >= 1");
    switch (tag) {
        case FamilyTag::example1:
        case FamilyTag::example3:
            return Complex(1.0 / static_cast<double>(k), 0.0);
        case FamilyTag::example2: {
            double a = 0.0;
            for (int j = 2; j <= k; ++j) {
                const double jd = static_cast<double>(j);
                a += std::log(jd) / (jd * jd);
            }
            return Complex(a, 0.0);
        }
        default:
            throw std::invalid_argument("family_location: not a generator family");
    }
}

AtomicMeasure make_family(FamilyTag tag, int n_max, double p) {
    if (n_max < 2) throw std::invalid_argument("make_family: n_max must be >= 2");
    AtomicMeasure m;
    m.family = tag;
    m.family_p = p;

    switch (tag) {
        case FamilyTag::example1: {
            if (!(p > 1.0)) throw std::invalid_argument("make_family: example1 needs p > 1 "
                                                        "(mass diverges otherwise)");
            const double cp = 1.0 / zeta_sum(p);
            for (int n = 1; n <= n_max; ++n)
                m.atoms.push_back({Complex(1.0 / n, 0.0), cp * std::pow(static_cast<double>(n), -p)});
            m.truncation = Truncation{n_max, cp * zeta_tail(p, n_max), tag, p, 1.0};
            m.tail = TailSegment{0.0, 1.0 / (n_max + 1.0), true, false};
            m.accumulation_points = {Complex(0.0, 0.0)};
            break;
        }
        case FamilyTag::example2: {
            const double c = 6.0 / (M_PI * M_PI);
            double a = 0.0;
            for (int n = 1; n <= n_max; ++n) {
                if (n >= 2) {
                    const double nd = static_cast<double>(n);
                    a += std::log(nd) / (nd * nd);
                }
                m.atoms.push_back({Complex(a, 0.0), c / (static_cast<double>(n) * n)});
            }
            m.truncation = Truncation{n_max, c * zeta_tail(2.0, n_max), tag, 0.0, 1.0};
            const double next = a + std::log(n_max + 1.0) / sq(n_max + 1.0);
            const Bracket limit = log_weight_limit();
            m.tail = TailSegment{next, limit.hi, false, true};
            m.accumulation_points = {Complex(0.5 * (limit.lo + limit.hi), 0.0)};
            break;
        }
        case FamilyTag::example3: {
            if (n_max > 1070)
                throw std::invalid_argument("make_family: example3 atom masses underflow double "
                                            "precision beyond n = 1070");
            for (int n = 1; n <= n_max; ++n)
                m.atoms.push_back({Complex(1.0 / n, 0.0), std::ldexp(1.0, -n)});
            m.truncation = Truncation{n_max, std::ldexp(1.0, -n_max), tag, 0.0, 1.0};
            m.tail = TailSegment{0.0, 1.0 / (n_max + 1.0), true, false};
            m.accumulation_points = {Complex(0.0, 0.0)};
            break;
        }
        default:
            throw std::invalid_argument("make_family: tag must be example1|example2|example3");
    }
    m.validate();
    return m;
}

Complex sample_point(const AtomicMeasure& mu, double u_select, double u_radius, double u_angle) {
    double cum = 0.0;
    for (const auto& a : mu.atoms) {
        cum += a.mass;
        if (u_select < cum) return a.location;
    }
    for (const auto& c : mu.continuous) {
        cum += c.mass;
        if (u_select < cum) {
            const double theta = 2.0 * M_PI * u_angle;
            double r = c.r_out;
            if (c.profile == RadialProfile::annulus_uniform)
                r = std::sqrt(sq(c.r_in) + u_radius * (sq(c.r_out) - sq(c.r_in)));
            return c.center + Complex(r * std::cos(theta), r * std::sin(theta));
        }
    }
    if (mu.truncation && mu.truncation->tail_mass > 0.0) {
        const Truncation& t = *mu.truncation;
        if (t.generator == FamilyTag::example1 || t.generator == FamilyTag::example2 ||
            t.generator == FamilyTag::example3) {
            const double norm = (t.generator == FamilyTag::example1)
                                    ? 1.0 / zeta_sum(t.generator_p)
                                    : (t.generator == FamilyTag::example2 ? 6.0 / (M_PI * M_PI) : 1.0);
            double loc = 0.0;
            if (t.generator == FamilyTag::example2) {
                for (int j = 2; j <= t.n_max; ++j) {
                    const double jd = static_cast<double>(j);
                    loc += std::log(jd) / (jd * jd);
                }
            }
            for (long long k = t.n_max + 1; k <= t.n_max + kMaxTailSteps; ++k) {
                const double kd = static_cast<double>(k);
                double mass_k, loc_k;
                switch (t.generator) {
                    case FamilyTag::example1:
                        mass_k = t.generator_weight * norm * std::pow(kd, -t.generator_p);
                        loc_k = 1.0 / kd;
                        break;
                    case FamilyTag::example2:
                        loc += std::log(kd) / (kd * kd);
                        mass_k = t.generator_weight * norm / (kd * kd);
                        loc_k = loc;
                        break;
                    default: // example3
                        mass_k = t.generator_weight * std::ldexp(1.0, -static_cast<int>(k));
                        loc_k = 1.0 / kd;
                        break;
                }
                cum += mass_k;
                if (u_select < cum) return Complex(loc_k, 0.0);
            }
        }
        // enumeration cap reached (or non-generator tail): collapse to the
        // accumulation point; the displaced mass is below the cap's tail mass
        if (!mu.accumulation_points.empty()) return mu.accumulation_points.front();
    }
    if (!mu.atoms.empty()) return mu.atoms.back().location;
    if (!mu.continuous.empty()) {
        const auto& c = mu.continuous.back();
        return c.center + Complex(c.r_out, 0.0);
    }
    throw std::runtime_error("sample_point: empty measure");
}

AtomicMeasure scale_measure(AtomicMeasure mu, double w) {
    if (!(w > 0.0 && w <= 1.0)) throw std::invalid_argument("scale_measure: weight must be in (0,1]");
    for (auto& a : mu.atoms) a.mass *= w;
    for (auto& c : mu.continuous) c.mass *= w;
    if (mu.truncation) {
        mu.truncation->tail_mass *= w;
        mu.truncation->generator_weight *= w;
    }
    return mu;
}

AtomicMeasure mix_measures(const std::vector<AtomicMeasure>& parts) {
    AtomicMeasure out;
    for (const auto& p : parts) {
        out.atoms.insert(out.atoms.end(), p.atoms.begin(), p.atoms.end());
        out.continuous.insert(out.continuous.end(), p.continuous.begin(), p.continuous.end());
        if (p.truncation) {
            if (out.truncation)
                throw std::invalid_argument("mix_measures: at most one generator-backed part");
            out.truncation = p.truncation;
            out.tail = p.tail;
        }
        for (const auto& ap : p.accumulation_points) {
            bool seen = false;
            for (const auto& q : out.accumulation_points) seen = seen || same_point(q, ap);
            if (!seen) out.accumulation_points.push_back(ap);
        }
    }
    out.validate();
    return out;
}

AtomicMeasure with_extra_atom(const AtomicMeasure& mu, Complex location, double mass) {
    if (!(mass > 0.0 && mass < 1.0))
        throw std::invalid_argument("with_extra_atom: mass must be in (0,1)");
    AtomicMeasure out = scale_measure(mu, 1.0 - mass);
    out.atoms.push_back({location, mass});
    out.family = FamilyTag::custom; // closed-form masses no longer hold
    out.family_p = 0.0;
    out.accumulation_points = mu.accumulation_points;
    out.validate();
    return out;
}

} // namespace dtlab
