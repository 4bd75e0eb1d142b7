#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace dtlab {

using Complex = std::complex<double>;

struct Atom {
    Complex location;
    double mass = 0.0; ///< in (0,1]
};

enum class RadialProfile { annulus_uniform, circle_uniform };

/// Radially uniform continuous piece: uniform in area on a closed annulus
/// (disk when r_in = 0), or uniform in arc length on a circle (r_in == r_out).
struct RadialComponent {
    Complex center;
    double r_in = 0.0;
    double r_out = 0.0;
    double mass = 0.0;
    RadialProfile profile = RadialProfile::annulus_uniform;
};

// ---------------------------------------------------------------------------
// Borel regions: the set shapes the criteria quantify over.
// Boundary conventions: punctured_ball is 0 < |z-a| <= d (closed outside,
// open at the puncture); closed_annulus is closed on both circles.
// ---------------------------------------------------------------------------

struct RegionSpec;

struct SingletonRegion { Complex point; };
struct PuncturedBallRegion { Complex center; double radius = 0.0; };
struct ClosedAnnulusRegion { Complex center; double r_in = 0.0; double r_out = 0.0; };
struct ComplementRegion { std::shared_ptr<const RegionSpec> inner; };
struct UnionRegion { std::vector<RegionSpec> members; };

struct RegionSpec {
    std::variant<SingletonRegion, PuncturedBallRegion, ClosedAnnulusRegion,
                 ComplementRegion, UnionRegion> node;

    bool contains(const Complex& z) const;

    /// Distance from z to the topological boundary of the region (used to
    /// flag eigenvalues that sit too close to a classification boundary).
    double boundary_distance(const Complex& z) const;

    static RegionSpec singleton(Complex p);
    static RegionSpec punctured_ball(Complex center, double radius);
    static RegionSpec closed_annulus(Complex center, double r_in, double r_out);
    static RegionSpec complement(RegionSpec inner);
    static RegionSpec union_of(std::vector<RegionSpec> members);
};

// ---------------------------------------------------------------------------
// Measures
// ---------------------------------------------------------------------------

enum class FamilyTag { custom, example1, example2, example3 };

std::string to_string(FamilyTag tag);

/// Real-axis interval known to contain every truncated-away tail atom.
/// Open flags mark unattained endpoints (e.g. the accumulation point itself).
struct TailSegment {
    double lo = 0.0, hi = 0.0;
    bool lo_open = false, hi_open = false;
};

/// Truncation record for generator-backed measures: the exact mass beyond
/// atom n_max plus enough generator identity to sample or enumerate the tail.
struct Truncation {
    int n_max = 0;
    double tail_mass = 0.0;
    FamilyTag generator = FamilyTag::custom;
    double generator_p = 0.0;
    double generator_weight = 1.0; ///< scaling applied when embedded in a mixture
};

struct AtomicMeasure {
    std::vector<Atom> atoms;
    std::vector<RadialComponent> continuous;
    FamilyTag family = FamilyTag::custom; ///< analytic-rate tag; custom once modified
    double family_p = 0.0;
    std::optional<Truncation> truncation;
    std::optional<TailSegment> tail;
    std::vector<Complex> accumulation_points; ///< analytically known accumulation points of supp

    double listed_mass() const;

    /// Checks the structural invariants: positive masses, pairwise distinct
    /// atoms, listed + tail mass within [1 - eps_mass, 1]. Throws on failure.
    void validate() const;
};

inline constexpr double eps_mass = 1e-9;

/// Mass of a region under a measure. Exact (lo == hi) whenever atoms,
/// continuous components and any truncated tail can be resolved against the
/// region; otherwise an honest interval, never a silent point value.
struct MassInterval {
    double lo = 0.0, hi = 0.0;
    bool exact() const { return lo == hi; }
    double value() const; ///< throws unless exact
};

MassInterval mass_in(const AtomicMeasure& mu, const RegionSpec& region);

/// Min distance from atom n (1-based index) to any other support point;
/// the smallest admissible d_n (closed ball boundary keeps m_n > 0 when the
/// nearest support point is an atom). Throws when no other support exists.
double nearest_support_gap(const AtomicMeasure& mu, int n);

/// Largest distance from atom n to the remaining support {a_k : k > n}
/// including the truncated tail; the tail-covering d_n choice.
double tail_cover_radius(const AtomicMeasure& mu, int n);

/// mu restricted to the region and rescaled to mass 1. Requires the region
/// mass to be exactly resolvable and positive.
AtomicMeasure renormalized_restriction(const AtomicMeasure& mu, const RegionSpec& region);

/// The worked families:
///   example1(p): C_p sum n^-p dirac(1/n), p > 1
///   example2:    C/n^2 dirac(a_n), a_n = sum_{k<=n} log(k)/k^2, C = 6/pi^2
///   example3:    2^-n dirac(1/n)
/// Atoms 1..n_max with closed-form masses; the truncation record carries the
/// exact tail mass and a tail enclosure segment.
AtomicMeasure make_family(FamilyTag tag, int n_max, double p = 0.0);

/// Location of family atom k (any k >= 1), independent of truncation.
Complex family_location(FamilyTag tag, double p, int k);

/// Inverse-CDF sampling: deterministic in (u_select, u_radius, u_angle).
/// Atoms are hit with probability equal to their mass; annulus components
/// uniform in area, circles uniform in arc length. Tail selections enumerate
/// the generator past n_max (capped; beyond the cap the accumulation point
/// is returned).
Complex sample_point(const AtomicMeasure& mu, double u_select, double u_radius, double u_angle);

/// Rescales all masses by w (0 < w <= 1); the result is no longer normalized
/// and is meant as a mixture ingredient.
AtomicMeasure scale_measure(AtomicMeasure mu, double w);

/// Sums pre-scaled parts into one measure; validates the result.
AtomicMeasure mix_measures(const std::vector<AtomicMeasure>& parts);

/// Adds an atom, rebalancing existing mass by (1 - mass). Keeps the analytic
/// accumulation points; drops the family rate tag.
AtomicMeasure with_extra_atom(const AtomicMeasure& mu, Complex location, double mass);

// Series evaluation used for the family constants (partial sums to 10^6 plus
// Euler-Maclaurin remainder; >= 12 significant digits for every p > 1).
double zeta_sum(double p);                 ///< sum_{k>=1} k^-p
double zeta_tail(double p, long long m);   ///< sum_{k>m} k^-p

struct Bracket { double lo = 0.0, hi = 0.0; };

/// L = sum_{k>=1} log(k)/k^2, bracketed by integral remainder bounds.
Bracket log_weight_limit();

} // namespace dtlab
