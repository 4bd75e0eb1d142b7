#include "dtlab/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace dtlab {

std::string to_string(BoundProvenance p) {
    switch (p) {
        case BoundProvenance::lemma1_sharp: return "lemma1_sharp";
        case BoundProvenance::lemma1_weak: return "lemma1_weak";
        case BoundProvenance::unza_chain: return "unza_chain";
        case BoundProvenance::nza_chain: return "nza_chain";
    }
    return "?";
}

namespace {

// Builds (1+x)^(-1/2) from log(x) = log(coef) + 2 log(num) - 2 log(den) - log(mass).
// The direct form is used while 1+x is comfortably representable; beyond
// x = 1e12 the asymptotic x^(-1/2) is exact to ~5e-13 relative and never
// overflows, which the example sweeps (2^n-sized ratios) require.
AngleBound make_bound(double coef, double num, double den, double mass, BoundProvenance prov) {
    const double log_x = std::log(coef) + 2.0 * (std::log(num) - std::log(den)) - std::log(mass);
    double cos_lower, log_cos;
    if (log_x < 27.6) { // x < ~1e12
        const double x = coef * (num / den) * (num / den) / mass;
        cos_lower = 1.0 / std::sqrt(1.0 + x);
        log_cos = -0.5 * std::log1p(x);
    } else {
        log_cos = -0.5 * log_x;
        cos_lower = std::exp(log_cos);
    }
    const double angle = std::acos(std::min(1.0, cos_lower));
    return AngleBound{cos_lower, angle, log_cos, prov};
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string("bounds: ") + name + " must be positive and finite");
    }
}

} // namespace

AngleBound lemma1_cos_lower(double s, double c, double t) {
    require_positive(s, "s");
    require_positive(c, "c");
    if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("bounds: t must lie in (0,1)");
    return make_bound(1.0, s, c, std::max(t, 1.0 - t), BoundProvenance::lemma1_sharp);
}

AngleBound lemma1_cos_weak(double s, double c) {
    require_positive(s, "s");
    require_positive(c, "c");
    return make_bound(2.0, s, c, 1.0, BoundProvenance::lemma1_weak);
}

AngleBound unza_chain_cos(double d, double c, double m, double t) {
    require_positive(d, "d");
    require_positive(c, "c");
    require_positive(m, "m");
    require_positive(t, "t");
    if (m + t > 1.0 + 1e-12) throw std::invalid_argument("bounds: m + t exceeds 1 (not a probability mass)");
    return make_bound(4.0, d, c, m + t, BoundProvenance::unza_chain);
}

AngleBound nza_chain_cos(double d, double c, double t) {
    require_positive(d, "d");
    require_positive(c, "c");
    require_positive(t, "t");
    if (t > 1.0 + 1e-12) throw std::invalid_argument("bounds: t exceeds 1");
    return make_bound(2.0, d, c, t, BoundProvenance::nza_chain);
}

} // namespace dtlab
