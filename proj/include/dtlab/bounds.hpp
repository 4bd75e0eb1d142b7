#pragma once

#include <string>

namespace dtlab {

enum class BoundProvenance { lemma1_sharp, lemma1_weak, unza_chain, nza_chain };

/// A closed-form lower bound on the cosine of the angle between two
/// invariant subspaces, together with the matching angle upper bound.
struct AngleBound {
    double cos_lower;   ///< in (0,1]; may underflow to 0 only at e+-308 scales
    double angle_upper; ///< arccos(cos_lower), radians in [0, pi/2)
    double log_cos;     ///< natural log of cos_lower, always finite
    BoundProvenance provenance;
};

std::string to_string(BoundProvenance p);

/// (1 + s^2 / (c^2 max(t, 1-t)))^(-1/2); requires s,c > 0, t in (0,1).
AngleBound lemma1_cos_lower(double s, double c, double t);

/// (1 + 2 s^2 / c^2)^(-1/2); requires s,c > 0.
AngleBound lemma1_cos_weak(double s, double c);

/// (1 + 4 d^2 / (c^2 (m + t)))^(-1/2); requires d,c,m,t > 0 and m + t <= 1.
AngleBound unza_chain_cos(double d, double c, double m, double t);

/// (1 + 2 d^2 / (c^2 t))^(-1/2); requires d,c,t > 0 and t <= 1.
AngleBound nza_chain_cos(double d, double c, double t);

} // namespace dtlab
