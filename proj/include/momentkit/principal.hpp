#pragma once

#include "momentkit/positivity.hpp"

#include <variant>

namespace momentkit {

enum class PrincipalKind { Lower, Upper };

// Polynomial whose roots are the atoms of the principal measure on [a, b].
Polynomial principal_polynomial(const std::vector<Scalar>& s, const Scalar& a, const Scalar& b, PrincipalKind k);

AtomicMeasure principal_compact(const std::vector<Scalar>& s, const Scalar& a, const Scalar& b, PrincipalKind k,
                                const Context& ctx = default_context());

// Minimal measures of an even-length ray sequence form a one-parameter family
// indexed by x = s_{-1} above the threshold (see backward.hpp: psi).
struct PsiFamily {
  std::vector<Scalar> s;
};

Polynomial minimal_polynomial_ray(const std::vector<Scalar>& s);        // n odd
Polynomial minimal_polynomial_half_open(const std::vector<Scalar>& s);  // any n

std::variant<AtomicMeasure, PsiFamily> minimal_measure_ray(const std::vector<Scalar>& s,
                                                           const Context& ctx = default_context());
AtomicMeasure minimal_measure_half_open(const std::vector<Scalar>& s, const Context& ctx = default_context());

// Measure on the roots of Q in [lo, hi] reproducing s; Q must split there.
AtomicMeasure measure_on_roots(const Polynomial& q, const std::vector<Scalar>& s, const Scalar& lo,
                               const Scalar& hi, const Context& ctx = default_context());

// Integral of 1/t against the measure carried by the roots of Q that matches
// s: -P(0)/Q(0) with P(0) = sum_{j>=1} q_j s_{j-1}. Exact even for
// irrational atoms.
Scalar reciprocal_integral(const Polynomial& q, const std::vector<Scalar>& s);

}  // namespace momentkit
