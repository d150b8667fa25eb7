#pragma once

#include "momentkit/principal.hpp"

#include <utility>

namespace momentkit {

struct Threshold {
  Scalar value;
  bool exact = true;
  std::string method;  // "minimal", "limit"
  int last_q = 0;      // final b = 2^q for limits
};

struct ExtremalBounds {
  Scalar t_lo, t_hi;
  AtomicMeasure lo_measure, hi_measure;
};

// inf / sup of the reciprocal integral over representing measures on [a, b].
ExtremalBounds t_T_compact(const std::vector<Scalar>& s, const Scalar& a, const Scalar& b,
                           const Context& ctx = default_context());

// inf over (0, inf). Exact for odd n; a Richardson-accelerated limit of
// t_{a,b} over b = 2^q for even n.
Threshold t_inf(const std::vector<Scalar>& s, const Context& ctx = default_context());

// inf over (0, 1]; always exact.
Threshold t_one(const std::vector<Scalar>& s, const Context& ctx = default_context());

Threshold threshold(const std::vector<Scalar>& s, const Domain& d, const Context& ctx = default_context());

// An interval [a, b] with T_{a,b}(s) > target.
std::pair<Scalar, Scalar> T_unbounded_witness(const std::vector<Scalar>& s, const Scalar& target,
                                              const Context& ctx = default_context());

}  // namespace momentkit
