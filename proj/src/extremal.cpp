#include "momentkit/extremal.hpp"

#include <algorithm>
#include <cmath>

namespace momentkit {

namespace {

Scalar integral(const AtomicMeasure& mu, const Polynomial& q, const std::vector<Scalar>& s) {
  return mu.exact ? moment(mu, -1) : reciprocal_integral(q, s);
}

// t_{a,b} and T_{a,b} straight from the principal polynomials.
std::pair<Scalar, Scalar> extremes_by_polynomial(const std::vector<Scalar>& s, const Scalar& a, const Scalar& b) {
  Scalar lo = reciprocal_integral(principal_polynomial(s, a, b, PrincipalKind::Lower), s);
  Scalar hi = reciprocal_integral(principal_polynomial(s, a, b, PrincipalKind::Upper), s);
  if (lo > hi) std::swap(lo, hi);
  return {lo, hi};
}

}  // namespace

ExtremalBounds t_T_compact(const std::vector<Scalar>& s, const Scalar& a, const Scalar& b, const Context& ctx) {
  if (a <= 0 || a >= b) throw Error(ErrorCode::DomainError, "need 0 < a < b");
  if (!classify_compact(s, a, b, ctx).strict())
    throw Error(ErrorCode::NotStrictlyPositive, "sequence is not strictly positive on the interval");
  Polynomial ql = principal_polynomial(s, a, b, PrincipalKind::Lower);
  Polynomial qu = principal_polynomial(s, a, b, PrincipalKind::Upper);
  AtomicMeasure ml = measure_on_roots(ql, s, a, b, ctx);
  AtomicMeasure mu = measure_on_roots(qu, s, a, b, ctx);
  Scalar il = integral(ml, ql, s), iu = integral(mu, qu, s);
  ExtremalBounds r;
  if (il <= iu) {
    r = {il, iu, ml, mu};
  } else {
    r = {iu, il, mu, ml};
  }
  return r;
}

Threshold t_inf(const std::vector<Scalar>& s, const Context& ctx) {
  if (!classify_ray(s, ctx).strict())
    throw Error(ErrorCode::NotStrictlyPositive, "sequence is not strictly positive on (0,inf)");
  int n = int(s.size()) - 1;
  if (n % 2 == 1) return {reciprocal_integral(minimal_polynomial_ray(s), s), true, "minimal", 0};

  const double tol = 1e-9;
  const int q_lo = 4, q_hi = 40;
  std::optional<Scalar> prev_t, prev_r;
  int prev_q = -1, streak = 0;
  for (int q = q_lo; q <= q_hi; ++q) {
    Scalar a = pow2(-q), b = pow2(q);
    if (!classify_compact(s, a, b, ctx).strict()) {
      prev_t.reset();
      prev_r.reset();
      streak = 0;
      continue;
    }
    Scalar t = extremes_by_polynomial(s, a, b).first;
    if (prev_t && prev_q == q - 1) {
      Scalar r = 2 * t - *prev_t;  // error is O(1/b)
      if (prev_r) {
        double diff = std::fabs(to_double(r - *prev_r));
        double scale = std::fabs(to_double(r));
        if (diff <= tol * scale)
          ++streak;
        else
          streak = 0;
        if (streak >= 3) return {r, false, "limit", q};
      }
      prev_r = r;
    }
    prev_t = t;
    prev_q = q;
  }
  throw Error(ErrorCode::ConvergenceError, "t_inf limit did not settle by b = 2^" + std::to_string(q_hi));
}

Threshold t_one(const std::vector<Scalar>& s, const Context& ctx) {
  PositivityVerdict v = classify_half_open(s, ctx);
  if (v.cls == Positivity::SingularlyPositive)
    return {moment(to_atomic(determinate_measure(s, Domain::half_open(), ctx)), -1), true, "determinate", 0};
  if (!v.strict()) throw Error(ErrorCode::NotStrictlyPositive, "sequence is not positive on (0,1]");
  return {reciprocal_integral(minimal_polynomial_half_open(s), s), true, "minimal", 0};
}

Threshold threshold(const std::vector<Scalar>& s, const Domain& d, const Context& ctx) {
  if (d.kind == Domain::Kind::Ray) return t_inf(s, ctx);
  if (d.kind == Domain::Kind::HalfOpen) return t_one(s, ctx);
  throw Error(ErrorCode::Unsupported, "backward thresholds are defined for (0,inf) and (0,1]");
}

std::pair<Scalar, Scalar> T_unbounded_witness(const std::vector<Scalar>& s, const Scalar& target,
                                              const Context& ctx) {
  for (int q = 1; q <= 200; ++q) {
    Scalar a = pow2(-q), b = pow2(q);
    if (!classify_compact(s, a, b, ctx).strict()) continue;
    if (extremes_by_polynomial(s, a, b).second > target) return {a, b};
  }
  throw Error(ErrorCode::ConvergenceError, "no interval up to 2^-200 exceeds the target");
}

}  // namespace momentkit
