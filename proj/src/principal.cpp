#include "momentkit/principal.hpp"

namespace momentkit {

Polynomial principal_polynomial(const std::vector<Scalar>& s, const Scalar& a, const Scalar& b, PrincipalKind k) {
  if (s.empty()) throw Error(ErrorCode::InsufficientMoments, "empty moment sequence");
  int n = int(s.size()) - 1;
  Polynomial ta = Polynomial::linear(-a, 1);
  Polynomial bt = Polynomial::linear(b, -1);
  if (n % 2 == 1) {
    int m = (n + 1) / 2;
    if (k == PrincipalKind::Lower) return bordered(s, m);
    return ta * bt * bordered(localize(s, ta * bt), m - 1);
  }
  int m = n / 2;
  if (k == PrincipalKind::Lower) return ta * bordered(localize(s, ta), m);
  return bt * bordered(localize(s, bt), m);
}

AtomicMeasure measure_on_roots(const Polynomial& q, const std::vector<Scalar>& s, const Scalar& lo,
                               const Scalar& hi, const Context& ctx) {
  if (q.is_zero()) throw Error(ErrorCode::DegenerateInput, "vanishing determinant polynomial");
  auto roots = isolate_roots(q, lo, hi, ctx);
  if (int(roots.size()) != q.degree())
    throw Error(ErrorCode::DegenerateInput, "polynomial " + format_polynomial(q) + " does not split in [" +
                                                format_scalar(lo) + "," + format_scalar(hi) + "]");
  std::vector<Scalar> xs;
  bool exact = true;
  for (const auto& r : roots) {
    if (r.value <= 0) throw Error(ErrorCode::DegenerateInput, "root at or below zero");
    xs.push_back(r.value);
    exact = exact && r.exact;
  }
  auto masses = vandermonde_masses(xs, s);
  std::vector<Atom> atoms;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (masses[j] <= 0) throw Error(ErrorCode::DegenerateInput, "nonpositive mass " + format_scalar(masses[j]));
    atoms.push_back({xs[j], masses[j]});
  }
  AtomicMeasure mu = AtomicMeasure::make(std::move(atoms), exact);
  if (!reproduces(mu, MomentSequence{0, s}))
    throw Error(ErrorCode::DegenerateInput, "principal measure fails to reproduce the sequence");
  return mu;
}

AtomicMeasure principal_compact(const std::vector<Scalar>& s, const Scalar& a, const Scalar& b, PrincipalKind k,
                                const Context& ctx) {
  if (a <= 0 || a >= b) throw Error(ErrorCode::DomainError, "principal measures need 0 < a < b");
  if (!classify_compact(s, a, b, ctx).strict())
    throw Error(ErrorCode::NotStrictlyPositive, "sequence is not strictly positive on the interval");
  return measure_on_roots(principal_polynomial(s, a, b, k), s, a, b, ctx);
}

Polynomial minimal_polynomial_ray(const std::vector<Scalar>& s) {
  int n = int(s.size()) - 1;
  if (n % 2 == 0) throw Error(ErrorCode::Unsupported, "even-length ray minimal measure is a family");
  return bordered(s, (n + 1) / 2);
}

Polynomial minimal_polynomial_half_open(const std::vector<Scalar>& s) {
  int n = int(s.size()) - 1;
  if (n % 2 == 1) return bordered(s, (n + 1) / 2);
  Polynomial u = Polynomial::linear(1, -1);
  return u * bordered(localize(s, u), n / 2);
}

std::variant<AtomicMeasure, PsiFamily> minimal_measure_ray(const std::vector<Scalar>& s, const Context& ctx) {
  if (!classify_ray(s, ctx).strict())
    throw Error(ErrorCode::NotStrictlyPositive, "sequence is not strictly positive on (0,inf)");
  int n = int(s.size()) - 1;
  if (n % 2 == 0) return PsiFamily{s};
  Polynomial q = minimal_polynomial_ray(s);
  if (q(0) == 0) throw Error(ErrorCode::DegenerateInput, "minimal polynomial vanishes at 0");
  return measure_on_roots(q, s, 0, cauchy_bound(q), ctx);
}

AtomicMeasure minimal_measure_half_open(const std::vector<Scalar>& s, const Context& ctx) {
  PositivityVerdict v = classify_half_open(s, ctx);
  // a singular sequence has a single representing measure, the minimal one
  if (v.cls == Positivity::SingularlyPositive) return to_atomic(determinate_measure(s, Domain::half_open(), ctx));
  if (!v.strict()) throw Error(ErrorCode::NotStrictlyPositive, "sequence is not positive on (0,1]");
  Polynomial q = minimal_polynomial_half_open(s);
  if (q(0) == 0) throw Error(ErrorCode::DegenerateInput, "minimal polynomial vanishes at 0");
  return measure_on_roots(q, s, 0, 1, ctx);
}

Scalar reciprocal_integral(const Polynomial& q, const std::vector<Scalar>& s) {
  Scalar q0 = q.coeff(0);
  if (q0 == 0) throw Error(ErrorCode::DegenerateInput, "measure has an atom at 0");
  if (q.degree() > int(s.size()))
    throw Error(ErrorCode::InsufficientMoments, "polynomial degree exceeds available moments");
  Scalar p0 = 0;
  for (int j = 1; j <= q.degree(); ++j) p0 += q.c[std::size_t(j)] * s[std::size_t(j - 1)];
  return -p0 / q0;
}

}  // namespace momentkit
