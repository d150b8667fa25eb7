#include "momentkit/backward.hpp"

namespace momentkit {

const char* ext_name(ExtClass c) {
  switch (c) {
    case ExtClass::Strict: return "Strict";
    case ExtClass::Singular: return "Singular";
    case ExtClass::NotExtension: return "NotExtension";
  }
  return "?";
}

namespace {

std::vector<Scalar> prepend(const Scalar& x, const std::vector<Scalar>& s) {
  std::vector<Scalar> out;
  out.reserve(s.size() + 1);
  out.push_back(x);
  out.insert(out.end(), s.begin(), s.end());
  return out;
}

void require_unbounded_domain(const Domain& d) {
  if (d.kind == Domain::Kind::Compact)
    throw Error(ErrorCode::Unsupported, "backward extensions are defined for (0,inf) and (0,1]");
}

AtomicMeasure singular_measure(const std::vector<Scalar>& s, const Domain& d, const Context& ctx) {
  if (d.kind == Domain::Kind::HalfOpen) return minimal_measure_half_open(s, ctx);
  return std::get<AtomicMeasure>(minimal_measure_ray(s, ctx));
}

}  // namespace

ExtensionVerdict classify_backward(const std::vector<Scalar>& s, const Scalar& x, const Domain& d,
                                   const Context& ctx) {
  require_unbounded_domain(d);
  if (x < 0) throw Error(ErrorCode::DomainError, "candidate s_{-1} must be nonnegative");
  if (!classify(s, d, ctx).strict())
    throw Error(ErrorCode::NotStrictlyPositive, "sequence is not strictly positive on " + d.name());
  ExtensionVerdict v;
  v.threshold = threshold(s, d, ctx);
  bool even_ray = d.kind == Domain::Kind::Ray && s.size() % 2 == 1;
  if (ctx.exact()) {
    // decided on the extended sequence itself, so no rounding of the threshold enters
    Positivity p = classify(prepend(x, s), d, ctx).cls;
    if (p == Positivity::StrictlyPositive) v.cls = ExtClass::Strict;
    if (p == Positivity::SingularlyPositive) v.cls = even_ray ? ExtClass::NotExtension : ExtClass::Singular;
  } else {
    const Scalar& t = v.threshold.value;
    if (equal_tol(x, t, ctx))
      v.cls = even_ray ? ExtClass::NotExtension : ExtClass::Singular;
    else if (x > t)
      v.cls = ExtClass::Strict;
  }
  if (v.cls == ExtClass::Singular) v.measure = singular_measure(s, d, ctx);
  return v;
}

SlotKind slot_kind(long k, long top, long n_param) { return k >= top - n_param ? SlotKind::Strict : SlotKind::Forced; }

std::pair<HalfInt, HalfInt> index_range(std::size_t len, long r, const Domain& d) {
  long n = long(len) - 1;
  if (d.kind == Domain::Kind::Ray) return {HalfInt::of((n + 2) / 2), HalfInt::of((n + r + 2) / 2)};
  return {HalfInt{n + 1}, HalfInt{n + r + 1}};
}

AtomicMeasure indexed_measure(const MomentSequence& s, HalfInt K, const Domain& d, const Context& ctx) {
  long N = K.twice - 1;
  if (N + 1 > long(s.size())) throw Error(ErrorCode::InsufficientMoments, "window shorter than 2K");
  std::vector<Scalar> u(s.values.begin(), s.values.begin() + (N + 1));
  AtomicMeasure nu;
  if (d.kind == Domain::Kind::Ray) {
    if (K.twice % 2 != 0) throw Error(ErrorCode::BadIndex, "ray indices are integers");
    Polynomial q = bordered(u, int(K.twice / 2));
    nu = measure_on_roots(q, u, 0, cauchy_bound(q), ctx);
  } else {
    nu = measure_on_roots(minimal_polynomial_half_open(u), u, 0, 1, ctx);
  }
  AtomicMeasure mu = tilt(nu, -s.first_index);
  if (!reproduces(mu, s)) throw Error(ErrorCode::DegenerateInput, "indexed measure fails to reproduce the window");
  return mu;
}

ExtensionResult extend_with_index(const std::vector<Scalar>& s, long r, HalfInt K, const std::vector<Scalar>& free,
                                  const Domain& d, const Context& ctx) {
  require_unbounded_domain(d);
  if (r < 1) throw Error(ErrorCode::BadIndex, "extension length must be at least 1");
  if (!classify(s, d, ctx).strict())
    throw Error(ErrorCode::NotStrictlyPositive, "sequence is not strictly positive on " + d.name());
  auto [lo, hi] = index_range(s.size(), r, d);
  if (K < lo || K > hi || (d.kind == Domain::Kind::Ray && K.twice % 2 != 0))
    throw Error(ErrorCode::BadIndex, "index " + K.str() + " outside [" + lo.str() + "," + hi.str() + "]");
  long n = long(s.size()) - 1;
  long N = K.twice - 1;
  long n_free = 0;
  for (long k = -1; k >= -r; --k)
    if (slot_kind(k, n, N) == SlotKind::Strict) ++n_free;
  if (long(free.size()) != n_free)
    throw Error(ErrorCode::ArityError,
                "expected " + std::to_string(n_free) + " free values, got " + std::to_string(free.size()));

  ExtensionResult res;
  std::vector<Scalar> cur = s;  // s_{k+1}..s_n
  std::size_t next_free = 0;
  for (long k = -1; k >= -r; --k) {
    SlotRecord rec{k, slot_kind(k, n, N), {}, {}};
    if (rec.kind == SlotKind::Strict) {
      rec.threshold = threshold(cur, d, ctx);
      rec.value = free[next_free++];
      if (!classify(prepend(rec.value, cur), d, ctx).strict())
        throw Error(ErrorCode::InfeasibleChoice, "s_" + std::to_string(k) + " = " + format_scalar(rec.value) +
                                                     " is not above the threshold " +
                                                     format_decimal(rec.threshold.value));
    } else {
      std::vector<Scalar> window(cur.begin(), cur.begin() + (N + 1));
      rec.threshold = threshold(window, d, ctx);
      rec.value = rec.threshold.value;
    }
    cur = prepend(rec.value, cur);
    res.slots.push_back(rec);
  }
  res.sequence = MomentSequence{-r, cur};
  if (N <= n + r) res.measure = indexed_measure(res.sequence, K, d, ctx);
  return res;
}

Scalar phi(const AtomicMeasure& mu) { return moment(mu, -1); }

AtomicMeasure psi(const std::vector<Scalar>& s, const Scalar& x, const Context& ctx) {
  if (s.size() % 2 == 0) throw Error(ErrorCode::Unsupported, "psi is defined for even n");
  if (!classify_ray(s, ctx).strict())
    throw Error(ErrorCode::NotStrictlyPositive, "sequence is not strictly positive on (0,inf)");
  std::vector<Scalar> u = prepend(x, s);
  if (!classify_ray(u, ctx).strict())
    throw Error(ErrorCode::OutOfRange, "x = " + format_scalar(x) + " is not above the threshold");
  int K = int(u.size()) / 2;
  Polynomial q = bordered(u, K);
  AtomicMeasure nu = measure_on_roots(q, u, 0, cauchy_bound(q), ctx);
  return tilt(nu, 1);
}

}  // namespace momentkit
