#include "momentkit/positivity.hpp"

#include <algorithm>

namespace momentkit {

const char* positivity_name(Positivity p) {
  switch (p) {
    case Positivity::NotPositive: return "NotPositive";
    case Positivity::SingularlyPositive: return "SingularlyPositive";
    case Positivity::StrictlyPositive: return "StrictlyPositive";
  }
  return "?";
}

Domain Domain::compact(const Scalar& a, const Scalar& b) {
  if (a >= b) throw Error(ErrorCode::DomainError, "compact domain needs a < b");
  if (a < 0) throw Error(ErrorCode::DomainError, "compact domain needs a >= 0");
  return {Kind::Compact, a, b};
}

std::string Domain::name() const {
  switch (kind) {
    case Kind::Compact: return "[" + format_scalar(a) + "," + format_scalar(b) + "]";
    case Kind::Ray: return "(0,inf)";
    case Kind::HalfOpen: return "(0,1]";
  }
  return "?";
}

std::string HalfInt::str() const {
  if (twice % 2 == 0) return std::to_string(twice / 2);
  return std::to_string(twice) + "/2";
}

HalfInt parse_half_int(const std::string& text) {
  Scalar v = parse_scalar(text);
  Scalar d = v * 2;
  if (d.get_den() != 1) throw Error(ErrorCode::BadIndex, "index must be a half-integer: " + text);
  return {d.get_num().get_si()};
}

namespace {

void check_nonnegative(const std::vector<Scalar>& s) {
  for (const auto& v : s)
    if (v < 0) throw Error(ErrorCode::DomainError, "moment sequence has a negative entry " + format_scalar(v));
}

void check_nonempty(const std::vector<Scalar>& s) {
  if (s.empty()) throw Error(ErrorCode::InsufficientMoments, "empty moment sequence");
}

FormWitness witness(const std::string& name, const SymMatrix& m, const Context& ctx) {
  FormReport r = classify_form_detail(m, ctx);
  return {name, m.order(), r.form, r.rank};
}

Positivity combine(const FormWitness& x, const FormWitness& y) {
  if (x.form == FormClass::Indefinite || y.form == FormClass::Indefinite) return Positivity::NotPositive;
  if (x.form == FormClass::PositiveDefinite && y.form == FormClass::PositiveDefinite)
    return Positivity::StrictlyPositive;
  return Positivity::SingularlyPositive;
}

bool both_pd(const FormWitness& x, const FormWitness& y) {
  return x.form == FormClass::PositiveDefinite && y.form == FormClass::PositiveDefinite;
}

}  // namespace

std::vector<Scalar> localize(const std::vector<Scalar>& s, const Polynomial& w) {
  int d = std::max(w.degree(), 0);
  std::vector<Scalar> u;
  for (int k = 0; k + d < int(s.size()); ++k) {
    Scalar v = 0;
    for (int j = 0; j <= w.degree(); ++j) v += w.c[std::size_t(j)] * s[std::size_t(k + j)];
    u.push_back(v);
  }
  return u;
}

PositivityVerdict classify_compact(const std::vector<Scalar>& s, const Scalar& a, const Scalar& b,
                                   const Context& ctx) {
  check_nonempty(s);
  if (a >= b) throw Error(ErrorCode::DomainError, "compact domain needs a < b");
  if (a < 0) throw Error(ErrorCode::DomainError, "compact domain needs a >= 0");
  int n = int(s.size()) - 1;
  int m = n / 2;
  PositivityVerdict v;
  v.method = "compact";
  if (n % 2 == 0) {
    // (t-a)(b-t) = -ab + (a+b) t - t^2
    auto sp = localize(s, Polynomial({-a * b, a + b, Scalar(-1)}));
    v.forms.push_back(witness("H[s]", hankel(s, 0, m + 1), ctx));
    v.forms.push_back(witness("H[(t-a)(b-t)s]", hankel(sp, 0, m), ctx));
  } else {
    auto lo = localize(s, Polynomial({-a, Scalar(1)}));
    auto hi = localize(s, Polynomial({b, Scalar(-1)}));
    v.forms.push_back(witness("H[(t-a)s]", hankel(lo, 0, m + 1), ctx));
    v.forms.push_back(witness("H[(b-t)s]", hankel(hi, 0, m + 1), ctx));
  }
  v.cls = combine(v.forms[0], v.forms[1]);
  v.grid_a = a;
  v.grid_b = b;
  return v;
}

namespace {

PositivityVerdict grid_fallback(const std::vector<Scalar>& s, bool half_open, const Context& ctx,
                                std::vector<FormWitness> limit_forms) {
  PositivityVerdict out;
  out.cls = Positivity::NotPositive;
  out.method = "grid";
  out.forms = std::move(limit_forms);
  for (int q = 1; q <= ctx.grid_q; ++q) {
    Scalar a = pow2(-q);
    Scalar b = half_open ? Scalar(1) : pow2(q);
    PositivityVerdict v = classify_compact(s, a, b, ctx);
    if (v.cls != Positivity::NotPositive) {
      // a strict hit cannot occur when the limiting pair fails to be definite
      // in exact arithmetic; under tolerances it is reported as singular
      v.cls = Positivity::SingularlyPositive;
      v.method = "grid";
      return v;
    }
  }
  return out;
}

}  // namespace

PositivityVerdict classify_ray(const std::vector<Scalar>& s, const Context& ctx) {
  check_nonempty(s);
  check_nonnegative(s);
  int n = int(s.size()) - 1;
  int m = n / 2;
  FormWitness x, y;
  if (n % 2 == 0) {
    x = witness("H[s]", hankel(s, 0, m + 1), ctx);
    y = witness("H[ts]", hankel(s, 1, m), ctx);
  } else {
    x = witness("H[s]", hankel(s, 0, m + 1), ctx);
    y = witness("H[ts]", hankel(s, 1, m + 1), ctx);
  }
  if (both_pd(x, y)) {
    PositivityVerdict v;
    v.cls = Positivity::StrictlyPositive;
    v.method = "limit";
    v.forms = {x, y};
    return v;
  }
  return grid_fallback(s, false, ctx, {x, y});
}

PositivityVerdict classify_half_open(const std::vector<Scalar>& s, const Context& ctx) {
  check_nonempty(s);
  check_nonnegative(s);
  int n = int(s.size()) - 1;
  int m = n / 2;
  auto d = localize(s, Polynomial({Scalar(1), Scalar(-1)}));
  FormWitness x, y;
  if (n % 2 == 0) {
    x = witness("H[s]", hankel(s, 0, m + 1), ctx);
    y = witness("H[t(1-t)s]", hankel(d, 1, m), ctx);
  } else {
    x = witness("H[ts]", hankel(s, 1, m + 1), ctx);
    y = witness("H[(1-t)s]", hankel(d, 0, m + 1), ctx);
  }
  if (both_pd(x, y)) {
    PositivityVerdict v;
    v.cls = Positivity::StrictlyPositive;
    v.method = "limit";
    v.forms = {x, y};
    return v;
  }
  return grid_fallback(s, true, ctx, {x, y});
}

PositivityVerdict classify(const std::vector<Scalar>& s, const Domain& d, const Context& ctx) {
  switch (d.kind) {
    case Domain::Kind::Compact: return classify_compact(s, d.a, d.b, ctx);
    case Domain::Kind::Ray: return classify_ray(s, ctx);
    case Domain::Kind::HalfOpen: return classify_half_open(s, ctx);
  }
  throw Error(ErrorCode::DomainError, "unknown domain");
}

HalfInt index_of(const std::vector<Atom>& atoms, const Domain& d) {
  HalfInt idx{0};
  for (const auto& a : atoms) {
    bool endpoint = false;
    if (d.kind == Domain::Kind::Compact) endpoint = a.x == d.a || a.x == d.b;
    if (d.kind == Domain::Kind::HalfOpen) endpoint = a.x == 1;
    idx.twice += endpoint ? 1 : 2;
  }
  return idx;
}

namespace {

struct Localizer {
  Polynomial w;
  std::vector<Scalar> roots;  // roots of w inside the closed domain
};

std::vector<Localizer> localizers(const Domain& d) {
  Polynomial one = Polynomial::constant(1);
  Polynomial t = Polynomial::linear(0, 1);
  switch (d.kind) {
    case Domain::Kind::Ray: return {{one, {}}, {t, {}}};
    case Domain::Kind::HalfOpen: {
      Polynomial u = Polynomial::linear(1, -1);
      return {{one, {}}, {t, {}}, {u, {Scalar(1)}}, {t * u, {Scalar(1)}}};
    }
    case Domain::Kind::Compact: {
      Polynomial l = Polynomial::linear(-d.a, 1);
      Polynomial u = Polynomial::linear(d.b, -1);
      return {{one, {}}, {l, {d.a}}, {u, {d.b}}, {l * u, {d.a, d.b}}};
    }
  }
  return {};
}

// Kernel polynomial of the smallest singular leading Hankel block of u.
std::optional<Polynomial> leading_kernel(const std::vector<Scalar>& u, const Context& ctx) {
  for (int r = 0; 2 * r < int(u.size()); ++r) {
    FormClass f = classify_form(hankel(u, 0, r + 1), ctx);
    if (f == FormClass::Indefinite) return std::nullopt;
    if (f == FormClass::PositiveDefinite) continue;
    if (r == 0) return Polynomial::constant(1);
    Matrix h = hankel(u, 0, r).dense();
    std::vector<Scalar> rhs(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) rhs[std::size_t(i)] = -u[std::size_t(r + i)];
    std::vector<Scalar> c = solve_linear(h, rhs);
    c.push_back(1);
    return Polynomial(c);
  }
  return std::nullopt;
}

}  // namespace

DeterminateMeasure determinate_measure(const std::vector<Scalar>& s, const Domain& d, const Context& ctx) {
  check_nonempty(s);
  bool all_zero = std::all_of(s.begin(), s.end(), [](const Scalar& v) { return v == 0; });
  if (all_zero) return {};
  std::optional<DeterminateMeasure> best;
  HalfInt best_idx{0};
  MomentSequence seq{0, s};
  for (const auto& loc : localizers(d)) {
    auto u = localize(s, loc.w);
    if (u.empty()) continue;
    std::optional<Polynomial> q;
    try {
      q = leading_kernel(u, ctx);
    } catch (const Error&) {
      continue;
    }
    if (!q) continue;
    std::vector<Root> roots;
    try {
      Scalar lo = 0, hi = 1;
      if (d.kind == Domain::Kind::Compact) {
        lo = d.a;
        hi = d.b;
      } else if (d.kind == Domain::Kind::Ray) {
        hi = cauchy_bound(*q);
      }
      if (q->degree() > 0) roots = isolate_roots(*q, lo, hi, ctx);
    } catch (const Error&) {
      continue;
    }
    std::vector<Scalar> xs;
    bool exact = true;
    for (const auto& r : roots) {
      if (r.value == 0 && !(d.kind == Domain::Kind::Compact && d.a == 0)) continue;
      xs.push_back(r.value);
      exact = exact && r.exact;
    }
    for (const auto& r : loc.roots)
      if (std::find(xs.begin(), xs.end(), r) == xs.end()) xs.push_back(r);
    std::sort(xs.begin(), xs.end());
    if (xs.size() > s.size()) continue;
    std::vector<Scalar> masses;
    try {
      masses = vandermonde_masses(xs, s);
    } catch (const Error&) {
      continue;
    }
    DeterminateMeasure cand;
    cand.exact = exact;
    bool bad = false;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      int sg = sign_tol(masses[j], s[0], ctx);
      if (!exact && sg == 0) sg = sign(masses[j]);
      if (sg < 0) bad = true;
      if (sg > 0) cand.atoms.push_back({xs[j], masses[j]});
    }
    if (bad) continue;
    // verify against every moment, allowing for root enclosures
    Scalar tol = from_double(exact && ctx.exact() ? 0.0 : 1e-8);
    for (std::size_t k = 0; k < s.size() && !bad; ++k) {
      Scalar v = 0;
      for (const auto& a : cand.atoms) v += a.m * power(a.x, long(k));
      Scalar scale = std::max(Scalar(1), abs(s[k]));
      if (abs(v - s[k]) > tol * scale) bad = true;
    }
    if (bad) continue;
    HalfInt idx = index_of(cand.atoms, d);
    if (!best || idx < best_idx) {
      best = cand;
      best_idx = idx;
    }
  }
  if (!best) throw Error(ErrorCode::DegenerateInput, "could not recover the representing measure");
  return *best;
}

HalfInt index(const std::vector<Scalar>& s, const Domain& d, const Context& ctx) {
  PositivityVerdict v = classify(s, d, ctx);
  int n = int(s.size()) - 1;
  if (v.cls == Positivity::NotPositive) throw Error(ErrorCode::NotAMomentSequence, "sequence is not positive on " + d.name());
  if (v.cls == Positivity::StrictlyPositive) {
    if (d.kind == Domain::Kind::Ray) return HalfInt::of((n + 2) / 2);
    return {long(n) + 1};
  }
  return index_of(determinate_measure(s, d, ctx).atoms, d);
}

AtomicMeasure to_atomic(const DeterminateMeasure& dm) {
  std::vector<Atom> atoms;
  for (const auto& a : dm.atoms) {
    if (a.x == 0) throw Error(ErrorCode::ZeroAtomError, "measure has an atom at 0");
    atoms.push_back(a);
  }
  return AtomicMeasure::make(std::move(atoms), dm.exact);
}

}  // namespace momentkit
