#include "momentkit/tree.hpp"

#include <algorithm>

namespace momentkit {

std::optional<long> PartialWeights::eta() const {
  long n = 0;
  for (const auto& b : branches) {
    if (!b.count) return std::nullopt;
    n += *b.count;
  }
  return n;
}

Scalar PartialWeights::l1_sum() const {
  Scalar s = 0;
  for (const auto& b : branches) s += b.l1_sq_total;
  return s;
}

void PartialWeights::validate() const {
  if (p < 1) throw Error(ErrorCode::ArityError, "p must be at least 1");
  if (branches.empty()) throw Error(ErrorCode::ArityError, "at least one branch is required");
  if (kappa && long(trunk_sq.size()) != *kappa)
    throw Error(ErrorCode::ArityError, "trunk needs " + std::to_string(*kappa) + " weights, got " +
                                           std::to_string(trunk_sq.size()));
  for (const auto& v : trunk_sq)
    if (v <= 0) throw Error(ErrorCode::DomainError, "trunk weights must be positive");
  for (const auto& b : branches) {
    if (b.l1_sq_total <= 0) throw Error(ErrorCode::DomainError, "branch weights must be positive");
    if (b.count && *b.count < 1) throw Error(ErrorCode::ArityError, "branch class count must be positive");
    if (long(b.higher_sq.size()) != p - 1)
      throw Error(ErrorCode::ArityError, "each branch needs " + std::to_string(p) + " weights");
    for (const auto& v : b.higher_sq)
      if (v <= 0) throw Error(ErrorCode::DomainError, "branch weights must be positive");
  }
}

Scalar FullWeights::l1_sum() const {
  Scalar s = 0;
  for (const auto& b : branches) s += b.l1_sq_total;
  return s;
}

Scalar FullWeights::trunk_weight_sq(long i) const {
  if (i < long(trunk_sq.size())) return trunk_sq[std::size_t(i)];
  if (kappa) throw Error(ErrorCode::OutOfRange, "trunk vertex beyond the root");
  return trunk_tail_sq;
}

namespace {

Scalar gamma_che(const CAMeasure& tau, long n) {
  Scalar g = 1;
  for (long i = 0; i < n; ++i) g += ca_moment(tau, i);
  return g;
}

}  // namespace

Scalar weight_sq(const FullBranch& b, long j) {
  if (j < 2) throw Error(ErrorCode::OutOfRange, "generated weights start at j = 2");
  const BranchGenerator& g = b.gen;
  if (j - 2 < long(g.listed_sq.size())) return g.listed_sq[std::size_t(j - 2)];
  switch (g.kind) {
    case BranchGenerator::Kind::Explicit:
      if (g.tail_sq) return *g.tail_sq;
      return Scalar(j) * j;  // unbounded growth
    case BranchGenerator::Kind::Subnormal: return moment(g.mu, j - 1) / moment(g.mu, j - 2);
    case BranchGenerator::Kind::CHE: return gamma_che(g.tau, j - 1) / gamma_che(g.tau, j - 2);
  }
  return Scalar(0);
}

std::vector<Scalar> vertex_moments(const FullWeights& w, const Vertex& u, long n) {
  std::vector<Scalar> out;
  if (!u.on_trunk) {
    if (u.cls < 0 || u.cls >= long(w.branches.size())) throw Error(ErrorCode::OutOfRange, "no such branch class");
    Scalar acc = 1;
    for (long m = 0; m <= n; ++m) {
      out.push_back(acc);
      acc *= weight_sq(w.branches[std::size_t(u.cls)], u.j + m + 1);
    }
    return out;
  }
  if (u.k < 0 || (w.kappa && u.k > *w.kappa)) throw Error(ErrorCode::OutOfRange, "no such trunk vertex");
  Scalar trunk = 1;
  for (long m = 0; m <= n; ++m) {
    if (m <= u.k) {
      if (m > 0) trunk *= w.trunk_weight_sq(u.k - m);
      out.push_back(trunk);
      continue;
    }
    Scalar sum = 0;
    for (const auto& b : w.branches) {
      Scalar prod = b.l1_sq_total;
      for (long j = 2; j <= m - u.k; ++j) prod *= weight_sq(b, j);
      sum += prod;
    }
    out.push_back(trunk * sum);
  }
  return out;
}

Boundedness is_bounded(const FullWeights& w) {
  Boundedness r;
  Scalar sup = w.l1_sum();
  for (const auto& b : w.branches)
    if (b.l1_divergent) {
      r.reason = "sum of first branch weights diverges";
      return r;
    }
  for (const auto& v : w.trunk_sq) sup = std::max(sup, v);
  if (!w.kappa) sup = std::max(sup, w.trunk_tail_sq);
  for (std::size_t c = 0; c < w.branches.size(); ++c) {
    const auto& g = w.branches[c].gen;
    for (const auto& v : g.listed_sq) sup = std::max(sup, v);
    switch (g.kind) {
      case BranchGenerator::Kind::Explicit:
        if (!g.tail_sq) {
          r.reason = "branch class " + std::to_string(c) + " weights grow without bound";
          return r;
        }
        sup = std::max(sup, *g.tail_sq);
        break;
      case BranchGenerator::Kind::Subnormal:
        // moment ratios increase to the top of the support
        sup = std::max(sup, max_atom(g.mu));
        break;
      case BranchGenerator::Kind::CHE:
        // ratios of a CA sequence decrease, so the first generated one dominates
        {
          long n = long(g.listed_sq.size()) + 1;
          sup = std::max(sup, Scalar(gamma_che(g.tau, n) / gamma_che(g.tau, n - 1)));
        }
        break;
    }
  }
  r.bounded = true;
  r.norm_sq = sup;
  return r;
}

namespace {

struct Checker {
  bool loose;
  Scalar tol;

  Checker(bool inexact, const Context& ctx)
      : loose(inexact || !ctx.exact()), tol(from_double(std::max(ctx.eps, 1e-8))) {}

  Scalar scale(const Scalar& a, const Scalar& b) const { return std::max({Scalar(1), abs(a), abs(b)}); }
  bool eq(const Scalar& a, const Scalar& b) const {
    if (!loose) return a == b;
    return abs(a - b) <= tol * scale(a, b);
  }
  bool le(const Scalar& a, const Scalar& b) const {
    if (!loose) return a <= b;
    return a - b <= tol * scale(a, b);
  }
};

std::string idx(long k) { return std::to_string(k); }

}  // namespace

CertificateReport verify_subnormal_certificate(const FullWeights& w, const std::vector<AtomicMeasure>& mus, int depth,
                                               const Context& ctx) {
  if (mus.size() != w.branches.size()) throw Error(ErrorCode::ArityError, "one measure per branch class");
  bool inexact = std::any_of(mus.begin(), mus.end(), [](const AtomicMeasure& m) { return !m.exact; });
  Checker chk(inexact, ctx);
  CertificateReport rep;
  for (std::size_t c = 0; c < mus.size(); ++c) {
    auto vm = vertex_moments(w, Vertex::branch(long(c), 1), depth);
    for (long n = 0; n <= depth; ++n) {
      Scalar got = moment(mus[c], n);
      if (!chk.eq(got, vm[std::size_t(n)])) {
        rep.violation = "branch " + idx(long(c)) + ": int t^" + idx(n) + " dmu = " + format_decimal(got) +
                        " but ||S^" + idx(n) + " e_(i,1)||^2 = " + format_decimal(vm[std::size_t(n)]);
        return rep;
      }
    }
  }
  long levels = w.kappa ? *w.kappa : depth;
  Scalar prod = 1;  // prod_{j<k} lambda_{-j}^2
  for (long k = 0; k <= levels; ++k) {
    Scalar lhs = 0;
    for (std::size_t c = 0; c < mus.size(); ++c) lhs += w.branches[c].l1_sq_total * moment(mus[c], -k - 1);
    Scalar rhs = Scalar(1) / prod;
    bool last = w.kappa && k == *w.kappa;
    bool ok = last ? chk.le(lhs, rhs) : chk.eq(lhs, rhs);
    if (!ok) {
      rep.violation = "trunk level " + idx(k) + ": sum lambda_{i,1}^2 int t^-" + idx(k + 1) + " dmu_i = " +
                      format_decimal(lhs) + (last ? " exceeds " : " differs from ") + format_decimal(rhs);
      return rep;
    }
    if (k < levels) prod *= w.trunk_weight_sq(k);
  }
  rep.valid = true;
  return rep;
}

CertificateReport verify_che_certificate(const FullWeights& w, const std::vector<CAMeasure>& taus, int depth,
                                         const Context& ctx) {
  if (taus.size() != w.branches.size()) throw Error(ErrorCode::ArityError, "one measure per branch class");
  for (const auto& t : taus)
    if (t.zero_mass != 0) throw Error(ErrorCode::ZeroAtomError, "branch measure has an atom at 0");
  bool inexact = std::any_of(taus.begin(), taus.end(), [](const CAMeasure& t) { return !t.positive.exact; });
  Checker chk(inexact, ctx);
  CertificateReport rep;
  for (std::size_t c = 0; c < taus.size(); ++c) {
    auto vm = vertex_moments(w, Vertex::branch(long(c), 1), depth);
    Scalar g = 1;
    for (long n = 1; n <= depth; ++n) {
      g += ca_moment(taus[c], n - 1);
      if (!chk.eq(g, vm[std::size_t(n)])) {
        rep.violation = "branch " + idx(long(c)) + ": 1 + int (1+...+t^" + idx(n - 1) + ") dtau = " +
                        format_decimal(g) + " but ||S^" + idx(n) + " e_(i,1)||^2 = " +
                        format_decimal(vm[std::size_t(n)]);
        return rep;
      }
    }
  }
  long levels = w.kappa ? *w.kappa : depth;
  Scalar prod = 1;
  for (long k = 0; k <= levels; ++k) {
    Scalar acc = 0;
    for (std::size_t c = 0; c < taus.size(); ++c) acc += w.branches[c].l1_sq_total * ca_moment(taus[c], -k - 1);
    Scalar lhs = 1 + prod * acc;
    Scalar rhs = k == 0 ? w.l1_sum() : w.trunk_weight_sq(k - 1);
    bool last = w.kappa && k == *w.kappa;
    bool ok = last ? chk.le(lhs, rhs) : chk.eq(lhs, rhs);
    if (!ok) {
      rep.violation = "trunk level " + idx(k) + ": 1 + (trunk product) sum lambda_{i,1}^2 int t^-" + idx(k + 1) +
                      " dtau_i = " + format_decimal(lhs) + (last ? " exceeds " : " differs from ") +
                      format_decimal(rhs);
      return rep;
    }
    if (k < levels) prod *= w.trunk_weight_sq(k);
  }
  rep.valid = true;
  return rep;
}

}  // namespace momentkit
