#pragma once

// Generators and independent reference computations shared by the tests.

#include "momentkit/completion.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

namespace mktest {

using momentkit::AtomicMeasure;
using momentkit::Scalar;

inline std::vector<Scalar> seq(std::initializer_list<const char*> v) {
  std::vector<Scalar> out;
  for (const char* x : v) out.push_back(momentkit::parse_scalar(x));
  return out;
}

inline Scalar q(const char* x) { return momentkit::parse_scalar(x); }

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

  // p/q with q <= max_den, uniformly placed in [lo, hi]
  Scalar rational(const Scalar& lo, const Scalar& hi, long max_den = 12) {
    for (;;) {
      long den = integer(1, max_den);
      Scalar span = (hi - lo) * den;
      mpz_class fl;
      mpz_fdiv_q(fl.get_mpz_t(), span.get_num_mpz_t(), span.get_den_mpz_t());
      long steps = fl.get_si();
      if (steps < 0) continue;
      Scalar lo_d = lo * den;
      mpz_class base;
      mpz_cdiv_q(base.get_mpz_t(), lo_d.get_num_mpz_t(), lo_d.get_den_mpz_t());
      Scalar v(base + integer(0, std::max(0L, steps)), den);
      v.canonicalize();
      if (v >= lo && v <= hi) return v;
    }
  }

  AtomicMeasure measure(int K, const Scalar& lo, const Scalar& hi, long max_den = 12) {
    std::vector<momentkit::Atom> atoms;
    while (int(atoms.size()) < K) {
      Scalar x = rational(lo, hi, max_den);
      bool dup = false;
      for (const auto& a : atoms) dup = dup || a.x == x;
      if (dup) continue;
      atoms.push_back({x, rational(Scalar(1, max_den), Scalar(3), max_den)});
    }
    return AtomicMeasure::make(std::move(atoms));
  }
};

// Gauss-Jordan inverse applied to a vector: returns b^T M^{-1} b.
inline Scalar quadratic_inverse(std::vector<std::vector<Scalar>> m, std::vector<Scalar> b) {
  std::size_t n = b.size();
  std::vector<Scalar> x = b;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && m[p][k] == 0) ++p;
    if (p == n) throw std::runtime_error("singular matrix in test oracle");
    std::swap(m[p], m[k]);
    std::swap(x[p], x[k]);
    Scalar piv = m[k][k];
    for (auto& v : m[k]) v /= piv;
    x[k] /= piv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == k || m[r][k] == 0) continue;
      Scalar f = m[r][k];
      for (std::size_t c = 0; c < n; ++c) m[r][c] -= f * m[k][c];
      x[r] -= f * x[k];
    }
  }
  Scalar acc = 0;
  for (std::size_t i = 0; i < n; ++i) acc += b[i] * x[i];
  return acc;
}

// Smallest x with (x, s) positive on [0, inf): Schur complement of the
// Hankel block that carries x.
inline Scalar schur_t_inf(const std::vector<Scalar>& s) {
  std::size_t m = s.size() / 2;
  if (m == 0) return 0;
  std::vector<std::vector<Scalar>> h(m, std::vector<Scalar>(m));
  std::vector<Scalar> b(m);
  for (std::size_t i = 0; i < m; ++i) {
    b[i] = s[i];
    for (std::size_t j = 0; j < m; ++j) h[i][j] = s[i + j + 1];
  }
  return quadratic_inverse(h, b);
}

// Same on [0, 1]: u = (x, s); the block carrying x is [u_{i+j}] when u has
// odd length and [u_{i+j} - u_{i+j+1}] when it has even length.
inline Scalar schur_t_one(const std::vector<Scalar>& s) {
  std::vector<Scalar> u{Scalar(0)};
  u.insert(u.end(), s.begin(), s.end());
  std::size_t L = u.size();
  if (L % 2 == 1) {
    std::size_t m = (L - 1) / 2;
    if (m == 0) return 0;
    std::vector<std::vector<Scalar>> h(m, std::vector<Scalar>(m));
    std::vector<Scalar> b(m);
    for (std::size_t i = 0; i < m; ++i) {
      b[i] = u[i + 1];
      for (std::size_t j = 0; j < m; ++j) h[i][j] = u[i + j + 2];
    }
    return quadratic_inverse(h, b);
  }
  std::size_t m = L / 2 - 1;
  auto d = [&](std::size_t k) { return Scalar(u[k] - u[k + 1]); };
  if (m == 0) return u[1];
  std::vector<std::vector<Scalar>> h(m, std::vector<Scalar>(m));
  std::vector<Scalar> b(m);
  for (std::size_t i = 0; i < m; ++i) {
    b[i] = d(i + 1);
    for (std::size_t j = 0; j < m; ++j) h[i][j] = d(i + j + 2);
  }
  // the (0,0) entry is x - u_1
  return u[1] + quadratic_inverse(h, b);
}

inline std::vector<Scalar> moments_of(const AtomicMeasure& mu, long lo, long hi) {
  std::vector<Scalar> out;
  for (long k = lo; k <= hi; ++k) {
    Scalar acc = 0;
    for (const auto& a : mu.atoms) {
      Scalar p = 1;
      if (k >= 0)
        for (long i = 0; i < k; ++i) p *= a.x;
      else
        for (long i = 0; i < -k; ++i) p /= a.x;
      acc += a.m * p;
    }
    out.push_back(acc);
  }
  return out;
}


// Subnormal completion data generated from Berger measures: branch weights
// are moment ratios, trunk weights solve the level equalities, and the last
// trunk weight is shrunk by `give` (< 1) to leave slack in the final inequality.
struct Constructed {
  momentkit::PartialWeights pw;
  std::vector<AtomicMeasure> mus;
  std::vector<momentkit::CAMeasure> taus;
};

inline Constructed constructed_subnormal(Gen& g, long eta, long kappa, long p, const Scalar& give) {
  Constructed out;
  out.pw.kappa = kappa;
  out.pw.p = p;
  std::vector<Scalar> raw;
  for (long i = 0; i < eta; ++i) {
    AtomicMeasure mu = g.measure(int(g.integer(1, 2)), Scalar(1, 2), Scalar(3), 6);
    Scalar m0 = momentkit::total_mass(mu);
    std::vector<momentkit::Atom> a = mu.atoms;
    for (auto& x : a) x.m /= m0;
    mu = AtomicMeasure::make(std::move(a));
    momentkit::BranchClass b;
    for (long j = 2; j <= p; ++j) b.higher_sq.push_back(momentkit::moment(mu, j - 1) / momentkit::moment(mu, j - 2));
    raw.push_back(g.rational(Scalar(1, 2), Scalar(2), 4));
    out.pw.branches.push_back(b);
    out.mus.push_back(mu);
  }
  auto A = [&](long k) {
    Scalar acc = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) acc += raw[i] * momentkit::moment(out.mus[i], -k - 1);
    return acc;
  };
  Scalar norm = A(0);
  if (kappa == 0) norm /= give;
  for (std::size_t i = 0; i < raw.size(); ++i) out.pw.branches[i].l1_sq_total = raw[i] / norm;
  for (long k = 0; k < kappa; ++k) {
    Scalar w = A(k) / A(k + 1);
    if (k == kappa - 1) w *= give;
    out.pw.trunk_sq.push_back(w);
  }
  return out;
}

// CHE data generated from measures on (0,1]: weights are ratios of
// 1 + int (1 + ... + t^{n-1}) dtau, trunk weights solve the level equalities
// and the last one is raised by `give` (> 1) to leave slack.
inline Constructed constructed_che(Gen& g, long eta, long kappa, long p, const Scalar& give) {
  Constructed out;
  out.pw.kappa = kappa;
  out.pw.p = p;
  std::vector<Scalar> raw;
  for (long i = 0; i < eta; ++i) {
    momentkit::CAMeasure tau =
        momentkit::CAMeasure::make(0, g.measure(int(g.integer(1, 2)), Scalar(1, 2), Scalar(1), 6));
    // keep int 1/t^{kappa+1} dtau small so the trunk recursion stays solvable
    Scalar big = momentkit::ca_moment(tau, -kappa - 1);
    tau = momentkit::scaled(tau, Scalar(1, 4) / (1 + big));
    auto gam = momentkit::ca_reconstruct(Scalar(1), tau, std::size_t(p + 1));
    momentkit::BranchClass b;
    for (long j = 2; j <= p; ++j) b.higher_sq.push_back(gam[std::size_t(j - 1)] / gam[std::size_t(j - 2)]);
    raw.push_back(g.rational(Scalar(1, 2), Scalar(2), 4));
    out.pw.branches.push_back(b);
    out.taus.push_back(tau);
  }
  auto B = [&](const std::vector<Scalar>& L, long k) {
    Scalar acc = 0;
    for (std::size_t i = 0; i < L.size(); ++i) acc += L[i] * momentkit::ca_moment(out.taus[i], -k - 1);
    return acc;
  };
  // level 0: 1 + sum L_i int 1/t dtau_i = sum L_i
  Scalar denom = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) denom += raw[i] * (1 - momentkit::ca_moment(out.taus[i], -1));
  Scalar c = 1 / denom;
  if (kappa == 0) c *= give;  // sum L grows faster than the left side
  std::vector<Scalar> L;
  for (auto& r : raw) L.push_back(r * c);
  for (std::size_t i = 0; i < L.size(); ++i) out.pw.branches[i].l1_sq_total = L[i];
  Scalar prod = 1;
  for (long k = 1; k <= kappa; ++k) {
    // 1 + prod * w * B_k = w
    Scalar w = 1 / (1 - prod * B(L, k));
    if (k == kappa) w *= give;
    out.pw.trunk_sq.push_back(w);
    prod *= w;
  }
  return out;
}

inline bool close(double a, double b, double rel) { return std::fabs(a - b) <= rel * std::max(1.0, std::fabs(b)); }

}  // namespace mktest
