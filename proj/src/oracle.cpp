#include "momentkit/oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace momentkit::oracle {

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  // splitmix64 on the pair
  std::uint64_t z = seed * 0x9e3779b97f4a7c15ULL + trial + 0x632be59bd9b4e019ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

Scalar random_rational(std::mt19937_64& rng, const Scalar& lo, const Scalar& hi, long max_den) {
  std::uniform_int_distribution<long> den_d(1, std::max(1L, max_den));
  for (int attempt = 0; attempt < 1000; ++attempt) {
    long q = den_d(rng);
    Scalar lq = lo * q, hq = hi * q;
    mpz_class nlo, nhi;
    mpz_cdiv_q(nlo.get_mpz_t(), lq.get_num_mpz_t(), lq.get_den_mpz_t());
    mpz_fdiv_q(nhi.get_mpz_t(), hq.get_num_mpz_t(), hq.get_den_mpz_t());
    if (nlo > nhi) continue;
    mpz_class span = nhi - nlo + 1;
    std::uniform_int_distribution<unsigned long> pick(0, span.get_ui() - 1);
    Scalar v(nlo + pick(rng), q);
    v.canonicalize();
    if (v >= lo && v <= hi) return v;
  }
  return lo;
}

}  // namespace

AtomicMeasure random_measure(const OracleConfig& cfg, int K) {
  std::mt19937_64 rng(cfg.seed);
  std::vector<Atom> atoms;
  int guard = 0;
  while (int(atoms.size()) < K && guard++ < 10000) {
    Scalar x = random_rational(rng, cfg.pos_lo, cfg.pos_hi, cfg.max_den);
    if (std::any_of(atoms.begin(), atoms.end(), [&](const Atom& a) { return a.x == x; })) continue;
    Scalar m = random_rational(rng, Scalar(1, cfg.max_den), Scalar(4), cfg.max_den);
    atoms.push_back({x, m});
  }
  return AtomicMeasure::make(std::move(atoms));
}

AtomicMeasure random_measure(const OracleConfig& cfg) {
  std::mt19937_64 rng(trial_seed(cfg.seed, 0xabcdef));
  std::uniform_int_distribution<int> kd(cfg.k_min, cfg.k_max);
  return random_measure(cfg, kd(rng));
}

namespace {

using Mat = std::vector<std::vector<Scalar>>;

Scalar cofactor_det(const Mat& m) {
  std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  Scalar d = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c] == 0) continue;
    Mat sub;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Scalar> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      sub.push_back(row);
    }
    Scalar t = m[0][c] * cofactor_det(sub);
    if (c % 2) d -= t;
    else d += t;
  }
  return d;
}

Mat principal_sub(const Mat& m, unsigned mask) {
  Mat out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!(mask >> i & 1u)) continue;
    std::vector<Scalar> row;
    for (std::size_t j = 0; j < m.size(); ++j)
      if (mask >> j & 1u) row.push_back(m[i][j]);
    out.push_back(row);
  }
  return out;
}

// 2 = positive definite, 1 = semidefinite only, 0 = not semidefinite
int definiteness(const Mat& m) {
  std::size_t n = m.size();
  if (n == 0) return 2;
  bool pd = true;
  for (std::size_t k = 1; k <= n; ++k)
    if (cofactor_det(principal_sub(m, (1u << k) - 1)) <= 0) pd = false;
  if (pd) return 2;
  for (unsigned mask = 1; mask < (1u << n); ++mask)
    if (cofactor_det(principal_sub(m, mask)) < 0) return 0;
  return 1;
}

Mat build(std::size_t order, const std::function<Scalar(std::size_t)>& u) {
  Mat m(order, std::vector<Scalar>(order));
  for (std::size_t i = 0; i < order; ++i)
    for (std::size_t j = 0; j < order; ++j) m[i][j] = u(i + j);
  return m;
}

}  // namespace

Positivity compact_minors(const std::vector<Scalar>& s, const Scalar& a, const Scalar& b) {
  if (s.empty()) throw Error(ErrorCode::InsufficientMoments, "empty sequence");
  std::size_t n = s.size() - 1;
  int d1, d2;
  if (n % 2 == 1) {
    std::size_t m = (n - 1) / 2 + 1;
    d1 = definiteness(build(m, [&](std::size_t k) { return Scalar(s[k + 1] - a * s[k]); }));
    d2 = definiteness(build(m, [&](std::size_t k) { return Scalar(b * s[k] - s[k + 1]); }));
  } else {
    std::size_t m = n / 2;
    d1 = definiteness(build(m + 1, [&](std::size_t k) { return s[k]; }));
    d2 = definiteness(
        build(m, [&](std::size_t k) { return Scalar((a + b) * s[k + 1] - a * b * s[k] - s[k + 2]); }));
  }
  if (d1 == 0 || d2 == 0) return Positivity::NotPositive;
  if (d1 == 2 && d2 == 2) return Positivity::StrictlyPositive;
  return Positivity::SingularlyPositive;
}

PositivityVerdict grid_classify(const std::vector<Scalar>& s, const Domain& d, const OracleConfig& cfg) {
  PositivityVerdict v;
  v.method = "grid";
  if (d.kind == Domain::Kind::Compact) {
    v.cls = compact_minors(s, d.a, d.b);
    v.grid_a = d.a;
    v.grid_b = d.b;
    return v;
  }
  std::vector<std::pair<Scalar, Scalar>> grid;
  int q = cfg.grid_q;
  if (d.kind == Domain::Kind::HalfOpen) {
    for (int i = 1; i <= q; ++i) grid.push_back({pow2(-i), Scalar(1)});
  } else {
    // by increasing i + j, so the first hit is the smallest interval family
    for (int sum = 1; sum <= 2 * q; ++sum)
      for (int i = std::max(0, sum - q); i <= std::min(q, sum); ++i) grid.push_back({pow2(-i), pow2(sum - i)});
  }
  bool singular = false;
  for (const auto& [a, b] : grid) {
    Positivity p = compact_minors(s, a, b);
    if (p == Positivity::StrictlyPositive) {
      v.cls = p;
      v.grid_a = a;
      v.grid_b = b;
      return v;
    }
    if (p == Positivity::SingularlyPositive && !singular) {
      singular = true;
      v.grid_a = a;
      v.grid_b = b;
    }
  }
  v.cls = singular ? Positivity::SingularlyPositive : Positivity::NotPositive;
  return v;
}

namespace {

bool in_domain(double x, const Domain& d) {
  const double tol = 1e-9;
  switch (d.kind) {
    case Domain::Kind::Ray: return x > 0;
    case Domain::Kind::HalfOpen: return x > 0 && x <= 1 + tol;
    case Domain::Kind::Compact:
      return x >= to_double(d.a) * (1 - tol) - tol && x <= to_double(d.b) * (1 + tol) + tol;
  }
  return false;
}

}  // namespace

std::optional<std::vector<FloatAtom>> quadrature(const std::vector<double>& s, const std::vector<double>& fixed,
                                                 const Domain& d) {
  const long L = long(s.size());
  const long f = long(fixed.size());
  if ((L - f) % 2 != 0 || L - f < 0) return std::nullopt;
  const long r = (L - f) / 2;
  // F(t) = prod (t - fixed)
  std::vector<double> F{1.0};
  for (double x : fixed) {
    std::vector<double> G(F.size() + 1, 0.0);
    for (std::size_t i = 0; i < F.size(); ++i) {
      G[i + 1] += F[i];
      G[i] -= x * F[i];
    }
    F = G;
  }
  std::vector<double> nodes(fixed.begin(), fixed.end());
  if (r > 0) {
    // u_i = L(F t^i); monic R of degree r orthogonal to t^0..t^{r-1} against F dL
    auto u = [&](long i) {
      double acc = 0;
      for (std::size_t l = 0; l < F.size(); ++l) acc += F[l] * s[std::size_t(long(l) + i)];
      return acc;
    };
    if (f + 2 * r - 1 > L - 1) return std::nullopt;
    Eigen::MatrixXd A(r, r);
    Eigen::VectorXd rhs(r);
    for (long k = 0; k < r; ++k) {
      for (long j = 0; j < r; ++j) A(k, j) = u(j + k);
      rhs(k) = -u(r + k);
    }
    Eigen::VectorXd coef = A.colPivHouseholderQr().solve(rhs);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(r, r);
    for (long i = 1; i < r; ++i) C(i, i - 1) = 1;
    for (long i = 0; i < r; ++i) C(i, r - 1) = -coef(i);
    Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
    for (long i = 0; i < r; ++i) {
      auto z = es.eigenvalues()(i);
      if (std::fabs(z.imag()) > 1e-7 * std::max(1.0, std::fabs(z.real()))) return std::nullopt;
      nodes.push_back(z.real());
    }
  }
  std::sort(nodes.begin(), nodes.end());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!in_domain(nodes[i], d)) return std::nullopt;
    if (i > 0 && nodes[i] - nodes[i - 1] <= 1e-9 * nodes[i]) return std::nullopt;
  }
  // masses by least squares with rows scaled to unit size
  const long K = long(nodes.size());
  Eigen::MatrixXd V(L, K);
  Eigen::VectorXd b(L);
  for (long k = 0; k < L; ++k) {
    double scale = 0;
    for (long j = 0; j < K; ++j) scale = std::max(scale, std::pow(nodes[std::size_t(j)], double(k)));
    scale = std::max(scale, std::fabs(s[std::size_t(k)]));
    for (long j = 0; j < K; ++j) V(k, j) = std::pow(nodes[std::size_t(j)], double(k)) / scale;
    b(k) = s[std::size_t(k)] / scale;
  }
  Eigen::VectorXd m = V.colPivHouseholderQr().solve(b);
  for (long k = 0; k < L; ++k) {
    long double acc = 0;
    for (long j = 0; j < K; ++j) acc += (long double)m(j) * std::pow((long double)nodes[std::size_t(j)], (long double)k);
    double sk = s[std::size_t(k)];
    if (std::fabs(double(acc) - sk) > 1e-7 * std::max(1.0, std::fabs(sk))) return std::nullopt;
  }
  std::vector<FloatAtom> out;
  for (long j = 0; j < K; ++j) {
    if (!(m(j) > 0)) return std::nullopt;
    out.push_back({nodes[std::size_t(j)], m(j)});
  }
  return out;
}

SweepResult sweep_reciprocal(const std::vector<Scalar>& s, const Domain& d, const OracleConfig& cfg) {
  std::vector<double> sd;
  for (const auto& v : s) sd.push_back(to_double(v));
  SweepResult res;
  res.min = std::numeric_limits<double>::infinity();
  res.max = -std::numeric_limits<double>::infinity();
  auto take = [&](const std::vector<double>& fixed) {
    auto q = quadrature(sd, fixed, d);
    if (!q) return;
    double t = 0;
    for (const auto& a : *q) t += a.m / a.x;
    res.min = std::min(res.min, t);
    res.max = std::max(res.max, t);
    ++res.samples;
  };
  double lo, hi;
  switch (d.kind) {
    case Domain::Kind::Ray: lo = 1e-3, hi = 1e7; break;
    case Domain::Kind::HalfOpen: lo = 1e-4, hi = 1; break;
    default: lo = to_double(d.a), hi = to_double(d.b); break;
  }
  if (lo <= 0) lo = 1e-6 * hi;
  const int res_n = std::max(8, cfg.resolution);
  auto point = [&](int i, int n) { return lo * std::pow(hi / lo, double(i) / double(n - 1)); };
  bool odd = (s.size() % 2 == 0);
  if (odd) {
    take({});
    int n2 = std::max(8, int(std::sqrt(double(res_n)) * 2));
    for (int i = 0; i < n2; ++i)
      for (int j = i + 1; j < n2; ++j) take({point(i, n2), point(j, n2)});
    if (d.kind != Domain::Kind::Ray)
      for (int i = 0; i + 1 < res_n; ++i) take({point(i, res_n), hi});
  } else {
    for (int i = 0; i < res_n; ++i) take({point(i, res_n)});
  }
  return res;
}

}  // namespace momentkit::oracle
