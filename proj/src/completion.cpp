#include "momentkit/completion.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace momentkit {

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Feasible: return "Feasible";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::Unknown: return "Unknown";
  }
  return "?";
}

namespace {

std::vector<Scalar> prepend(const Scalar& x, const std::vector<Scalar>& s) {
  std::vector<Scalar> out{x};
  out.insert(out.end(), s.begin(), s.end());
  return out;
}

Scalar trunk_product(const std::vector<Scalar>& trunk_sq, long k) {
  Scalar p = 1;
  for (long j = 0; j < k; ++j) p *= trunk_sq[std::size_t(j)];
  return p;
}

// Branch data as a moment window s_0..s_T.
std::vector<Scalar> gamma_products(const std::vector<Scalar>& higher_sq) {
  std::vector<Scalar> g{Scalar(1)};
  for (const auto& v : higher_sq) g.push_back(g.back() * v);
  return g;
}

struct LevelProblem {
  CompletionCertificate::Kind kind;
  Domain dom;
  long kappa = 0, T = 0;
  std::vector<Scalar> W;
  std::vector<std::vector<Scalar>> data;
  std::vector<Scalar> targets;  // level l uses targets[l-1]
};

enum class Eval { Ok, NotPositive, NoLimit };

struct SlotEval {
  Eval status = Eval::Ok;
  Threshold th;
};

SlotEval slot_threshold(const std::vector<Scalar>& tail, SlotKind kind, long N, const Domain& d,
                        const Context& ctx) {
  SlotEval out;
  try {
    std::vector<Scalar> window = tail;
    if (kind == SlotKind::Forced) {
      if (long(tail.size()) < N + 1) throw Error(ErrorCode::InsufficientMoments, "forced window too short");
      window.resize(std::size_t(N + 1));
    }
    // thresholds of singular tails exist on (0,1] but admit no strict extension
    if (!classify(window, d, ctx).strict()) throw Error(ErrorCode::NotStrictlyPositive, "tail is not strictly positive");
    out.th = threshold(window, d, ctx);
  } catch (const Error& e) {
    out.status = e.code() == ErrorCode::ConvergenceError ? Eval::NoLimit : Eval::NotPositive;
  }
  return out;
}

SolveOutcome unknown(const std::string& why) {
  SolveOutcome o;
  o.status = SolveStatus::Unknown;
  o.reason = why;
  return o;
}

SolveOutcome infeasible(const std::string& why, bool numeric) {
  SolveOutcome o;
  o.status = SolveStatus::Infeasible;
  o.reason = why;
  o.numeric = numeric;
  return o;
}

std::string cls_name(std::size_t c) { return "class " + std::to_string(c); }

// Rational close to x with a small denominator.
Scalar tidy(double x) {
  double w = std::max(1e-12, std::fabs(x) * 1e-12);
  return simplest_rational(from_double(x - w), from_double(x + w));
}

// Minimal measure for the top (non-unique) ray index: pick the member of the
// psi family with the least sum of atoms.
AtomicMeasure top_index_measure(const MomentSequence& seq, const Context& ctx) {
  double t = to_double(t_inf(seq.values, ctx).value);
  auto root_sum = [&](double y) {
    try {
      AtomicMeasure m = psi(seq.values, tidy(std::exp(y)), ctx);
      double s = 0;
      for (const auto& a : m.atoms) s += to_double(a.x);
      return s;
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  double lo = std::log(t + std::max(1e-6, 1e-4 * t)), hi = std::log(1e3 * (t + 1));
  const double g = (std::sqrt(5.0) - 1) / 2;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = root_sum(x1), f2 = root_sum(x2);
  for (int it = 0; it < 50; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = root_sum(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = root_sum(x2);
    }
  }
  AtomicMeasure m = psi(seq.values, tidy(std::exp((lo + hi) / 2)), ctx);
  AtomicMeasure mu = tilt(m, -seq.first_index);
  if (!reproduces(mu, seq)) throw Error(ErrorCode::DegenerateInput, "psi member fails to reproduce the window");
  return mu;
}

std::vector<Scalar> completed_weights(const AtomicMeasure& mu, CompletionCertificate::Kind kind, long p) {
  std::vector<Scalar> out;
  if (kind == CompletionCertificate::Kind::Subnormal) {
    for (long j = 2; j <= p + 8; ++j) out.push_back(moment(mu, j - 1) / moment(mu, j - 2));
  } else {
    CAMeasure tau{0, mu};
    Scalar g_prev = 1, g = 1;
    for (long j = 2; j <= p + 8; ++j) {
      g_prev = g;
      g += ca_moment(tau, j - 2);
      out.push_back(g / g_prev);
    }
  }
  return out;
}

SolveOutcome finish(const LevelProblem& lp, const PartialWeights& pw, const std::vector<HalfInt>& K,
                    const std::vector<std::vector<Scalar>>& tails, std::vector<LevelRecord> levels, bool numeric,
                    const Context& ctx) {
  CompletionCertificate cert;
  cert.kind = lp.kind;
  cert.data = pw;
  cert.levels = std::move(levels);
  try {
    for (std::size_t c = 0; c < tails.size(); ++c) {
      BranchCertificate bc;
      bc.K = K[c];
      bc.sequence = MomentSequence{-(lp.kappa + 1), tails[c]};
      long N = K[c].twice - 1;
      if (N <= lp.T + lp.kappa + 1)
        bc.measure = indexed_measure(bc.sequence, K[c], lp.dom, ctx);
      else
        bc.measure = top_index_measure(bc.sequence, ctx);
      bc.completed_sq = completed_weights(bc.measure, lp.kind, pw.p);
      cert.branches.push_back(std::move(bc));
    }
  } catch (const Error& e) {
    return unknown(std::string("measure recovery failed: ") + e.what());
  }
  Boundedness b = is_bounded(full_weights(cert));
  cert.norm_sq = b.norm_sq;
  CertificateReport rep = verify_certificate(cert, ctx.depth, ctx);
  if (!rep.valid) return unknown("certificate failed re-verification: " + rep.violation);
  SolveOutcome o;
  o.status = SolveStatus::Feasible;
  o.certificate = std::move(cert);
  o.K = K;
  o.numeric = numeric;
  return o;
}

// Golden-section maximisation on [lo, hi].
double golden_max(const std::function<double(double)>& f, double lo, double hi, int iters, double* best_val) {
  const double g = (std::sqrt(5.0) - 1) / 2;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < iters; ++it) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  double x = f1 >= f2 ? x1 : x2;
  if (best_val) *best_val = std::max(f1, f2);
  return x;
}

SolveOutcome solve_levels(const LevelProblem& lp, const PartialWeights& pw, const std::vector<HalfInt>& K,
                          const Context& ctx) {
  const std::size_t nc = lp.data.size();
  std::vector<long> N(nc);
  for (std::size_t c = 0; c < nc; ++c) N[c] = K[c].twice - 1;

  // the given data must already obey the slot rules
  for (std::size_t c = 0; c < nc; ++c) {
    const auto& s = lp.data[c];
    for (long k = lp.T - 1; k >= 0; --k) {
      std::vector<Scalar> from_k(s.begin() + k, s.end());
      if (slot_kind(k, lp.T, N[c]) == SlotKind::Strict) {
        if (!classify(from_k, lp.dom, ctx).strict())
          return infeasible(cls_name(c) + ": data moments from s_" + std::to_string(k) +
                                " are not strictly positive, as index " + K[c].str() + " requires",
                            false);
      } else {
        SlotEval ev = slot_threshold(std::vector<Scalar>(from_k.begin() + 1, from_k.end()), SlotKind::Forced, N[c],
                                     lp.dom, ctx);
        if (ev.status != Eval::Ok || !equal_tol(s[std::size_t(k)], ev.th.value, ctx))
          return infeasible(cls_name(c) + ": data moment s_" + std::to_string(k) +
                                " is not the forced threshold for index " + K[c].str(),
                            false);
      }
    }
  }

  std::vector<std::vector<Scalar>> tails = lp.data;
  std::vector<LevelRecord> records;
  bool numeric = false;
  int free_levels = 0;
  long last_free = -1;
  bool last_free_global = false;

  auto fail = [&](long level, const std::string& why, bool inexact, const Scalar& margin,
                  const Scalar& scale) -> SolveOutcome {
    if (inexact && abs(margin) <= from_double(1e-7) * scale)
      return unknown("level " + std::to_string(level) + " too close to call: " + why);
    if (free_levels == 0) return infeasible("level " + std::to_string(level) + ": " + why, inexact);
    if (free_levels == 1 && last_free == level - 1 && last_free_global)
      return infeasible("level " + std::to_string(level) + " after optimising the split at level " +
                            std::to_string(last_free) + ": " + why,
                        true);
    return unknown("level " + std::to_string(level) + " failed after free choices: " + why);
  };

  for (long level = 1; level <= lp.kappa + 1; ++level) {
    const long k = -level;
    const bool eq = level <= lp.kappa;
    const Scalar& R = lp.targets[std::size_t(level - 1)];
    LevelRecord rec;
    rec.level = level;
    rec.equality = eq;
    rec.target = R;
    std::vector<int> S;
    Scalar F = 0;
    for (std::size_t c = 0; c < nc; ++c) {
      SlotKind kind = slot_kind(k, lp.T, N[c]);
      SlotEval ev = slot_threshold(tails[c], kind, N[c], lp.dom, ctx);
      if (ev.status == Eval::NoLimit) return unknown(cls_name(c) + ": threshold limit did not converge");
      if (ev.status == Eval::NotPositive)
        return fail(level, cls_name(c) + " tail lost strict positivity", false, Scalar(1), Scalar(1));
      rec.thresholds.push_back(ev.th.value);
      rec.forced.push_back(kind == SlotKind::Forced);
      rec.exact = rec.exact && ev.th.exact;
      if (kind == SlotKind::Strict) S.push_back(int(c));
      F += lp.W[c] * ev.th.value;
    }
    Scalar D = R - F;
    rec.residual = D;
    Scalar scale = std::max({Scalar(1), abs(R), abs(F)});
    Context loose = ctx;
    if (!rec.exact) loose.mode = Arith::Float;
    int sg = sign_tol(D, scale, loose);
    numeric = numeric || !rec.exact;

    std::vector<Scalar> values = rec.thresholds;
    if (S.empty()) {
      if (eq && sg != 0)
        return fail(level, "forced values give " + format_decimal(F) + ", target " + format_decimal(R), !rec.exact,
                    D, scale);
      if (!eq && sg < 0)
        return fail(level, "forced values give " + format_decimal(F) + ", above the bound " + format_decimal(R),
                    !rec.exact, D, scale);
    } else {
      if (sg <= 0)
        return fail(level, "thresholds sum to " + format_decimal(F) + ", leaving no room below " + format_decimal(R),
                    !rec.exact, D, scale);
      if (!eq) {
        // halfway into the slack, rounded to a short rational
        Scalar share = D / (2 * long(S.size()));
        for (int c : S) {
          Scalar u = share / lp.W[std::size_t(c)];
          values[std::size_t(c)] = simplest_rational(values[std::size_t(c)] + u / 2, values[std::size_t(c)] + 3 * u / 2);
        }
      } else if (S.size() == 1) {
        int c = S[0];
        values[std::size_t(c)] += D / lp.W[std::size_t(c)];
      } else {
        // split D to leave the most room at the next level
        const Scalar& Rn = lp.targets[std::size_t(level)];
        auto next_cost = [&](std::size_t c, const Scalar& v) -> double {
          std::vector<Scalar> tail = prepend(v, tails[c]);
          if (!classify(tail, lp.dom, ctx).strict()) return std::numeric_limits<double>::infinity();
          SlotEval ev = slot_threshold(tail, slot_kind(k - 1, lp.T, N[c]), N[c], lp.dom, ctx);
          if (ev.status != Eval::Ok) return std::numeric_limits<double>::infinity();
          return to_double(lp.W[c] * ev.th.value);
        };
        double fixed = 0;
        for (std::size_t c = 0; c < nc; ++c)
          if (rec.forced[c]) fixed += next_cost(c, values[c]);
        std::vector<double> alpha(S.size(), 1.0 / double(S.size()));
        auto value_of = [&](std::size_t idx, double a) -> Scalar {
          int c = S[idx];
          return rec.thresholds[std::size_t(c)] + tidy(a) * D / lp.W[std::size_t(c)];
        };
        std::vector<double> cost(S.size());
        for (std::size_t i = 0; i < S.size(); ++i) cost[i] = next_cost(std::size_t(S[i]), value_of(i, alpha[i]));
        int sweeps = S.size() == 2 ? 1 : 4;
        for (int sw = 0; sw < sweeps; ++sw)
          for (std::size_t i = 0; i < S.size(); ++i)
            for (std::size_t j = i + 1; j < S.size(); ++j) {
              double pool = alpha[i] + alpha[j];
              auto f = [&](double u) {
                return -(next_cost(std::size_t(S[i]), value_of(i, u * pool)) +
                         next_cost(std::size_t(S[j]), value_of(j, (1 - u) * pool)));
              };
              double u = golden_max(f, 1e-9, 1 - 1e-9, 60, nullptr);
              alpha[i] = u * pool;
              alpha[j] = (1 - u) * pool;
              cost[i] = next_cost(std::size_t(S[i]), value_of(i, alpha[i]));
              cost[j] = next_cost(std::size_t(S[j]), value_of(j, alpha[j]));
            }
        // the last share takes the exact remainder so the level equation holds exactly
        Scalar used = 0;
        for (std::size_t i = 0; i + 1 < S.size(); ++i) {
          Scalar a = tidy(alpha[i]);
          values[std::size_t(S[i])] = rec.thresholds[std::size_t(S[i])] + a * D / lp.W[std::size_t(S[i])];
          used += a;
        }
        int last = S.back();
        values[std::size_t(last)] = rec.thresholds[std::size_t(last)] + (1 - used) * D / lp.W[std::size_t(last)];
        (void)fixed;
        (void)Rn;
        ++free_levels;
        last_free = level;
        last_free_global = S.size() == 2;
      }
      for (int c : S) {
        if (!classify(prepend(values[std::size_t(c)], tails[std::size_t(c)]), lp.dom, ctx).strict()) {
          if (!rec.exact) return unknown("level " + std::to_string(level) + ": chosen value sits on a rounded threshold");
          return unknown("level " + std::to_string(level) + ": chosen value is not strictly above the threshold");
        }
      }
    }
    for (std::size_t c = 0; c < nc; ++c) tails[c] = prepend(values[c], tails[c]);
    rec.values = values;
    records.push_back(std::move(rec));
  }
  return finish(lp, pw, K, tails, std::move(records), numeric, ctx);
}

SolveOutcome sweep(const LevelProblem& lp, const PartialWeights& pw, const std::vector<HalfInt>& K_in,
                   HalfInt lo, HalfInt hi, long step, const Context& ctx) {
  const std::size_t nc = lp.data.size();
  if (!K_in.empty()) {
    if (K_in.size() != nc) throw Error(ErrorCode::ArityError, "one index per branch class");
    for (const auto& k : K_in)
      if (k < lo || k > hi || (step == 2 && k.twice % 2 != 0))
        throw Error(ErrorCode::BadIndex, "index " + k.str() + " outside [" + lo.str() + "," + hi.str() + "]");
    return solve_levels(lp, pw, K_in, ctx);
  }
  std::vector<HalfInt> K(nc, lo);
  long combos = 1;
  for (std::size_t c = 0; c < nc; ++c) {
    combos *= (hi.twice - lo.twice) / step + 1;
    if (combos > 4096) throw Error(ErrorCode::Unsupported, "too many index vectors to sweep; pass K explicitly");
  }
  bool any_unknown = false, any_numeric = false;
  std::string first_reason, unknown_reason;
  while (true) {
    SolveOutcome o = solve_levels(lp, pw, K, ctx);
    if (o.status == SolveStatus::Feasible) return o;
    if (o.status == SolveStatus::Unknown) {
      any_unknown = true;
      if (unknown_reason.empty()) unknown_reason = "K=" + K[0].str() + "...: " + o.reason;
    }
    any_numeric = any_numeric || o.numeric;
    if (first_reason.empty()) first_reason = o.reason;
    std::size_t c = 0;
    while (c < nc) {
      K[c].twice += step;
      if (K[c] <= hi) break;
      K[c] = lo;
      ++c;
    }
    if (c == nc) break;
  }
  if (any_unknown) return unknown("no index vector succeeded; " + unknown_reason);
  return infeasible("every admissible index vector fails; e.g. " + first_reason, any_numeric);
}

LevelProblem subnormal_problem(const PartialWeights& pw) {
  LevelProblem lp;
  lp.kind = CompletionCertificate::Kind::Subnormal;
  lp.dom = Domain::ray();
  lp.kappa = *pw.kappa;
  lp.T = pw.p - 1;
  for (const auto& b : pw.branches) {
    lp.W.push_back(b.l1_sq_total);
    lp.data.push_back(gamma_products(b.higher_sq));
  }
  for (long k = 0; k <= lp.kappa; ++k) lp.targets.push_back(Scalar(1) / trunk_product(pw.trunk_sq, k));
  return lp;
}

LevelProblem che_problem(const PartialWeights& pw) {
  LevelProblem lp;
  lp.kind = CompletionCertificate::Kind::CHE;
  lp.dom = Domain::half_open();
  lp.kappa = *pw.kappa;
  lp.T = pw.p - 2;
  for (const auto& b : pw.branches) {
    lp.W.push_back(b.l1_sq_total);
    auto g = gamma_products(b.higher_sq);
    std::vector<Scalar> d;
    for (std::size_t k = 0; k + 1 < g.size(); ++k) d.push_back(g[k + 1] - g[k]);
    lp.data.push_back(d);
  }
  Scalar L = pw.l1_sum();
  lp.targets.push_back(L - 1);
  for (long k = 1; k <= lp.kappa; ++k)
    lp.targets.push_back((pw.trunk_sq[std::size_t(k - 1)] - 1) / trunk_product(pw.trunk_sq, k));
  return lp;
}

bool is_flat(const PartialWeights& pw) {
  for (const auto& b : pw.branches)
    if (b.higher_sq != pw.branches[0].higher_sq) return false;
  return true;
}

}  // namespace

FullWeights full_weights(const CompletionCertificate& cert) {
  FullWeights w;
  w.kappa = cert.data.kappa;
  w.trunk_sq = cert.data.trunk_sq;
  for (std::size_t c = 0; c < cert.data.branches.size(); ++c) {
    const auto& bd = cert.data.branches[c];
    FullBranch fb;
    fb.l1_sq_total = bd.l1_sq_total;
    fb.count = bd.count;
    fb.gen.listed_sq = bd.higher_sq;
    if (cert.kind == CompletionCertificate::Kind::Subnormal) {
      fb.gen.kind = BranchGenerator::Kind::Subnormal;
      fb.gen.mu = cert.branches[c].measure;
    } else {
      fb.gen.kind = BranchGenerator::Kind::CHE;
      fb.gen.tau = CAMeasure{0, cert.branches[c].measure};
    }
    w.branches.push_back(std::move(fb));
  }
  return w;
}

CertificateReport verify_certificate(const CompletionCertificate& cert, int depth, const Context& ctx) {
  FullWeights w = full_weights(cert);
  if (cert.branches.size() != cert.data.branches.size())
    throw Error(ErrorCode::ArityError, "one certificate branch per class");
  if (cert.kind == CompletionCertificate::Kind::Subnormal) {
    std::vector<AtomicMeasure> mus;
    for (const auto& b : cert.branches) mus.push_back(b.measure);
    return verify_subnormal_certificate(w, mus, depth, ctx);
  }
  std::vector<CAMeasure> taus;
  for (const auto& b : cert.branches) taus.push_back(CAMeasure{0, b.measure});
  return verify_che_certificate(w, taus, depth, ctx);
}

SolveOutcome solve_subnormal(const PartialWeights& pw, const std::vector<HalfInt>& K, const Context& ctx) {
  pw.validate();
  if (!pw.kappa) throw Error(ErrorCode::Unsupported, "infinite trunks go through kappa_infinite_probe");
  LevelProblem lp = subnormal_problem(pw);
  HalfInt hi = HalfInt::of((pw.p + *pw.kappa + 2) / 2);
  return sweep(lp, pw, K, HalfInt::of(1), hi, 2, ctx);
}

SolveOutcome solve_che(const PartialWeights& pw, const std::vector<HalfInt>& K, const Context& ctx) {
  pw.validate();
  for (const auto& b : pw.branches)
    for (const auto& v : b.higher_sq)
      if (v <= 1) throw Error(ErrorCode::PreconditionError, "CHE solving needs lambda_{i,j} > 1 for j >= 2");
  if (!pw.kappa || pw.p == 1) return flat_che_completion(pw, ctx);
  LevelProblem lp = che_problem(pw);
  return sweep(lp, pw, K, HalfInt{1}, HalfInt{pw.p + *pw.kappa}, 1, ctx);
}

SolveOutcome flat_che_completion(const PartialWeights& pw, const Context& ctx) {
  pw.validate();
  if (!is_flat(pw)) throw Error(ErrorCode::PreconditionError, "branch data are not identical");
  const auto& higher = pw.branches[0].higher_sq;
  Scalar L = pw.l1_sum();
  CompletionCertificate cert;
  cert.kind = CompletionCertificate::Kind::CHE;
  cert.data = pw;

  if (!pw.kappa) {
    // an infinite trunk forces the isometric completion
    for (std::size_t i = 0; i < pw.trunk_sq.size(); ++i)
      if (pw.trunk_sq[i] != 1) return infeasible("infinite trunk needs unit trunk weights", false);
    for (const auto& v : higher)
      if (v != 1) return infeasible("infinite trunk needs unit branch weights", false);
    if (L != 1) return infeasible("infinite trunk needs sum lambda_{i,1}^2 = 1", false);
    for (std::size_t c = 0; c < pw.branches.size(); ++c) {
      BranchCertificate bc;
      bc.K = HalfInt{0};
      bc.completed_sq.assign(std::size_t(pw.p + 7), Scalar(1));
      cert.branches.push_back(bc);
    }
    cert.norm_sq = is_bounded(full_weights(cert)).norm_sq;
    SolveOutcome o;
    o.status = SolveStatus::Feasible;
    o.certificate = cert;
    return o;
  }

  long kappa = *pw.kappa;
  // root sequence c_0..c_{kappa+p}
  std::vector<Scalar> croot{Scalar(1)};
  for (long n = 1; n <= kappa; ++n) croot.push_back(croot.back() * pw.trunk_sq[std::size_t(kappa - n)]);
  Scalar P = trunk_product(pw.trunk_sq, kappa);
  auto g = gamma_products(higher);
  for (const auto& v : g) croot.push_back(P * L * v);
  CAVerdict cv = has_ca_extension(croot, ctx);
  if (!cv.extendable)
    return infeasible("root sequence has no CA extension (" + std::string(positivity_name(cv.increments.cls)) +
                          " increments)",
                      false);
  cert.root_rho = cv.tau;
  // shared branch measure: t^{kappa+1} rho on (0,1], normalised by the trunk factor
  std::vector<Atom> atoms;
  for (const auto& a : cv.tau.positive.atoms) atoms.push_back({a.x, a.m * power(a.x, kappa + 1) / (P * L)});
  AtomicMeasure tau = AtomicMeasure::make(std::move(atoms), cv.tau.positive.exact);
  long T = pw.p - 2;
  for (std::size_t c = 0; c < pw.branches.size(); ++c) {
    BranchCertificate bc;
    bc.K = index_of(tau.atoms, Domain::half_open());
    bc.sequence = moments(tau, -(kappa + 1), std::max(T, -1L));
    bc.measure = tau;
    bc.completed_sq = completed_weights(tau, CompletionCertificate::Kind::CHE, pw.p);
    cert.branches.push_back(std::move(bc));
  }
  cert.norm_sq = is_bounded(full_weights(cert)).norm_sq;
  CertificateReport rep = verify_certificate(cert, ctx.depth, ctx);
  if (!rep.valid) return unknown("flat certificate failed re-verification: " + rep.violation);
  SolveOutcome o;
  o.status = SolveStatus::Feasible;
  o.certificate = std::move(cert);
  for (std::size_t c = 0; c < pw.branches.size(); ++c) o.K.push_back(o.certificate->branches[c].K);
  return o;
}

ProbeReport kappa_infinite_probe(const std::vector<Scalar>& trunk_stream, const std::vector<BranchClass>& branches,
                                 long p, long kappa_max, const Context& ctx) {
  if (long(trunk_stream.size()) < kappa_max)
    throw Error(ErrorCode::ArityError, "trunk stream shorter than kappa_max");
  ProbeReport rep;
  rep.verdict = "FeasibleTowardInfinity";
  Scalar bound = 0;
  for (long kappa = 0; kappa <= kappa_max; ++kappa) {
    PartialWeights pw;
    pw.kappa = kappa;
    pw.trunk_sq.assign(trunk_stream.begin(), trunk_stream.begin() + kappa);
    pw.branches = branches;
    pw.p = p;
    SolveOutcome o = solve_subnormal(pw, {}, ctx);
    ProbeStep step{kappa, o.status, std::nullopt, o.reason};
    if (o.certificate) step.norm_sq = o.certificate->norm_sq;
    rep.steps.push_back(step);
    if (o.status == SolveStatus::Infeasible) {
      rep.verdict = "InfeasibleAt";
      rep.infeasible_kappa = kappa;
      return rep;
    }
    if (o.status == SolveStatus::Unknown) {
      rep.verdict = "Unknown";
      return rep;
    }
    if (step.norm_sq) bound = std::max(bound, *step.norm_sq);
  }
  rep.bound_sq = bound;
  return rep;
}

namespace {

std::vector<Scalar> stampfli_squares(const std::vector<Scalar>& lambda) {
  if (lambda.size() != 4) throw Error(ErrorCode::ArityError, "four weights expected");
  std::vector<Scalar> sq;
  for (std::size_t i = 0; i < 4; ++i) {
    if (lambda[i] <= 0 || (i > 0 && lambda[i] <= lambda[i - 1]))
      throw Error(ErrorCode::PreconditionError, "weights must be positive and strictly increasing");
    sq.push_back(lambda[i] * lambda[i]);
  }
  return sq;
}

}  // namespace

StampfliResult stampfli_check(const std::vector<Scalar>& lambda) {
  auto q = stampfli_squares(lambda);
  Scalar d = q[2] - q[1];
  Scalar rhs = q[2] + q[0] * d * d / (q[1] - q[0]);
  return {q[3] >= rhs, q[3], rhs};
}

StampfliResult stampfli_hankel_check(const std::vector<Scalar>& lambda) {
  auto q = stampfli_squares(lambda);
  Scalar d = q[2] - q[1];
  Scalar rhs = q[2] + q[0] * d * d / (q[2] * (q[1] - q[0]));
  return {q[3] >= rhs, q[3], rhs};
}

FlatnessReport flatness_verifier(const FullWeights& w, const std::vector<CAMeasure>& taus, long r, int depth,
                                 const Context& ctx) {
  if (r < 2) throw Error(ErrorCode::PreconditionError, "flatness order must be at least 2");
  CertificateReport rep = verify_che_certificate(w, taus, depth, ctx);
  if (!rep.valid) throw Error(ErrorCode::PreconditionError, "weights are not a verified CHE shift: " + rep.violation);
  for (const auto& b : w.branches)
    for (long j = 2; j <= depth; ++j)
      if (weight_sq(b, j) <= 1) throw Error(ErrorCode::PreconditionError, "flatness needs lambda_{i,j} > 1");
  auto same = [&](const Scalar& x, const Scalar& y) { return equal_tol(x, y, ctx); };
  for (long j = r; j <= depth; ++j)
    for (std::size_t c = 1; c < w.branches.size(); ++c)
      if (!same(weight_sq(w.branches[c], j), weight_sq(w.branches[0], j)))
        throw Error(ErrorCode::PreconditionError, "weights are not " + std::to_string(r) + "-flat");
  FlatnessReport out;
  out.two_flat = true;
  for (long j = 2; j < r && out.two_flat; ++j)
    for (std::size_t c = 1; c < w.branches.size(); ++c)
      if (!same(weight_sq(w.branches[c], j), weight_sq(w.branches[0], j))) {
        out.two_flat = false;
        out.witness = "lambda_{" + std::to_string(c) + "," + std::to_string(j) + "} differs from lambda_{0," +
                      std::to_string(j) + "}";
        break;
      }
  return out;
}

}  // namespace momentkit
