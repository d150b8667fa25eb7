#include "momentkit/alternating.hpp"

namespace momentkit {

CAMeasure CAMeasure::make(const Scalar& zero_mass, AtomicMeasure positive) {
  if (zero_mass < 0) throw Error(ErrorCode::DomainError, "negative mass at 0");
  for (const auto& a : positive.atoms)
    if (a.x > 1) throw Error(ErrorCode::DomainError, "CA measure atom above 1: " + format_scalar(a.x));
  return {zero_mass, std::move(positive)};
}

bool operator==(const CAMeasure& a, const CAMeasure& b) {
  return a.zero_mass == b.zero_mass && a.positive == b.positive;
}

std::string format_ca_measure(const CAMeasure& tau) {
  std::string body = format_measure(tau.positive);
  if (tau.zero_mass == 0) return body;
  std::string head = "{0: " + format_scalar(tau.zero_mass);
  return body == "{}" ? head + "}" : head + ", " + body.substr(1);
}

Scalar ca_moment(const CAMeasure& tau, long k) {
  if (k == 0) return tau.total();
  if (k < 0 && tau.zero_mass != 0) throw Error(ErrorCode::ZeroAtomError, "negative moment of a measure with mass at 0");
  return moment(tau.positive, k);
}

std::vector<Scalar> increments(const std::vector<Scalar>& c) {
  std::vector<Scalar> d;
  for (std::size_t k = 0; k + 1 < c.size(); ++k) d.push_back(c[k + 1] - c[k]);
  return d;
}

CAVerdict has_ca_extension(const std::vector<Scalar>& c, const Context& ctx) {
  if (c.empty()) throw Error(ErrorCode::InsufficientMoments, "empty sequence");
  CAVerdict v;
  if (c.size() == 1) {
    v.extendable = true;
    v.increments.cls = Positivity::SingularlyPositive;
    return v;
  }
  auto d = increments(c);
  v.increments = classify_compact(d, 0, 1, ctx);
  if (v.increments.cls == Positivity::NotPositive) return v;
  v.extendable = true;
  if (v.increments.strict()) {
    v.tau = CAMeasure::make(0, minimal_measure_half_open(d, ctx));
    return v;
  }
  DeterminateMeasure dm = determinate_measure(d, Domain::compact(0, 1), ctx);
  Scalar zero = 0;
  std::vector<Atom> rest;
  for (const auto& a : dm.atoms) {
    if (a.x == 0)
      zero += a.m;
    else
      rest.push_back(a);
  }
  v.tau = CAMeasure::make(zero, AtomicMeasure::make(std::move(rest), dm.exact));
  return v;
}

std::vector<Scalar> ca_scale(const std::vector<Scalar>& c, const Scalar& lambda) {
  if (lambda <= 0) throw Error(ErrorCode::DomainError, "CA scale must be positive");
  std::vector<Scalar> out;
  for (const auto& v : c) out.push_back(lambda * v);
  return out;
}

CAMeasure scaled(const CAMeasure& tau, const Scalar& lambda) {
  if (lambda <= 0) throw Error(ErrorCode::DomainError, "CA scale must be positive");
  CAMeasure out = tau;
  out.zero_mass *= lambda;
  for (auto& a : out.positive.atoms) a.m *= lambda;
  return out;
}

std::vector<Scalar> ca_reconstruct(const Scalar& c0, const CAMeasure& tau, std::size_t len) {
  std::vector<Scalar> out;
  Scalar acc = c0;
  for (std::size_t n = 0; n < len; ++n) {
    out.push_back(acc);
    acc += ca_moment(tau, long(n));
  }
  return out;
}

CABackwardResult ca_backward_extend(const std::vector<Scalar>& c, const std::vector<Scalar>& prefix,
                                    const std::optional<CAMeasure>& tau_in, const Context& ctx) {
  if (prefix.empty()) throw Error(ErrorCode::BadIndex, "empty prefix");
  if (c.empty()) throw Error(ErrorCode::InsufficientMoments, "empty sequence");
  CAMeasure tau;
  if (tau_in) {
    tau = *tau_in;
  } else {
    CAVerdict v = has_ca_extension(c, ctx);
    if (!v.extendable) throw Error(ErrorCode::NotAMomentSequence, "sequence has no CA extension");
    tau = v.tau;
  }
  if (tau.zero_mass != 0) throw Error(ErrorCode::ZeroAtomError, "tau has an atom at 0");
  long r = long(prefix.size());
  auto cm = [&](long k) -> const Scalar& { return k >= 0 ? c[std::size_t(k)] : prefix[std::size_t(r + k)]; };
  CABackwardResult res;
  for (long k = 0; k <= r - 2; ++k) {
    Scalar rhs = cm(-k - 1) + moment(tau.positive, -(k + 1));
    if (!equal_tol(cm(-k), rhs, ctx)) {
      res.violation = "c_" + std::to_string(-k) + " must equal c_" + std::to_string(-k - 1) + " + int t^" +
                      std::to_string(-(k + 1)) + " dtau = " + format_scalar(rhs);
      return res;
    }
  }
  Scalar bound = cm(-r) + moment(tau.positive, -r);
  Scalar slack = cm(-r + 1) - bound;
  Scalar scale = abs(cm(-r + 1)) + abs(bound);
  int sg = sign_tol(slack, scale, ctx);
  if (sg < 0) {
    res.violation = "c_" + std::to_string(-r + 1) + " must be at least " + format_scalar(bound);
    return res;
  }
  if (sg == 0) slack = 0;
  res.extendable = true;
  res.slack = slack;
  res.rho = CAMeasure::make(slack, tilt(tau.positive, -r));
  return res;
}

}  // namespace momentkit
