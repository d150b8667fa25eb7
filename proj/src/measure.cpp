#include "momentkit/measure.hpp"

#include <algorithm>

namespace momentkit {

AtomicMeasure AtomicMeasure::make(std::vector<Atom> atoms, bool exact) {
  for (const auto& a : atoms) {
    if (a.x <= 0) throw Error(ErrorCode::DomainError, "atom position must be positive, got " + format_scalar(a.x));
    if (a.m <= 0) throw Error(ErrorCode::DomainError, "atom mass must be positive, got " + format_scalar(a.m));
  }
  std::sort(atoms.begin(), atoms.end(), [](const Atom& p, const Atom& q) { return p.x < q.x; });
  AtomicMeasure mu;
  mu.exact = exact;
  for (auto& a : atoms) {
    if (!mu.atoms.empty() && mu.atoms.back().x == a.x)
      mu.atoms.back().m += a.m;
    else
      mu.atoms.push_back(std::move(a));
  }
  return mu;
}

bool operator==(const AtomicMeasure& a, const AtomicMeasure& b) {
  if (a.atoms.size() != b.atoms.size()) return false;
  for (std::size_t i = 0; i < a.atoms.size(); ++i)
    if (a.atoms[i].x != b.atoms[i].x || a.atoms[i].m != b.atoms[i].m) return false;
  return true;
}

Scalar moment(const AtomicMeasure& mu, long k) {
  Scalar v = 0;
  for (const auto& a : mu.atoms) v += a.m * power(a.x, k);
  return v;
}

MomentSequence moments(const AtomicMeasure& mu, long lo, long hi) {
  MomentSequence s;
  s.first_index = lo;
  for (long k = lo; k <= hi; ++k) s.values.push_back(moment(mu, k));
  return s;
}

AtomicMeasure tilt(const AtomicMeasure& mu, long k) {
  AtomicMeasure r = mu;
  for (auto& a : r.atoms) a.m *= power(a.x, k);
  return r;
}

AtomicMeasure scaled(const AtomicMeasure& mu, const Scalar& c) {
  if (c <= 0) throw Error(ErrorCode::DomainError, "measure scale must be positive");
  AtomicMeasure r = mu;
  for (auto& a : r.atoms) a.m *= c;
  return r;
}

Scalar total_mass(const AtomicMeasure& mu) { return moment(mu, 0); }

Scalar max_atom(const AtomicMeasure& mu) { return mu.atoms.empty() ? Scalar(0) : mu.atoms.back().x; }

std::string format_measure(const AtomicMeasure& mu) {
  std::string out = "{";
  for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
    if (i) out += ", ";
    out += format_scalar(mu.atoms[i].x) + ": " + format_scalar(mu.atoms[i].m);
  }
  return out + "}";
}

std::vector<Scalar> vandermonde_masses(const std::vector<Scalar>& xs, const std::vector<Scalar>& u, long k0) {
  int r = int(xs.size());
  if (int(u.size()) < r) throw Error(ErrorCode::InsufficientMoments, "not enough moments to solve masses");
  Matrix a(r);
  std::vector<Scalar> y(static_cast<std::size_t>(r));
  for (int k = 0; k < r; ++k) {
    for (int j = 0; j < r; ++j) a(k, j) = power(xs[std::size_t(j)], k0 + k);
    y[std::size_t(k)] = u[std::size_t(k)];
  }
  return solve_linear(a, y);
}

bool reproduces(const AtomicMeasure& mu, const MomentSequence& s, double rel_tol) {
  Scalar tol = from_double(rel_tol);
  for (long k = s.first_index; k <= s.last_index(); ++k) {
    Scalar d = moment(mu, k) - s.at(k);
    if (mu.exact) {
      if (d != 0) return false;
    } else {
      Scalar scale = std::max(Scalar(1), abs(s.at(k)));
      if (abs(d) > tol * scale) return false;
    }
  }
  return true;
}

}  // namespace momentkit
