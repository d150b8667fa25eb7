#pragma once

#include "momentkit/numeric.hpp"

#include <vector>

namespace momentkit {

struct Atom {
  Scalar x;
  Scalar m;
};

// Finitely atomic positive measure on (0, inf). Atoms sorted, distinct, with
// positive mass. exact == false when positions are root enclosures.
struct AtomicMeasure {
  std::vector<Atom> atoms;
  bool exact = true;

  static AtomicMeasure make(std::vector<Atom> atoms, bool exact = true);
  std::size_t size() const { return atoms.size(); }
  bool empty() const { return atoms.empty(); }
};

bool operator==(const AtomicMeasure& a, const AtomicMeasure& b);

Scalar moment(const AtomicMeasure& mu, long k);
MomentSequence moments(const AtomicMeasure& mu, long lo, long hi);
AtomicMeasure tilt(const AtomicMeasure& mu, long k);  // t^k dmu
AtomicMeasure scaled(const AtomicMeasure& mu, const Scalar& c);
Scalar total_mass(const AtomicMeasure& mu);
Scalar max_atom(const AtomicMeasure& mu);
std::string format_measure(const AtomicMeasure& mu);

// Masses rho_j with sum rho_j x_j^k = u[k - k0] for k = k0..k0+r-1.
std::vector<Scalar> vandermonde_masses(const std::vector<Scalar>& xs, const std::vector<Scalar>& u, long k0 = 0);

// True when mu reproduces s on its window: exactly for exact measures,
// otherwise within rel_tol relative to max(1, |s_k|).
bool reproduces(const AtomicMeasure& mu, const MomentSequence& s, double rel_tol = 1e-8);

}  // namespace momentkit
