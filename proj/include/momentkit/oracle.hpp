#pragma once

// Brute-force cross-checks. Shares only the measure and scalar types with the
// library; positivity and quadrature are re-derived here from scratch.

#include "momentkit/positivity.hpp"

#include <cstdint>

namespace momentkit::oracle {

struct OracleConfig {
  int trials = 100;
  int k_min = 1, k_max = 4;          // atom count
  Scalar pos_lo = Scalar(1, 10);     // atom positions
  Scalar pos_hi = 10;
  long max_den = 12;                 // denominators of positions and masses
  std::uint64_t seed = 1;
  int resolution = 400;              // sweep points
  int grid_q = 12;                   // dyadic grid depth
};

// Deterministic per-trial seed.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

// K atoms, K uniform in [k_min, k_max], distinct rational positions in
// [pos_lo, pos_hi], rational masses in (0, 4].
AtomicMeasure random_measure(const OracleConfig& cfg);
AtomicMeasure random_measure(const OracleConfig& cfg, int K);

// Literal definition: positive on some grid interval [2^-i, 2^j] (Ray),
// [2^-i, 1] (HalfOpen), or the interval itself (Compact). Compact tests use
// the localizing matrices and all principal minors by cofactor expansion.
PositivityVerdict grid_classify(const std::vector<Scalar>& s, const Domain& d, const OracleConfig& cfg = {});
Positivity compact_minors(const std::vector<Scalar>& s, const Scalar& a, const Scalar& b);

struct SweepResult {
  double min = 0, max = 0;  // envelope of int 1/t over the sampled measures
  int samples = 0;          // valid representing measures found
};

// Samples representing measures on the domain in double precision: the Gauss
// measure and two-fixed-node families (odd n), the one-fixed-node family
// (even n), and returns the envelope of their reciprocal integrals.
SweepResult sweep_reciprocal(const std::vector<Scalar>& s, const Domain& d, const OracleConfig& cfg = {});

// Double-precision measure with prescribed nodes plus free nodes solved from
// orthogonality; nullopt when not a positive measure on the domain.
struct FloatAtom {
  double x, m;
};
std::optional<std::vector<FloatAtom>> quadrature(const std::vector<double>& s, const std::vector<double>& fixed,
                                                 const Domain& d);

}  // namespace momentkit::oracle
