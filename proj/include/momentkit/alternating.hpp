#pragma once

#include "momentkit/backward.hpp"

namespace momentkit {

// Measure on [0, 1]: a point mass at 0 plus atoms in (0, 1].
struct CAMeasure {
  Scalar zero_mass = 0;
  AtomicMeasure positive;

  static CAMeasure make(const Scalar& zero_mass, AtomicMeasure positive);
  Scalar total() const { return zero_mass + total_mass(positive); }
};

bool operator==(const CAMeasure& a, const CAMeasure& b);
std::string format_ca_measure(const CAMeasure& tau);

// int t^k dtau; k < 0 needs zero_mass == 0.
Scalar ca_moment(const CAMeasure& tau, long k);

std::vector<Scalar> increments(const std::vector<Scalar>& c);

struct CAVerdict {
  bool extendable = false;
  CAMeasure tau;                // represents the increments of c
  PositivityVerdict increments; // Hausdorff verdict on [0, 1]
};

// c has a completely alternating extension iff its increments are a moment
// sequence on [0, 1]. tau avoids an atom at 0 whenever that is possible.
CAVerdict has_ca_extension(const std::vector<Scalar>& c, const Context& ctx = default_context());

std::vector<Scalar> ca_scale(const std::vector<Scalar>& c, const Scalar& lambda);
CAMeasure scaled(const CAMeasure& tau, const Scalar& lambda);

// c_n = c_0 + int (1 + ... + t^{n-1}) dtau
std::vector<Scalar> ca_reconstruct(const Scalar& c0, const CAMeasure& tau, std::size_t len);

struct CABackwardResult {
  bool extendable = false;
  CAMeasure rho;          // t^{-r} dtau + slack * delta_0
  Scalar slack = 0;       // surplus in the deepest inequality
  std::string violation;  // first failed condition when not extendable
};

// Prefix is c_{-r}, ..., c_{-1}. Interior slots need equality, the deepest an
// inequality.
CABackwardResult ca_backward_extend(const std::vector<Scalar>& c, const std::vector<Scalar>& prefix,
                                    const std::optional<CAMeasure>& tau = std::nullopt,
                                    const Context& ctx = default_context());

}  // namespace momentkit
