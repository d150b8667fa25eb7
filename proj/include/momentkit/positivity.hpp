#pragma once

#include "momentkit/measure.hpp"

#include <optional>
#include <string>
#include <vector>

namespace momentkit {

enum class Positivity { NotPositive, SingularlyPositive, StrictlyPositive };
const char* positivity_name(Positivity p);

struct Domain {
  enum class Kind { Compact, Ray, HalfOpen };
  Kind kind = Kind::Ray;
  Scalar a = 0, b = 0;  // compact endpoints

  static Domain compact(const Scalar& a, const Scalar& b);
  static Domain ray() { return {}; }
  static Domain half_open() { return {Kind::HalfOpen, 0, 1}; }
  std::string name() const;
};

// Index values are half-integers; stored doubled.
struct HalfInt {
  long twice = 0;
  static HalfInt of(long k) { return {2 * k}; }
  std::string str() const;
  auto operator<=>(const HalfInt&) const = default;
};
HalfInt parse_half_int(const std::string& text);

struct FormWitness {
  std::string name;
  int order;
  FormClass form;
  int rank;
};

struct PositivityVerdict {
  Positivity cls = Positivity::NotPositive;
  std::vector<FormWitness> forms;  // the matrices that decided the verdict
  std::string method;              // "compact", "limit", or "grid"
  std::optional<Scalar> grid_a, grid_b;
  bool positive() const { return cls != Positivity::NotPositive; }
  bool strict() const { return cls == Positivity::StrictlyPositive; }
};

// Compact criterion; 0 <= a < b. a = 0 is accepted for Hausdorff-type use.
PositivityVerdict classify_compact(const std::vector<Scalar>& s, const Scalar& a, const Scalar& b,
                                   const Context& ctx = default_context());
PositivityVerdict classify_ray(const std::vector<Scalar>& s, const Context& ctx = default_context());
PositivityVerdict classify_half_open(const std::vector<Scalar>& s, const Context& ctx = default_context());
PositivityVerdict classify(const std::vector<Scalar>& s, const Domain& d, const Context& ctx = default_context());

// u_k = sum_j w_j s_{k+j}
std::vector<Scalar> localize(const std::vector<Scalar>& s, const Polynomial& w);

// Unique representing measure of a singularly positive sequence. Atoms lie in
// the closed domain; 0 appears only for a compact domain with a = 0.
struct DeterminateMeasure {
  std::vector<Atom> atoms;
  bool exact = true;
};
DeterminateMeasure determinate_measure(const std::vector<Scalar>& s, const Domain& d,
                                       const Context& ctx = default_context());
HalfInt index_of(const std::vector<Atom>& atoms, const Domain& d);
HalfInt index(const std::vector<Scalar>& s, const Domain& d, const Context& ctx = default_context());

AtomicMeasure to_atomic(const DeterminateMeasure& dm);

}  // namespace momentkit
