#pragma once

#include "momentkit/alternating.hpp"

#include <optional>

namespace momentkit {

// Directed tree: a trunk -kappa .. -1, a root 0, and branches (i, j), j >= 1.
// Branches with identical data are grouped into classes; a class may hold
// infinitely many branches, in which case only the total of lambda_{i,1}^2
// over the class is finite data.
struct BranchClass {
  Scalar l1_sq_total;               // sum of lambda_{i,1}^2 over the class
  std::optional<long> count = 1;    // nullopt: infinitely many branches
  std::vector<Scalar> higher_sq;    // lambda_{i,2}^2 .. lambda_{i,p}^2
};

struct PartialWeights {
  std::optional<long> kappa = 0;    // nullopt: infinite trunk
  std::vector<Scalar> trunk_sq;     // lambda_0^2, lambda_{-1}^2, ...
  std::vector<BranchClass> branches;
  long p = 1;

  std::optional<long> eta() const;  // nullopt when infinite
  Scalar l1_sum() const;
  void validate() const;
};

struct BranchGenerator {
  enum class Kind { Explicit, Subnormal, CHE };
  Kind kind = Kind::Explicit;
  std::vector<Scalar> listed_sq;    // lambda_{i,2}^2, lambda_{i,3}^2, ... ahead of the generator
  std::optional<Scalar> tail_sq;    // Explicit weight past the list; nullopt = unbounded
  AtomicMeasure mu;                 // Subnormal: Berger measure at (i,1)
  CAMeasure tau;                    // CHE: measure of the branch increments
};

struct FullBranch {
  Scalar l1_sq_total;
  std::optional<long> count = 1;
  bool l1_divergent = false;        // sum of lambda_{i,1}^2 is infinite
  BranchGenerator gen;
};

struct FullWeights {
  std::optional<long> kappa = 0;
  std::vector<Scalar> trunk_sq;
  Scalar trunk_tail_sq = 1;         // infinite trunk beyond the listed weights
  std::vector<FullBranch> branches;

  Scalar l1_sum() const;
  Scalar trunk_weight_sq(long i) const;  // lambda_{-i}^2
};

// lambda_{i,j}^2 for j >= 2.
Scalar weight_sq(const FullBranch& b, long j);

struct Vertex {
  bool on_trunk = true;
  long k = 0;     // trunk vertex -k (k = 0 is the branching root)
  long cls = 0;   // branch vertex (cls, j)
  long j = 1;
  static Vertex trunk(long k) { return {true, k, 0, 0}; }
  static Vertex branch(long cls, long j) { return {false, 0, cls, j}; }
};

// ||S^m e_u||^2 for m = 0..n.
std::vector<Scalar> vertex_moments(const FullWeights& w, const Vertex& u, long n);

struct Boundedness {
  bool bounded = false;
  std::optional<Scalar> norm_sq;
  std::string reason;
};
Boundedness is_bounded(const FullWeights& w);

struct CertificateReport {
  bool valid = false;
  std::string violation;
};

CertificateReport verify_subnormal_certificate(const FullWeights& w, const std::vector<AtomicMeasure>& mus,
                                               int depth = 12, const Context& ctx = default_context());
CertificateReport verify_che_certificate(const FullWeights& w, const std::vector<CAMeasure>& taus, int depth = 12,
                                         const Context& ctx = default_context());

}  // namespace momentkit
