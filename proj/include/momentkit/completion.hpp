#pragma once

#include "momentkit/tree.hpp"

namespace momentkit {

enum class SolveStatus { Feasible, Infeasible, Unknown };
const char* status_name(SolveStatus s);

// One trunk level: slot s_{i,-level} for every branch class.
struct LevelRecord {
  long level = 0;
  bool equality = true;
  Scalar target;
  Scalar residual;                  // target minus the threshold sum
  std::vector<Scalar> thresholds;   // per class
  std::vector<Scalar> values;       // per class
  std::vector<bool> forced;         // per class
  bool exact = true;                // all thresholds exact
};

struct BranchCertificate {
  HalfInt K;
  MomentSequence sequence;          // s_{i,-kappa-1} .. s_{i,T}
  AtomicMeasure measure;            // mu_i, or tau_i (CHE, no mass at 0)
  std::vector<Scalar> completed_sq; // lambda'_{i,2}^2 .. lambda'_{i,p+8}^2
};

struct CompletionCertificate {
  enum class Kind { Subnormal, CHE } kind = Kind::Subnormal;
  PartialWeights data;
  std::vector<BranchCertificate> branches;
  std::optional<Scalar> norm_sq;
  std::optional<CAMeasure> root_rho;  // CA measure of the trunk root sequence
  std::vector<LevelRecord> levels;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::Unknown;
  std::optional<CompletionCertificate> certificate;
  std::vector<HalfInt> K;
  std::string reason;
  bool numeric = false;  // the verdict rests on floating thresholds
};

FullWeights full_weights(const CompletionCertificate& cert);
CertificateReport verify_certificate(const CompletionCertificate& cert, int depth = 12,
                                     const Context& ctx = default_context());

// K empty: sweep every admissible index vector.
SolveOutcome solve_subnormal(const PartialWeights& pw, const std::vector<HalfInt>& K = {},
                             const Context& ctx = default_context());
SolveOutcome solve_che(const PartialWeights& pw, const std::vector<HalfInt>& K = {},
                       const Context& ctx = default_context());

// Identical branch data: CA test on the root sequence.
SolveOutcome flat_che_completion(const PartialWeights& pw, const Context& ctx = default_context());

struct ProbeStep {
  long kappa;
  SolveStatus status;
  std::optional<Scalar> norm_sq;
  std::string reason;
};

struct ProbeReport {
  std::string verdict;  // FeasibleTowardInfinity, InfeasibleAt, Unknown
  std::optional<long> infeasible_kappa;
  std::optional<Scalar> bound_sq;
  std::vector<ProbeStep> steps;
};

// trunk_stream holds lambda_0^2, lambda_{-1}^2, ... at least kappa_max long.
ProbeReport kappa_infinite_probe(const std::vector<Scalar>& trunk_stream, const std::vector<BranchClass>& branches,
                                 long p, long kappa_max, const Context& ctx = default_context());

struct StampfliResult {
  bool holds;
  Scalar lhs, rhs;
};

// lambda_4^2 >= lambda_3^2 + lambda_1^2 (lambda_3^2 - lambda_2^2)^2 / (lambda_2^2 - lambda_1^2)
StampfliResult stampfli_check(const std::vector<Scalar>& lambda);

// Scale-invariant form obtained from the 2x2 Hankel test of (1, a, ab, abc, abcd):
// lambda_4^2 >= lambda_3^2 + lambda_1^2 (lambda_3^2 - lambda_2^2)^2 / (lambda_3^2 (lambda_2^2 - lambda_1^2))
StampfliResult stampfli_hankel_check(const std::vector<Scalar>& lambda);

struct FlatnessReport {
  bool two_flat = false;
  std::string witness;  // first disagreement below generation r
};

FlatnessReport flatness_verifier(const FullWeights& w, const std::vector<CAMeasure>& taus, long r, int depth = 12,
                                 const Context& ctx = default_context());

}  // namespace momentkit
