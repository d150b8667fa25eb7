#pragma once

#include "momentkit/extremal.hpp"

#include <optional>

namespace momentkit {

enum class ExtClass { Strict, Singular, NotExtension };
const char* ext_name(ExtClass c);

struct ExtensionVerdict {
  ExtClass cls = ExtClass::NotExtension;
  Threshold threshold;
  // representing measure of (x, s_0, ..., s_n) on the singular branch;
  // moment(measure, k) = s_k for k = -1..n
  std::optional<AtomicMeasure> measure;
};

// Where does s_{-1} = x fall relative to the threshold of s?
ExtensionVerdict classify_backward(const std::vector<Scalar>& s, const Scalar& x, const Domain& d,
                                   const Context& ctx = default_context());

enum class SlotKind { Strict, Forced };

// For top index T and N = 2K - 1: slots k in [T-N, T-1] are strict, k <= T-N-1 forced.
SlotKind slot_kind(long k, long top, long n_param);

struct SlotRecord {
  long k;
  SlotKind kind;
  Threshold threshold;
  Scalar value;
};

struct ExtensionResult {
  MomentSequence sequence;                // first index -r
  std::optional<AtomicMeasure> measure;   // absent when K is the top (non-unique) index
  std::vector<SlotRecord> slots;          // from k = -1 downward
};

// Admissible index range for extending s (n+1 values) by r slots.
std::pair<HalfInt, HalfInt> index_range(std::size_t len, long r, const Domain& d);

// Extension s_{-r}..s_n of index K; free lists the strict-slot values from
// k = -1 downward.
ExtensionResult extend_with_index(const std::vector<Scalar>& s, long r, HalfInt K, const std::vector<Scalar>& free,
                                  const Domain& d, const Context& ctx = default_context());

// K-atomic measure reproducing a window with prescribed index K when
// N = 2K - 1 <= length - 1; positions are shifted so moment(mu, k) = s_k.
AtomicMeasure indexed_measure(const MomentSequence& s, HalfInt K, const Domain& d,
                              const Context& ctx = default_context());

Scalar phi(const AtomicMeasure& mu);

// psi(x) for even n: minimal measure of s whose reciprocal integral is x.
AtomicMeasure psi(const std::vector<Scalar>& s, const Scalar& x, const Context& ctx = default_context());

}  // namespace momentkit
