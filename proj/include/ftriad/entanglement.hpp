#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ftriad/algebra.hpp"
#include "ftriad/state.hpp"

namespace ftriad {

// One local (per-party) operation: one matrix per party, each applied to its
// party index.
using LocalOperation = std::vector<Tensor>;

// A strong-maximality witness: an effect xi (one index) and an effect phi
// (two indices) whose contractions against the state give identities.
struct Witness {
  Tensor xi;
  Tensor phi;
};

// Verdict of the per-party strong-maximality search.
struct MaximalityResult {
  bool maximal = false;
  // When !maximal: true if the d x d^2 matricization rank test proved it
  // (exact verdict), false if only the randomized search failed.
  bool exact = false;
  std::size_t failing_party = 0;  // meaningful when !maximal
  // One witness per party when maximal: xi with invertible K, phi = K^{-1}.
  std::vector<Witness> witnesses;
};

enum class StateClassKind { ClassG, ClassW, ClassI, NonFrobenius };

enum class NonFrobeniusReason {
  NotStronglyMaximal,
  NotSymmetric,
  NoValidAlgebraFound,
};

const char* state_class_name(StateClassKind k);
const char* non_frobenius_reason_name(NonFrobeniusReason r);

// Output of the tripartite-qutrit classifier.  ClassG/W/I carry the witness
// whose induced algebra passed all axioms and classified Special /
// AntiSpecial / IntermediateSpecial; NonFrobenius carries the reason.
// NoValidAlgebraFound reports an exhausted search budget, not a proof.
struct ClassLabel {
  StateClassKind kind = StateClassKind::NonFrobenius;
  NonFrobeniusReason reason = NonFrobeniusReason::NoValidAlgebraFound;
  std::optional<Witness> witness;
  std::optional<AlgebraClass> algebra_class;  // set for ClassG/W/I
};

// Applies op[j] to party j: one invertibility-agnostic tensor contraction
// per party.  Throws DimensionMismatch on arity/shape mismatch and
// DomainError when the image vanishes.
PureState apply_local(const PureState& s, const LocalOperation& op);

// True iff the amplitude tensor is invariant under every party permutation
// within tolerance.  Supports up to 6 parties.
bool is_symmetric(const PureState& s, const ToleranceConfig& tol = {});

// Per-party search for strong-maximality witnesses on a tripartite state.
// Structured xi candidates (all-ones, basis effects, basis pairs) are tried
// before `trials` random draws; det K(xi) is polynomial in xi, so persistent
// failure plus the exact matricization rank test justifies NotMaximal.
MaximalityResult maximality_witness(const PureState& s,
                                    std::size_t trials = 64,
                                    std::uint64_t seed = 20260825ULL);

// SLOCC classifier for tripartite qutrits.  Pipeline: strong-maximality
// check, symmetry check, then xi-candidate search (structured candidates
// first, then random candidates ordered by the conditioning of K) inducing
// an algebra per candidate and classifying the first one that passes all
// seven axioms.  `budget` caps the number of xi candidates.
ClassLabel classify_state(const PureState& s, std::size_t budget = 320,
                          std::uint64_t seed = 20260825ULL);

// Transports a witness along a symmetric local operation L (x) L (x) L:
// xi' = xi . L^{-1}, phi' = phi . (L^{-1} (x) L^{-1}).  Throws DomainError
// when the three matrices differ and SingularMatrix when L is singular.
Witness transport_witness(const PureState& s, const LocalOperation& op,
                          const Witness& w);

// True iff apply_local(s2, op) is proportional to s1.  All matrices must be
// invertible (SingularMatrix otherwise).
bool verify_slocc_witness(const PureState& s1, const PureState& s2,
                          const LocalOperation& op,
                          const ToleranceConfig& tol = {});

// ---- catalog of named states ----
struct CatalogEntry {
  std::string name;
  std::size_t parameter_count = 0;  // single-party kets, parsed at dim 3
  std::string description;  // ket expression; letters a..d mark parameter slots
};

const std::vector<CatalogEntry>& catalog_entries();

// Instantiates a catalog entry.  Parameters are single-party qutrit ket
// expressions (a bare digit n abbreviates |n>).  Throws UnknownName for
// unregistered names and DomainError on parameter-count mismatch.
PureState catalog(const std::string& name,
                  const std::vector<std::string>& params = {});

}  // namespace ftriad
