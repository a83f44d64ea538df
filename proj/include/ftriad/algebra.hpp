#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "ftriad/state.hpp"
#include "ftriad/tensor.hpp"

namespace ftriad {

// Commutative Frobenius algebra candidate on a d-dimensional space.
//
// Storage conventions (outputs first, row-major):
//   mu[c,a,b]    = <c| mu |a,b>      shape (d, d, d)
//   eta[c]       = <c| eta           shape (d)
//   delta[b,c,a] = <b,c| delta |a>   shape (d, d, d)
//   epsilon[a]   = epsilon |a>       shape (d)
//
// `verified` is set by callers after check_axioms reports all laws passing;
// constructions never set it implicitly.
struct Cfa {
  std::string name;
  std::size_t dim = 0;
  Tensor mu;
  Tensor eta;
  Tensor delta;
  Tensor epsilon;
  bool verified = false;
};

// The seven equation groups of a commutative Frobenius algebra, in the fixed
// order used by AxiomReport.
enum class AxiomLaw : std::size_t {
  Coassociativity = 0,
  Counit = 1,
  Associativity = 2,
  Unit = 3,
  Frobenius = 4,
  Commutativity = 5,
  Cocommutativity = 6,
};

inline constexpr std::size_t kAxiomCount = 7;

const char* axiom_name(AxiomLaw law);

// Residual report for the seven laws.  A law passes iff its max absolute
// residual is <= atol + rtol * scale with scale = max(1, |lhs|_max, |rhs|_max).
struct AxiomReport {
  std::array<double, kAxiomCount> residuals{};
  std::array<bool, kAxiomCount> passed{};

  bool all_passed() const;
  double max_residual() const;
};

// Loop/cap/cup contractions derived from a CFA.
struct DerivedMaps {
  Tensor bubble;       // mu . delta                  shape (d, d)
  Tensor loop_unit;    // mu . delta . eta            shape (d)
  Tensor loop_counit;  // epsilon . mu . delta        shape (d)
  Scalar circle;       // epsilon . mu . delta . eta  scalar
  Tensor cap;          // epsilon . mu                shape (d, d)
  Tensor cup;          // delta . eta                 shape (d, d)
};

enum class AlgebraClassLabel { Special, AntiSpecial, IntermediateSpecial, Other };

const char* algebra_class_name(AlgebraClassLabel label);

// Classification outcome with the evidence residuals for each class law.
struct AlgebraClass {
  AlgebraClassLabel label = AlgebraClassLabel::Other;
  std::size_t bubble_rank = 0;
  double special_residual = 0.0;       // |bubble - id|_max
  double anti_special_residual = 0.0;  // |circle*bubble - loop_unit(x)loop_counit|_max
  double intermediate_residual = 0.0;  // |bubble^3 - c*bubble^2|_max, c from argmax
};

// Checks the seven CFA laws by tensor contraction and reports max absolute
// residual per law.  Never throws on law failure; the report carries it.
AxiomReport check_axioms(const Cfa& f, const ToleranceConfig& tol);

DerivedMaps derived_maps(const Cfa& f);

// Classifies a verified CFA:
//   Special             iff bubble ~= identity
//   AntiSpecial         iff bubble rank 1 and circle*bubble ~= loop_unit (x) loop_counit
//   IntermediateSpecial iff 1 < bubble rank < d and bubble^3 ~= c*bubble^2
//                       for a nonzero constant c
//   Other               otherwise
// Throws UnverifiedAlgebra when f.verified is false.
AlgebraClass classify_algebra(const Cfa& f, const ToleranceConfig& tol);

// Tripartite state induced by a CFA, with the canonical witness pair.
struct InducedState {
  PureState psi;  // (id (x) delta) . delta . eta
  Tensor phi;     // cap = epsilon . mu
  Tensor xi;      // epsilon
};

InducedState induce_state(const Cfa& f);

// Algebra induced by a tripartite state and an effect xi contracted on the
// middle party.  K[x,y] = sum_b xi[b] psi[x,b,y] must be invertible
// (|det K| > atol), else NotStronglyMaximal is thrown.  The returned CFA is
// not auto-verified; callers run check_axioms.
struct InducedAlgebra {
  Cfa algebra;
  Tensor phi;  // K^-1
};

InducedAlgebra induce_algebra(const PureState& psi, const Tensor& xi,
                              const ToleranceConfig& tol);

// Built-in verified algebras.  Canonical names: "G", "W", "I" (qutrit) and
// "GHZ2", "W2" (qubit); lookup also accepts aliases "G3", "W3", "I3".
const Cfa& builtin_g3();
const Cfa& builtin_w3();
const Cfa& builtin_i3();
const Cfa& builtin_ghz2();
const Cfa& builtin_w2();

// All five built-ins in a stable order: GHZ2, W2, G, W, I.
const std::vector<const Cfa*>& builtin_algebras();

// Resolves a built-in algebra by canonical name or alias; nullptr if unknown.
const Cfa* find_builtin_algebra(const std::string& name);

}  // namespace ftriad
