#ifndef FTRIAD_SYNTHESIS_HPP
#define FTRIAD_SYNTHESIS_HPP

#include <cstdint>

#include "ftriad/algebra.hpp"
#include "ftriad/diagram.hpp"
#include "ftriad/state.hpp"
#include "ftriad/tensor.hpp"

namespace ftriad {

// The qutrit algebra trio used by all synthesis routines: a special algebra
// (G, pointwise multiplication), an anti-special one (W) and an
// intermediate-special one (I).
struct Trio {
  Cfa g;
  Cfa w;
  Cfa i;
};

// Trio built from the verified built-in algebras G, W, I.
Trio make_default_trio();

// Outcome of a synthesis routine: `diagram` evaluates to `achieved`, which
// matches `scalar * target` up to `residual` (relative, see below).
struct SynthesisResult {
  Diagram diagram;
  Tensor target;
  Tensor achieved;
  Scalar scalar = Scalar(1.0);
  double residual = 0.0;
};

// One multiplication node preloaded with a state: mu_alg o (v (x) id).
// For G this evaluates to diag(v); for W to the upper-triangular Toeplitz
// matrix v[2]*I + v[1]*N + v[0]*N^2 with N = |0><1| + |1><2|.
// Throws DomainError when v is the zero vector.
Diagram vector_mult_map(const Cfa& alg, const Tensor& v);

// Wire-bending realization of the permutation e_k -> e_{images[k]} on one
// qutrit wire, composed from mixed cap/cup pairs of the trio (each pair
// evaluates exactly to a transposition or 3-cycle matrix).
Diagram permutation_diagram(const std::vector<std::size_t>& images,
                            const Trio& trio);

// Realizes an invertible 3x3 matrix as a diagram over the trio via the
// complete-pivoting factorization F = P L D U P', with D as a G-node and the
// unipotent triangular factors as diagonally conjugated W-Toeplitz maps.
// Throws SingularMatrix; SynthesisResidualExceeded is an internal bug guard.
SynthesisResult matrix_to_diagram(const Tensor& f, const Trio& trio,
                                  const ToleranceConfig& tol = {});

// Multiplexer skeleton acting on three branches of n qutrit wires each
// (inputs branch-major: branch 0 wires, then branch 1, then branch 2).
// Outputs are [selector, n merged wires].  Feeding branch states b0, b1, b2
// produces sum_k t(b_{k'}) t(b_{k''}) |k> (x) b_k where t(b) = <2...2|b> and
// {k', k''} = {0,1,2} \ {k}.
Diagram mux_skeleton(std::size_t n, const Trio& trio);

// Single-wire qutrit multiplexer (3 inputs, 2 outputs).  Evaluates to the
// multilinear map Q with
//   Q(psi (x) phi (x) zeta) = <2|phi><2|zeta> |0>psi + <2|zeta><2|psi> |1>phi
//                             + <2|psi><2|phi> |2>zeta.
Diagram qmux(const Trio& trio);

// Closed diagram (0 inputs, 2 outputs) evaluating to
// |0> (x) psi + |1> (x) phi + |2> (x) zeta: qmux applied to the three state
// nodes, followed by the diagonal correction 1/(overlap products) on the
// selector wire.  Throws ZeroOverlap when any <2|.> overlap vanishes.
Diagram qmux_corrected(const Tensor& psi, const Tensor& phi,
                       const Tensor& zeta, const Trio& trio,
                       const ToleranceConfig& tol = {});

// Realizes an N-partite qutrit state (N <= 6) as a closed diagram over the
// trio: recursive branch split along the first party, multiplexed back
// together, with random local pre-rotations (undone on the output wires) to
// keep all branch overlaps away from zero.
SynthesisResult state_to_diagram(const PureState& s, const Trio& trio,
                                 const ToleranceConfig& tol = {},
                                 std::uint64_t seed = 20260825ULL);

}  // namespace ftriad

#endif  // FTRIAD_SYNTHESIS_HPP
