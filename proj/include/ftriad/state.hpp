#pragma once

#include <cstddef>

#include "ftriad/tensor.hpp"

namespace ftriad {

// Multipartite pure state: one tensor index per party, all of equal local
// dimension.  Normalization is never tracked; equality of states is always up
// to a global nonzero scalar.
struct PureState {
  std::size_t parties = 0;
  std::size_t dim = 0;
  Tensor amplitudes;
};

// Builds a PureState from an amplitude tensor, inferring party count and
// local dimension.  Throws DimensionMismatch for mixed dimensions and
// DomainError for an all-zero tensor.
PureState make_state(Tensor amplitudes);

// True iff the two states are proportional within tolerance.
bool states_equal(const PureState& a, const PureState& b,
                  const ToleranceConfig& tol);

}  // namespace ftriad
