#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <utility>
#include <vector>

#include "ftriad/errors.hpp"

namespace ftriad {

using Scalar = std::complex<double>;

// Tolerances shared across the library.  `atol`/`rtol` govern approximate
// equality (pass iff residual <= atol + rtol * scale); `rank_cutoff` is the
// relative singular-value cutoff for numeric rank.
struct ToleranceConfig {
  double atol = 1e-9;
  double rtol = 1e-9;
  double rank_cutoff = 1e-8;
};

// Dense complex tensor with row-major storage.  A rank-0 shape denotes a
// scalar.  All entries are required to be finite; NaN/Inf are rejected at
// construction and mutation-free use keeps the invariant.
class Tensor {
 public:
  // Default: scalar zero.
  Tensor() : shape_(), data_(1, Scalar(0.0)) {}

  Tensor(std::vector<std::size_t> shape, std::vector<Scalar> data);

  static Tensor scalar(Scalar v);
  static Tensor zeros(std::vector<std::size_t> shape);
  static Tensor identity(std::size_t d);
  static Tensor basis_vector(std::size_t d, std::size_t k);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t ndim() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  const std::vector<Scalar>& data() const { return data_; }
  std::vector<Scalar>& mutable_data() { return data_; }

  Scalar at(const std::vector<std::size_t>& idx) const;
  void set(const std::vector<std::size_t>& idx, Scalar v);
  Scalar flat(std::size_t i) const { return data_[i]; }

  std::size_t flat_index(const std::vector<std::size_t>& idx) const;
  std::vector<std::size_t> unflatten(std::size_t flat) const;

  // numpy-style transpose: result.shape[k] = shape[axes[k]] and
  // result[i_0,...] = source[j] with j[axes[k]] = i_k.
  Tensor transpose(const std::vector<std::size_t>& axes) const;
  Tensor reshape(std::vector<std::size_t> new_shape) const;
  Tensor conjugate() const;

  Tensor operator+(const Tensor& o) const;
  Tensor operator-(const Tensor& o) const;
  Tensor operator*(Scalar c) const;

  double max_abs() const;
  bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

  // Largest-magnitude entry's flat index (first occurrence).
  std::size_t argmax_abs() const;

 private:
  void check_finite() const;

  std::vector<std::size_t> shape_;
  std::vector<Scalar> data_;
};

// Row-major strides for a shape.
std::vector<std::size_t> strides_for(const std::vector<std::size_t>& shape);

// Sum-over-paired-indices contraction.  Result carries the unpaired indices
// of `a` (in order) followed by the unpaired indices of `b`.  `pairs` lists
// (index-of-a, index-of-b) with equal dimensions; indices must be distinct
// per side.  Dispatches to a parallel kernel for large workloads; the serial
// reference implementation is always available for comparison.
Tensor contract(const Tensor& a, const Tensor& b,
                const std::vector<std::pair<std::size_t, std::size_t>>& pairs);
Tensor contract_serial(
    const Tensor& a, const Tensor& b,
    const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

// Tensor (outer) product: contraction with no pairs.
Tensor outer(const Tensor& a, const Tensor& b);

double max_abs_diff(const Tensor& a, const Tensor& b);

// Finds c with a ~= c*b elementwise within tolerance, if it exists.  Both
// zero tensors yield c = 1 by convention, so equality checks stay total.
std::optional<Scalar> approx_proportional(const Tensor& a, const Tensor& b,
                                          const ToleranceConfig& tol);

}  // namespace ftriad
