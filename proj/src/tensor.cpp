#include "ftriad/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ftriad {

namespace {

std::size_t shape_product(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t s : shape) n *= s;
  return n;
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<Scalar> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  for (std::size_t s : shape_) {
    if (s == 0) throw DimensionMismatch("tensor dimensions must be >= 1");
  }
  if (data_.size() != shape_product(shape_)) {
    throw DimensionMismatch("tensor data length " +
                            std::to_string(data_.size()) +
                            " does not match shape product " +
                            std::to_string(shape_product(shape_)));
  }
  check_finite();
}

void Tensor::check_finite() const {
  for (const Scalar& v : data_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw DomainError("tensor entries must be finite");
    }
  }
}

Tensor Tensor::scalar(Scalar v) { return Tensor({}, {v}); }

Tensor Tensor::zeros(std::vector<std::size_t> shape) {
  std::size_t n = shape_product(shape);
  return Tensor(std::move(shape), std::vector<Scalar>(n, Scalar(0.0)));
}

Tensor Tensor::identity(std::size_t d) {
  Tensor t = zeros({d, d});
  for (std::size_t i = 0; i < d; ++i) t.data_[i * d + i] = Scalar(1.0);
  return t;
}

Tensor Tensor::basis_vector(std::size_t d, std::size_t k) {
  Tensor t = zeros({d});
  t.data_[k] = Scalar(1.0);
  return t;
}

std::size_t Tensor::flat_index(const std::vector<std::size_t>& idx) const {
  if (idx.size() != shape_.size()) {
    throw DimensionMismatch("index rank does not match tensor rank");
  }
  std::size_t flat = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] >= shape_[k]) throw DimensionMismatch("index out of range");
    flat = flat * shape_[k] + idx[k];
  }
  return flat;
}

std::vector<std::size_t> Tensor::unflatten(std::size_t flat) const {
  std::vector<std::size_t> idx(shape_.size());
  for (std::size_t k = shape_.size(); k-- > 0;) {
    idx[k] = flat % shape_[k];
    flat /= shape_[k];
  }
  return idx;
}

Scalar Tensor::at(const std::vector<std::size_t>& idx) const {
  return data_[flat_index(idx)];
}

void Tensor::set(const std::vector<std::size_t>& idx, Scalar v) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw DomainError("tensor entries must be finite");
  }
  data_[flat_index(idx)] = v;
}

Tensor Tensor::transpose(const std::vector<std::size_t>& axes) const {
  if (axes.size() != shape_.size()) {
    throw DimensionMismatch("transpose axes rank mismatch");
  }
  std::vector<bool> seen(axes.size(), false);
  std::vector<std::size_t> new_shape(axes.size());
  for (std::size_t k = 0; k < axes.size(); ++k) {
    if (axes[k] >= shape_.size() || seen[axes[k]]) {
      throw DimensionMismatch("transpose axes must be a permutation");
    }
    seen[axes[k]] = true;
    new_shape[k] = shape_[axes[k]];
  }
  std::vector<std::size_t> src_strides = strides_for(shape_);
  std::vector<std::size_t> perm_strides(axes.size());
  for (std::size_t k = 0; k < axes.size(); ++k) {
    perm_strides[k] = src_strides[axes[k]];
  }
  Tensor out = zeros(new_shape);
  for (std::size_t flat = 0; flat < out.data_.size(); ++flat) {
    std::size_t src = 0;
    std::size_t rem = flat;
    for (std::size_t k = axes.size(); k-- > 0;) {
      src += (rem % new_shape[k]) * perm_strides[k];
      rem /= new_shape[k];
    }
    out.data_[flat] = data_[src];
  }
  return out;
}

Tensor Tensor::reshape(std::vector<std::size_t> new_shape) const {
  if (shape_product(new_shape) != data_.size()) {
    throw DimensionMismatch("reshape must preserve element count");
  }
  return Tensor(std::move(new_shape), data_);
}

Tensor Tensor::conjugate() const {
  Tensor out = *this;
  for (Scalar& v : out.data_) v = std::conj(v);
  return out;
}

Tensor Tensor::operator+(const Tensor& o) const {
  if (!same_shape(o)) throw DimensionMismatch("shape mismatch in addition");
  Tensor out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += o.data_[i];
  return out;
}

Tensor Tensor::operator-(const Tensor& o) const {
  if (!same_shape(o)) throw DimensionMismatch("shape mismatch in subtraction");
  Tensor out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= o.data_[i];
  return out;
}

Tensor Tensor::operator*(Scalar c) const {
  Tensor out = *this;
  for (Scalar& v : out.data_) v *= c;
  return out;
}

double Tensor::max_abs() const {
  double m = 0.0;
  for (const Scalar& v : data_) m = std::max(m, std::abs(v));
  return m;
}

std::size_t Tensor::argmax_abs() const {
  std::size_t best = 0;
  double best_abs = -1.0;
  for (std::size_t i = 0; i < data_.size(); ++i) {
    double a = std::abs(data_[i]);
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  return best;
}

std::vector<std::size_t> strides_for(const std::vector<std::size_t>& shape) {
  std::vector<std::size_t> strides(shape.size(), 1);
  for (std::size_t k = shape.size(); k-- > 1;) {
    strides[k - 1] = strides[k] * shape[k];
  }
  return strides;
}

namespace {

struct ContractPlan {
  std::vector<std::size_t> a_free, b_free;        // unpaired index positions
  std::vector<std::size_t> a_pair, b_pair;        // paired index positions
  std::vector<std::size_t> out_shape;             // a_free dims + b_free dims
  std::vector<std::size_t> pair_dims;             // dims of paired indices
  std::size_t out_size = 1, pair_size = 1;
};

ContractPlan plan_contract(
    const Tensor& a, const Tensor& b,
    const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  ContractPlan p;
  std::vector<bool> a_used(a.ndim(), false), b_used(b.ndim(), false);
  for (const auto& [ia, ib] : pairs) {
    if (ia >= a.ndim() || ib >= b.ndim()) {
      throw DimensionMismatch("contraction index out of range");
    }
    if (a_used[ia] || b_used[ib]) {
      throw DimensionMismatch("contraction pairs must be disjoint");
    }
    if (a.shape()[ia] != b.shape()[ib]) {
      throw DimensionMismatch("paired indices have unequal dimensions");
    }
    a_used[ia] = true;
    b_used[ib] = true;
  }
  for (const auto& [ia, ib] : pairs) {
    p.a_pair.push_back(ia);
    p.b_pair.push_back(ib);
    p.pair_dims.push_back(a.shape()[ia]);
    p.pair_size *= a.shape()[ia];
  }
  for (std::size_t k = 0; k < a.ndim(); ++k) {
    if (!a_used[k]) {
      p.a_free.push_back(k);
      p.out_shape.push_back(a.shape()[k]);
    }
  }
  for (std::size_t k = 0; k < b.ndim(); ++k) {
    if (!b_used[k]) {
      p.b_free.push_back(k);
      p.out_shape.push_back(b.shape()[k]);
    }
  }
  for (std::size_t s : p.out_shape) p.out_size *= s;
  return p;
}

// Computes one output entry; the inner summation order is identical for the
// serial and parallel paths so their results agree bitwise.
inline Scalar contract_entry(const Tensor& a, const Tensor& b,
                             const ContractPlan& p,
                             const std::vector<std::size_t>& a_strides,
                             const std::vector<std::size_t>& b_strides,
                             std::size_t out_flat) {
  std::size_t a_base = 0, b_base = 0;
  std::size_t rem = out_flat;
  for (std::size_t k = p.out_shape.size(); k-- > 0;) {
    std::size_t coord = rem % p.out_shape[k];
    rem /= p.out_shape[k];
    if (k < p.a_free.size()) {
      a_base += coord * a_strides[p.a_free[k]];
    } else {
      b_base += coord * b_strides[p.b_free[k - p.a_free.size()]];
    }
  }
  Scalar sum(0.0);
  for (std::size_t t = 0; t < p.pair_size; ++t) {
    std::size_t a_off = a_base, b_off = b_base;
    std::size_t r = t;
    for (std::size_t k = p.pair_dims.size(); k-- > 0;) {
      std::size_t coord = r % p.pair_dims[k];
      r /= p.pair_dims[k];
      a_off += coord * a_strides[p.a_pair[k]];
      b_off += coord * b_strides[p.b_pair[k]];
    }
    sum += a.data()[a_off] * b.data()[b_off];
  }
  return sum;
}

}  // namespace

Tensor contract_serial(
    const Tensor& a, const Tensor& b,
    const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  ContractPlan p = plan_contract(a, b, pairs);
  std::vector<std::size_t> a_strides = strides_for(a.shape());
  std::vector<std::size_t> b_strides = strides_for(b.shape());
  Tensor out = Tensor::zeros(p.out_shape);
  for (std::size_t i = 0; i < p.out_size; ++i) {
    out.mutable_data()[i] = contract_entry(a, b, p, a_strides, b_strides, i);
  }
  return out;
}

Tensor contract(const Tensor& a, const Tensor& b,
                const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
#ifdef _OPENMP
  ContractPlan p = plan_contract(a, b, pairs);
  // Parallelism only pays off for sizeable workloads; everything in the
  // diagram evaluator is far below this threshold.
  if (p.out_size * p.pair_size >= 1u << 16) {
    std::vector<std::size_t> a_strides = strides_for(a.shape());
    std::vector<std::size_t> b_strides = strides_for(b.shape());
    Tensor out = Tensor::zeros(p.out_shape);
    Scalar* dst = out.mutable_data().data();
    const std::int64_t n = static_cast<std::int64_t>(p.out_size);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      dst[i] = contract_entry(a, b, p, a_strides, b_strides,
                              static_cast<std::size_t>(i));
    }
    return out;
  }
#endif
  return contract_serial(a, b, pairs);
}

Tensor outer(const Tensor& a, const Tensor& b) { return contract(a, b, {}); }

double max_abs_diff(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) throw DimensionMismatch("shape mismatch in comparison");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  }
  return m;
}

std::optional<Scalar> approx_proportional(const Tensor& a, const Tensor& b,
                                          const ToleranceConfig& tol) {
  if (!a.same_shape(b)) throw DimensionMismatch("shape mismatch");
  double a_max = a.max_abs();
  double b_max = b.max_abs();
  if (a_max == 0.0 && b_max == 0.0) return Scalar(1.0);
  if (b_max == 0.0) return std::nullopt;  // nonzero a, zero b
  std::size_t k = b.argmax_abs();
  Scalar c = a.data()[k] / b.data()[k];
  double scale = std::max({1.0, a_max, std::abs(c) * b_max});
  double threshold = tol.atol + tol.rtol * scale;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a.data()[i] - c * b.data()[i]) > threshold) {
      return std::nullopt;
    }
  }
  return c;
}

}  // namespace ftriad
