#pragma once

#include <cstdint>
#include <random>

#include "ftriad/tensor.hpp"

namespace ftriad {

// Deterministic random source.  Values are derived from raw mt19937_64 draws
// with explicit arithmetic (no std:: distributions), so a fixed seed yields
// the same stream on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller (pairs; second value cached).
  double gaussian();

  Scalar complex_gaussian() {
    double re = gaussian();
    double im = gaussian();
    return Scalar(re, im);
  }

  // Uniform integer in [0, n) by rejection to avoid modulo bias.
  std::size_t index(std::size_t n);

  Tensor gaussian_vector(std::size_t d);
  Tensor gaussian_matrix(std::size_t rows, std::size_t cols);

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ftriad
