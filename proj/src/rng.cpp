#include "ftriad/rng.hpp"

#include <cmath>

namespace ftriad {

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * 3.14159265358979323846 * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

std::size_t Rng::index(std::size_t n) {
  if (n == 0) return 0;
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = eng_();
  } while (x >= limit);
  return static_cast<std::size_t>(x % n);
}

Tensor Rng::gaussian_vector(std::size_t d) {
  std::vector<Scalar> data(d);
  for (Scalar& v : data) v = complex_gaussian();
  return Tensor({d}, std::move(data));
}

Tensor Rng::gaussian_matrix(std::size_t rows, std::size_t cols) {
  std::vector<Scalar> data(rows * cols);
  for (Scalar& v : data) v = complex_gaussian();
  return Tensor({rows, cols}, std::move(data));
}

}  // namespace ftriad
