// Compares the OpenMP-parallel contraction kernel against the serial
// reference on a square matrix product.  Exit code 1 if the two kernels
// disagree bitwise.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <utility>
#include <vector>

#include "ftriad/rng.hpp"
#include "ftriad/tensor.hpp"

int main(int argc, char** argv) {
  std::size_t n = 243;
  int reps = 10;
  if (argc > 1) n = std::strtoul(argv[1], nullptr, 10);
  if (argc > 2) reps = std::atoi(argv[2]);

  ftriad::Rng rng(20260825ULL);
  const ftriad::Tensor a = rng.gaussian_matrix(n, n);
  const ftriad::Tensor b = rng.gaussian_matrix(n, n);
  const std::vector<std::pair<std::size_t, std::size_t>> pairs{{1, 0}};

  const ftriad::Tensor p = ftriad::contract(a, b, pairs);
  const ftriad::Tensor s = ftriad::contract_serial(a, b, pairs);
  bool equal = p.shape() == s.shape() && p.size() == s.size();
  if (equal) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p.flat(i) != s.flat(i)) {
        equal = false;
        break;
      }
    }
  }

  double sink = 0.0;
  const auto time_avg_ms = [&](auto&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
  };
  const double ms_par =
      time_avg_ms([&] { sink += ftriad::contract(a, b, pairs).max_abs(); });
  const double ms_ser = time_avg_ms(
      [&] { sink += ftriad::contract_serial(a, b, pairs).max_abs(); });

  std::printf("contract benchmark: n=%zu, %d reps (checksum %.3f)\n", n, reps,
              sink);
  std::printf("  parallel kernel: %8.3f ms\n", ms_par);
  std::printf("  serial kernel:   %8.3f ms\n", ms_ser);
  std::printf("  speedup:         %8.3fx\n", ms_ser / ms_par);
  std::printf("  bitwise equal:   %s\n", equal ? "yes" : "NO");
  return equal ? 0 : 1;
}
