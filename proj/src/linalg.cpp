#include "ftriad/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace ftriad {

namespace {

void require_matrix(const Tensor& m) {
  if (m.ndim() != 2) {
    throw DimensionMismatch("operation requires a 2-index tensor");
  }
}

void require_square(const Tensor& m) {
  require_matrix(m);
  if (m.shape()[0] != m.shape()[1]) {
    throw DimensionMismatch("operation requires a square matrix");
  }
}

}  // namespace

std::vector<double> singular_values(const Tensor& m) {
  require_matrix(m);
  std::size_t rows = m.shape()[0], cols = m.shape()[1];
  // One-sided Jacobi orthogonalizes columns; keep the column count small.
  const Tensor work = cols > rows ? m.transpose({1, 0}) : m;
  std::size_t r = work.shape()[0], n = work.shape()[1];
  std::vector<std::vector<Scalar>> col(n, std::vector<Scalar>(r));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      col[j][i] = work.data()[i * n + j];
    }
  }
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool changed = false;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double app = 0.0, aqq = 0.0;
        Scalar apq(0.0);
        for (std::size_t i = 0; i < r; ++i) {
          app += std::norm(col[p][i]);
          aqq += std::norm(col[q][i]);
          apq += std::conj(col[p][i]) * col[q][i];
        }
        double off = std::abs(apq);
        if (off <= 1e-14 * std::sqrt(app * aqq) || off == 0.0) continue;
        changed = true;
        Scalar g = apq / off;  // unit phase so the rotated pair is real
        double tau = (aqq - app) / (2.0 * off);
        double t = (tau >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = c * t;
        for (std::size_t i = 0; i < r; ++i) {
          Scalar up = col[p][i];
          Scalar wq = col[q][i] * std::conj(g);
          col[p][i] = c * up - s * wq;
          col[q][i] = (s * up + c * wq) * g;
        }
      }
    }
    if (!changed) break;
  }
  std::vector<double> sv(n);
  for (std::size_t j = 0; j < n; ++j) {
    double nrm = 0.0;
    for (std::size_t i = 0; i < r; ++i) nrm += std::norm(col[j][i]);
    sv[j] = std::sqrt(nrm);
  }
  std::sort(sv.begin(), sv.end(), std::greater<double>());
  return sv;
}

std::size_t numeric_rank(const Tensor& m, const ToleranceConfig& tol) {
  std::vector<double> sv = singular_values(m);
  if (sv.empty() || sv[0] == 0.0) return 0;
  double cutoff = tol.rank_cutoff * sv[0];
  std::size_t rank = 0;
  for (double s : sv) {
    if (s > cutoff) ++rank;
  }
  return rank;
}

double rcond(const Tensor& m) {
  std::vector<double> sv = singular_values(m);
  if (sv.empty() || sv[0] == 0.0) return 0.0;
  return sv.back() / sv.front();
}

Tensor mat_mul(const Tensor& a, const Tensor& b) {
  require_matrix(a);
  require_matrix(b);
  return contract(a, b, {{1, 0}});
}

namespace {

// Partial-pivot LU on a copy; returns pivoted data and the permutation sign,
// or sign 0 when a pivot column vanishes entirely.
int lu_inplace(std::vector<Scalar>& a, std::size_t n) {
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a[k * n + k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      double cand = std::abs(a[i * n + k]);
      if (cand > best) {
        best = cand;
        piv = i;
      }
    }
    if (best == 0.0) return 0;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      Scalar f = a[i * n + k] / a[k * n + k];
      a[i * n + k] = f;
      for (std::size_t j = k + 1; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
    }
  }
  return sign;
}

}  // namespace

Scalar mat_det(const Tensor& m) {
  require_square(m);
  std::size_t n = m.shape()[0];
  std::vector<Scalar> a = m.data();
  int sign = lu_inplace(a, n);
  if (sign == 0) return Scalar(0.0);
  Scalar det(static_cast<double>(sign));
  for (std::size_t k = 0; k < n; ++k) det *= a[k * n + k];
  return det;
}

Tensor mat_inverse(const Tensor& m) {
  require_square(m);
  std::size_t n = m.shape()[0];
  std::vector<Scalar> a = m.data();
  std::vector<Scalar> inv(n * n, Scalar(0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = Scalar(1.0);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a[k * n + k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      double cand = std::abs(a[i * n + k]);
      if (cand > best) {
        best = cand;
        piv = i;
      }
    }
    if (best == 0.0) throw SingularMatrix("matrix is singular");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a[k * n + j], a[piv * n + j]);
        std::swap(inv[k * n + j], inv[piv * n + j]);
      }
    }
    Scalar d = a[k * n + k];
    for (std::size_t j = 0; j < n; ++j) {
      a[k * n + j] /= d;
      inv[k * n + j] /= d;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      Scalar f = a[i * n + k];
      if (f == Scalar(0.0)) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a[i * n + j] -= f * a[k * n + j];
        inv[i * n + j] -= f * inv[k * n + j];
      }
    }
  }
  return Tensor({n, n}, std::move(inv));
}

Tensor solve_linear(const Tensor& a, const Tensor& b) {
  require_square(a);
  if (b.ndim() != 1 || b.shape()[0] != a.shape()[0]) {
    throw DimensionMismatch("right-hand side shape mismatch");
  }
  return contract(mat_inverse(a), b, {{1, 0}});
}

Tensor solve_least_squares(const Tensor& a, const Tensor& b) {
  require_matrix(a);
  if (b.ndim() != 1 || b.shape()[0] != a.shape()[0]) {
    throw DimensionMismatch("right-hand side shape mismatch");
  }
  Tensor ah = a.conjugate().transpose({1, 0});
  Tensor gram = mat_mul(ah, a);
  Tensor rhs = contract(ah, b, {{1, 0}});
  return solve_linear(gram, rhs);
}

LduFactors ldu_decompose(const Tensor& f, const ToleranceConfig& tol) {
  require_square(f);
  std::size_t n = f.shape()[0];
  if (std::abs(mat_det(f)) <= tol.atol) {
    throw SingularMatrix("matrix is singular within tolerance");
  }
  std::vector<Scalar> a = f.data();
  std::vector<std::size_t> prow(n), pcol(n);
  for (std::size_t i = 0; i < n; ++i) prow[i] = pcol[i] = i;
  Tensor lm = Tensor::identity(n);
  auto at = [&](std::size_t i, std::size_t j) -> Scalar& { return a[i * n + j]; };
  for (std::size_t k = 0; k < n; ++k) {
    // Greedy max-abs pivot over the trailing block; strict comparison keeps
    // the first (smallest row-major) position on ties.
    std::size_t bi = k, bj = k;
    for (std::size_t i = k; i < n; ++i) {
      for (std::size_t j = k; j < n; ++j) {
        if (std::abs(at(i, j)) > std::abs(at(bi, bj))) {
          bi = i;
          bj = j;
        }
      }
    }
    if (bi != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(at(k, j), at(bi, j));
      for (std::size_t j = 0; j < k; ++j) {
        std::swap(lm.mutable_data()[k * n + j], lm.mutable_data()[bi * n + j]);
      }
      std::swap(prow[k], prow[bi]);
    }
    if (bj != k) {
      for (std::size_t i = 0; i < n; ++i) std::swap(at(i, k), at(i, bj));
      std::swap(pcol[k], pcol[bj]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      Scalar m = at(i, k) / at(k, k);
      lm.mutable_data()[i * n + k] = m;
      for (std::size_t j = k; j < n; ++j) at(i, j) -= m * at(k, j);
    }
  }
  Tensor d = Tensor::zeros({n, n});
  Tensor u = Tensor::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    Scalar dk = at(k, k);
    if (std::abs(dk) <= tol.atol) {
      throw SingularMatrix("vanishing pivot in factorization");
    }
    d.mutable_data()[k * n + k] = dk;
    for (std::size_t j = k + 1; j < n; ++j) {
      u.mutable_data()[k * n + j] = at(k, j) / dk;
    }
  }
  // Pr F Pc = L D U with row idx of (Pr F) = row prow[idx] of F, so
  // F = Pr^T L D U Pc^T.
  Tensor p = Tensor::zeros({n, n});
  Tensor pp = Tensor::zeros({n, n});
  for (std::size_t idx = 0; idx < n; ++idx) {
    p.mutable_data()[prow[idx] * n + idx] = Scalar(1.0);   // P = Pr^T
    pp.mutable_data()[idx * n + pcol[idx]] = Scalar(1.0);  // P' = Pc^T
  }
  return LduFactors{p, lm, d, u, pp};
}

}  // namespace ftriad
