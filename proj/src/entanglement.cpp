#include "ftriad/entanglement.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "ftriad/linalg.hpp"
#include "ftriad/rng.hpp"

namespace ftriad {

// ---------------------------------------------------------------------------
// PureState basics
// ---------------------------------------------------------------------------

PureState make_state(Tensor amplitudes) {
  if (amplitudes.ndim() == 0) {
    throw DimensionMismatch("a state needs at least one party");
  }
  std::size_t d = amplitudes.shape()[0];
  for (std::size_t v : amplitudes.shape()) {
    if (v != d) {
      throw DimensionMismatch("all parties must share one local dimension");
    }
  }
  if (amplitudes.max_abs() == 0.0) {
    throw DomainError("state amplitudes are all zero");
  }
  PureState s;
  s.parties = amplitudes.ndim();
  s.dim = d;
  s.amplitudes = std::move(amplitudes);
  return s;
}

bool states_equal(const PureState& a, const PureState& b,
                  const ToleranceConfig& tol) {
  if (a.parties != b.parties || a.dim != b.dim) return false;
  return approx_proportional(a.amplitudes, b.amplitudes, tol).has_value();
}

PureState apply_local(const PureState& s, const LocalOperation& op) {
  if (op.size() != s.parties) {
    throw DimensionMismatch("need exactly one matrix per party");
  }
  Tensor amp = s.amplitudes;
  for (const Tensor& m : op) {
    if (m.ndim() != 2 || m.shape()[0] != s.dim || m.shape()[1] != s.dim) {
      throw DimensionMismatch("local operations must be d x d matrices");
    }
    // Consume the current front party index against the matrix column index;
    // the transformed index lands at the back, so after one pass per party
    // the original order is restored.
    amp = contract(amp, m, {{0, 1}});
  }
  return make_state(std::move(amp));
}

bool is_symmetric(const PureState& s, const ToleranceConfig& tol) {
  if (s.parties > 6) {
    throw DomainError("symmetry check supports up to 6 parties");
  }
  std::vector<std::size_t> perm(s.parties);
  for (std::size_t i = 0; i < s.parties; ++i) perm[i] = i;
  double bound = tol.atol + tol.rtol * s.amplitudes.max_abs();
  do {
    if (max_abs_diff(s.amplitudes, s.amplitudes.transpose(perm)) > bound) {
      return false;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return true;
}

// ---------------------------------------------------------------------------
// Strong maximality
// ---------------------------------------------------------------------------

namespace {

// K(xi) for party p: contract xi on the party index, leaving the other two
// parties as the matrix indices in their original order.
Tensor k_slice(const PureState& s, std::size_t party, const Tensor& xi) {
  return contract(xi, s.amplitudes, {{0, party}});
}

// Candidate effects tried before random sampling: all-ones first (so the
// canonical states get their textbook witnesses), then basis effects, then
// two-element sums.
std::vector<Tensor> structured_effects(std::size_t d) {
  std::vector<Tensor> out;
  Tensor ones = Tensor::zeros({d});
  for (std::size_t i = 0; i < d; ++i) ones.set({i}, Scalar(1.0));
  out.push_back(ones);
  for (std::size_t i = 0; i < d; ++i) out.push_back(Tensor::basis_vector(d, i));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      Tensor v = Tensor::basis_vector(d, i) + Tensor::basis_vector(d, j);
      out.push_back(v);
    }
  }
  return out;
}

// Matricization of party p: that index moved to the front, flattened to
// d x d^(N-1).
Tensor party_matricization(const PureState& s, std::size_t party) {
  std::vector<std::size_t> axes;
  axes.push_back(party);
  for (std::size_t k = 0; k < s.parties; ++k) {
    if (k != party) axes.push_back(k);
  }
  std::size_t rest = 1;
  for (std::size_t k = 1; k < s.parties; ++k) rest *= s.dim;
  return s.amplitudes.transpose(axes).reshape({s.dim, rest});
}

constexpr double kStructuredRcondFloor = 1e-3;
constexpr double kRandomRcondFloor = 1e-5;

}  // namespace

MaximalityResult maximality_witness(const PureState& s, std::size_t trials,
                                    std::uint64_t seed) {
  if (s.parties != 3) {
    throw DimensionMismatch("strong maximality is defined for 3 parties");
  }
  MaximalityResult result;
  ToleranceConfig tol;

  // Exact phase: a party whose matricization has deficient rank admits no
  // invertible K(xi) for any xi.
  for (std::size_t p = 0; p < 3; ++p) {
    if (numeric_rank(party_matricization(s, p), tol) < s.dim) {
      result.maximal = false;
      result.exact = true;
      result.failing_party = p;
      return result;
    }
  }

  Rng rng(seed);
  std::vector<Witness> witnesses;
  for (std::size_t p = 0; p < 3; ++p) {
    Tensor best_xi;
    double best_rcond = -1.0;
    bool accepted = false;
    for (const Tensor& xi : structured_effects(s.dim)) {
      double rc = rcond(k_slice(s, p, xi));
      if (rc >= kStructuredRcondFloor) {
        best_xi = xi;
        best_rcond = rc;
        accepted = true;
        break;
      }
      if (rc > best_rcond) {
        best_rcond = rc;
        best_xi = xi;
      }
    }
    if (!accepted) {
      for (std::size_t t = 0; t < trials; ++t) {
        Tensor xi = rng.gaussian_vector(s.dim);
        double rc = rcond(k_slice(s, p, xi));
        if (rc > best_rcond) {
          best_rcond = rc;
          best_xi = xi;
        }
      }
      accepted = best_rcond >= kRandomRcondFloor;
    }
    if (!accepted) {
      result.maximal = false;
      result.exact = false;
      result.failing_party = p;
      return result;
    }
    Witness w;
    w.xi = best_xi;
    w.phi = mat_inverse(k_slice(s, p, best_xi));
    witnesses.push_back(std::move(w));
  }
  result.maximal = true;
  result.witnesses = std::move(witnesses);
  return result;
}

// ---------------------------------------------------------------------------
// Classifier
// ---------------------------------------------------------------------------

namespace {

const char* kClassNames[] = {"ClassG", "ClassW", "ClassI", "NonFrobenius"};
const char* kReasonNames[] = {"NotStronglyMaximal", "NotSymmetric",
                              "NoValidAlgebraFound"};

// Roots of x^3 + c2 x^2 + c1 x + c0 (complex Cardano).
std::array<Scalar, 3> cubic_roots(Scalar c2, Scalar c1, Scalar c0) {
  Scalar p = c1 - c2 * c2 / 3.0;
  Scalar q = c2 * c2 * c2 * (2.0 / 27.0) - c2 * c1 / 3.0 + c0;
  Scalar disc = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
  Scalar u3 = -q / 2.0 + disc;
  Scalar alt = -q / 2.0 - disc;
  if (std::abs(alt) > std::abs(u3)) u3 = alt;
  Scalar u = std::pow(u3, 1.0 / 3.0);
  const Scalar omega(-0.5, std::sqrt(3.0) / 2.0);
  std::array<Scalar, 3> roots;
  for (int k = 0; k < 3; ++k) {
    Scalar uk = u;
    if (k == 1) uk = u * omega;
    if (k == 2) uk = u * omega * omega;
    Scalar t = std::abs(uk) > 1e-300 ? uk - p / (3.0 * uk) : Scalar(0.0);
    roots[k] = t - c2 / 3.0;
  }
  return roots;
}

Tensor mu_apply(const Tensor& mu, const Tensor& a, const Tensor& b) {
  return contract(contract(mu, a, {{1, 0}}), b, {{1, 0}});
}

// Complex bilinear cross product (no conjugation).
std::array<Scalar, 3> cross3(const std::array<Scalar, 3>& a,
                             const std::array<Scalar, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

// For a witness whose induced algebra passes the axioms but has a full-rank
// non-identity bubble (a rescaled copyable basis), recover the canonical
// effect: diagonalize multiplication by a random element, polish the three
// idempotents, weight them against the state, and solve for the xi that
// evaluates to 1 on each weighted idempotent.
std::optional<Witness> canonicalize_g(const PureState& s, const Tensor& mu,
                                      Rng& rng, const ToleranceConfig& tol) {
  const std::size_t d = 3;
  Tensor ones = Tensor::zeros({d});
  for (std::size_t i = 0; i < d; ++i) ones.set({i}, Scalar(1.0));

  for (int attempt = 0; attempt < 8; ++attempt) {
    Tensor r = rng.gaussian_vector(d);
    Tensor m = contract(mu, r, {{1, 0}});  // multiplication by r: m[c,b]
    Scalar tr(0.0), tr2(0.0);
    Tensor m2 = mat_mul(m, m);
    for (std::size_t i = 0; i < d; ++i) {
      tr += m.at({i, i});
      tr2 += m2.at({i, i});
    }
    Scalar c2 = -tr;
    Scalar c1 = (tr * tr - tr2) * 0.5;
    Scalar c0 = -mat_det(m);
    std::array<Scalar, 3> lam = cubic_roots(c2, c1, c0);
    double scale = std::max({1.0, std::abs(lam[0]), std::abs(lam[1]),
                             std::abs(lam[2])});
    double gap = std::min({std::abs(lam[0] - lam[1]),
                           std::abs(lam[0] - lam[2]),
                           std::abs(lam[1] - lam[2])});
    if (gap <= 1e-6 * scale) continue;

    std::vector<Tensor> idem;
    bool ok = true;
    for (int k = 0; k < 3 && ok; ++k) {
      std::array<std::array<Scalar, 3>, 3> rows;
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
          rows[i][j] = m.at({i, j}) - (i == j ? lam[k] : Scalar(0.0));
        }
      }
      std::array<Scalar, 3> best{};
      double best_norm = 0.0;
      const std::array<std::pair<int, int>, 3> pairs{
          {{0, 1}, {0, 2}, {1, 2}}};
      for (const auto& [i, j] : pairs) {
        std::array<Scalar, 3> c = cross3(rows[i], rows[j]);
        double n = std::norm(c[0]) + std::norm(c[1]) + std::norm(c[2]);
        if (n > best_norm) {
          best_norm = n;
          best = c;
        }
      }
      if (best_norm < 1e-20) {
        ok = false;
        break;
      }
      Tensor v({d}, {best[0], best[1], best[2]});
      std::size_t kk = v.argmax_abs();
      Tensor vv = mu_apply(mu, v, v);
      Scalar lam_p = vv.flat(kk) / v.flat(kk);
      if (std::abs(lam_p) < 1e-12) {
        ok = false;
        break;
      }
      Tensor pvec = v * (Scalar(1.0) / lam_p);
      for (int it = 0; it < 3; ++it) {
        Tensor p2 = mu_apply(mu, pvec, pvec);
        Tensor p3 = mu_apply(mu, p2, pvec);
        pvec = p2 * Scalar(3.0) - p3 * Scalar(2.0);
      }
      idem.push_back(std::move(pvec));
    }
    if (!ok) continue;

    // Weights a_i with sum_i a_i p_i (x) p_i (x) p_i = psi.
    Tensor a_mat = Tensor::zeros({27, 3});
    for (std::size_t i = 0; i < 3; ++i) {
      Tensor triple = outer(outer(idem[i], idem[i]), idem[i]).reshape({27});
      for (std::size_t x = 0; x < 27; ++x) a_mat.set({x, i}, triple.flat(x));
    }
    Tensor rhs = s.amplitudes.reshape({27});
    Tensor weights;
    try {
      weights = solve_least_squares(a_mat, rhs);
    } catch (const Error&) {
      continue;
    }

    Tensor qt = Tensor::zeros({3, 3});  // rows = cube-rooted idempotents
    for (std::size_t i = 0; i < 3; ++i) {
      Scalar cr = std::pow(weights.flat(i), 1.0 / 3.0);
      for (std::size_t x = 0; x < 3; ++x) {
        qt.set({i, x}, cr * idem[i].flat(x));
      }
    }
    Tensor xi;
    try {
      xi = solve_linear(qt, ones);
    } catch (const Error&) {
      continue;
    }

    try {
      InducedAlgebra ind = induce_algebra(s, xi, tol);
      AxiomReport rep = check_axioms(ind.algebra, tol);
      if (!rep.all_passed()) continue;
      ind.algebra.verified = true;
      AlgebraClass cls = classify_algebra(ind.algebra, tol);
      if (cls.label != AlgebraClassLabel::Special) continue;
      Witness w;
      w.xi = xi;
      w.phi = ind.phi;
      return w;
    } catch (const Error&) {
      continue;
    }
  }
  return std::nullopt;
}

}  // namespace

const char* state_class_name(StateClassKind k) {
  return kClassNames[static_cast<int>(k)];
}

const char* non_frobenius_reason_name(NonFrobeniusReason r) {
  return kReasonNames[static_cast<int>(r)];
}

ClassLabel classify_state(const PureState& s, std::size_t budget,
                          std::uint64_t seed) {
  if (s.parties != 3 || s.dim != 3) {
    throw DimensionMismatch("classification targets tripartite qutrits");
  }
  // Internal tolerances: absolute floor for residuals, relative slack
  // calibrated so that axiom checks survive moderately conditioned
  // witnesses, and a rank cutoff far above witness-induced noise.
  ToleranceConfig tol;
  tol.atol = 1e-9;
  tol.rtol = 1e-6;
  tol.rank_cutoff = 1e-8;

  ClassLabel out;
  MaximalityResult max = maximality_witness(s, 64, seed);
  if (!max.maximal) {
    out.kind = StateClassKind::NonFrobenius;
    out.reason = NonFrobeniusReason::NotStronglyMaximal;
    return out;
  }
  if (!is_symmetric(s, tol)) {
    out.kind = StateClassKind::NonFrobenius;
    out.reason = NonFrobeniusReason::NotSymmetric;
    return out;
  }

  // Candidate schedule: structured effects first, then random effects in
  // decreasing order of the conditioning of K (best-first; a fixed
  // conditioning gate would reject every candidate on badly scaled but
  // perfectly classifiable SLOCC images).
  std::vector<Tensor> candidates = structured_effects(s.dim);
  Rng rng(seed);
  std::vector<std::pair<double, Tensor>> random_pool;
  std::size_t random_count =
      budget > candidates.size() ? budget - candidates.size() : 0;
  for (std::size_t t = 0; t < random_count; ++t) {
    Tensor xi = rng.gaussian_vector(s.dim);
    random_pool.emplace_back(rcond(k_slice(s, 1, xi)), xi);
  }
  std::stable_sort(random_pool.begin(), random_pool.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (auto& [rc, xi] : random_pool) {
    if (rc < kRandomRcondFloor) break;
    candidates.push_back(std::move(xi));
  }
  if (candidates.size() > budget) candidates.resize(budget);

  for (const Tensor& xi : candidates) {
    InducedAlgebra ind;
    try {
      ind = induce_algebra(s, xi, tol);
    } catch (const Error&) {
      continue;
    }
    AxiomReport rep = check_axioms(ind.algebra, tol);
    if (!rep.all_passed()) continue;
    ind.algebra.verified = true;
    AlgebraClass cls = classify_algebra(ind.algebra, tol);
    Witness w;
    w.xi = xi;
    w.phi = ind.phi;
    switch (cls.label) {
      case AlgebraClassLabel::Special:
        out.kind = StateClassKind::ClassG;
        out.witness = std::move(w);
        out.algebra_class = cls;
        return out;
      case AlgebraClassLabel::AntiSpecial:
        out.kind = StateClassKind::ClassW;
        out.witness = std::move(w);
        out.algebra_class = cls;
        return out;
      case AlgebraClassLabel::IntermediateSpecial:
        out.kind = StateClassKind::ClassI;
        out.witness = std::move(w);
        out.algebra_class = cls;
        return out;
      case AlgebraClassLabel::Other: {
        if (cls.bubble_rank != s.dim) continue;
        // Full-rank bubble: a rescaled orthogonal basis of copyables.
        // Recover the canonical effect and re-induce.
        std::optional<Witness> canon =
            canonicalize_g(s, ind.algebra.mu, rng, tol);
        if (!canon) continue;
        InducedAlgebra cind = induce_algebra(s, canon->xi, tol);
        cind.algebra.verified = true;
        out.kind = StateClassKind::ClassG;
        out.witness = std::move(canon);
        out.algebra_class = classify_algebra(cind.algebra, tol);
        return out;
      }
    }
  }
  out.kind = StateClassKind::NonFrobenius;
  out.reason = NonFrobeniusReason::NoValidAlgebraFound;
  return out;
}

// ---------------------------------------------------------------------------
// Witness transport and SLOCC verification
// ---------------------------------------------------------------------------

Witness transport_witness(const PureState& s, const LocalOperation& op,
                          const Witness& w) {
  if (op.size() != s.parties) {
    throw DimensionMismatch("need exactly one matrix per party");
  }
  for (const Tensor& m : op) {
    if (m.ndim() != 2 || m.shape()[0] != s.dim || m.shape()[1] != s.dim) {
      throw DimensionMismatch("local operations must be d x d matrices");
    }
  }
  double scale = std::max(1.0, op[0].max_abs());
  for (std::size_t j = 1; j < op.size(); ++j) {
    if (max_abs_diff(op[0], op[j]) > 1e-12 * scale) {
      throw DomainError(
          "witness transport requires the same matrix on every party");
    }
  }
  Tensor linv = mat_inverse(op[0]);
  Witness out;
  out.xi = contract(w.xi, linv, {{0, 0}});
  out.phi = contract(contract(w.phi, linv, {{0, 0}}), linv, {{0, 0}});
  return out;
}

bool verify_slocc_witness(const PureState& s1, const PureState& s2,
                          const LocalOperation& op,
                          const ToleranceConfig& tol) {
  if (s1.parties != s2.parties || s1.dim != s2.dim) {
    throw DimensionMismatch("states live on different systems");
  }
  if (op.size() != s2.parties) {
    throw DimensionMismatch("need exactly one matrix per party");
  }
  for (const Tensor& m : op) {
    if (m.ndim() != 2 || m.shape()[0] != s2.dim || m.shape()[1] != s2.dim) {
      throw DimensionMismatch("local operations must be d x d matrices");
    }
    if (std::abs(mat_det(m)) <= tol.atol) {
      throw SingularMatrix("SLOCC witnesses must be invertible");
    }
  }
  PureState image = apply_local(s2, op);
  return approx_proportional(image.amplitudes, s1.amplitudes, tol).has_value();
}

}  // namespace ftriad
