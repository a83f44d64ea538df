#include "ftriad/synthesis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "ftriad/entanglement.hpp"
#include "ftriad/errors.hpp"
#include "ftriad/linalg.hpp"
#include "ftriad/rng.hpp"

namespace ftriad {

namespace {

Tensor vec3(Scalar a, Scalar b, Scalar c) {
  return Tensor({3}, {a, b, c});
}

Tensor diag_matrix(const Tensor& v) {
  Tensor m = Tensor::zeros({3, 3});
  for (std::size_t k = 0; k < 3; ++k) m.set({k, k}, v.at({k}));
  return m;
}

Tensor int_matrix(const std::array<double, 9>& vals) {
  std::vector<Scalar> data(vals.begin(), vals.end());
  return Tensor({3, 3}, std::move(data));
}

Diagram chain(const std::vector<Diagram>& stages) {
  if (stages.empty()) return wire_diagram(3);
  Diagram acc = stages.front();
  for (std::size_t k = 1; k < stages.size(); ++k) acc = seq(acc, stages[k]);
  return acc;
}

// cap = counit o mul (2 in, 0 out); cup = comul o unit (0 in, 2 out).
Diagram cap_diagram(const Cfa& alg) {
  return seq(mul_node(alg), counit_node(alg));
}

Diagram cup_diagram(const Cfa& alg) {
  return seq(unit_node(alg), comul_node(alg));
}

// (cap_A (x) id) o (id (x) cup_B): one wire in, one wire out.  Mixing the
// two algebras makes this a nontrivial permutation matrix.
Diagram bent_wire(const Cfa& cap_alg, const Cfa& cup_alg) {
  Diagram w = wire_diagram(cap_alg.dim);
  return seq(par(w, cup_diagram(cup_alg)), par(cap_diagram(cap_alg), w));
}

bool is_identity_images(const std::vector<std::size_t>& images) {
  return images.size() == 3 && images[0] == 0 && images[1] == 1 &&
         images[2] == 2;
}

// Reads the column-to-row map of an exact permutation matrix.
std::vector<std::size_t> permutation_images(const Tensor& pm) {
  std::vector<std::size_t> images(3, 3);
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t r = 0; r < 3; ++r) {
      if (std::abs(pm.at({r, c}) - Scalar(1.0)) <= 1e-12) {
        images[c] = r;
        break;
      }
    }
    if (images[c] == 3) throw DomainError("matrix is not a permutation");
  }
  return images;
}

// One diagonally conjugated Toeplitz factor: diag(d1) * toeplitz(v) * diag(d2)
// where toeplitz(v) = v[2] I + v[1] N + v[0] N^2.
struct ToeplitzFactor {
  Tensor d1;
  Tensor v;
  Tensor d2;
};

// Decomposes the strictly-upper data (u0, u1, u2) of a unit upper-triangular
// matrix [[1,u0,u1],[0,1,u2],[0,0,1]] into Toeplitz factors whose product in
// list order reproduces it.  When u0 or u2 is too small relative to the data,
// the entries are split across two factors using well-separated anchor
// values so every factor's conjugating diagonal stays invertible.
void realize_upper(Scalar u0, Scalar u1, Scalar u2,
                   std::vector<ToeplitzFactor>& out) {
  const double tau = 1e-3;
  const double scale =
      std::max({1.0, std::abs(u0), std::abs(u1), std::abs(u2)});
  if (std::min(std::abs(u0), std::abs(u2)) > tau * scale) {
    Scalar a = u0 * u2;
    ToeplitzFactor f;
    f.d1 = vec3(a, u2, Scalar(1.0));
    f.v = vec3(u1 / a, Scalar(1.0), Scalar(1.0));
    f.d2 = vec3(Scalar(1.0) / a, Scalar(1.0) / u2, Scalar(1.0));
    out.push_back(std::move(f));
    return;
  }
  const auto pick_anchor = [](Scalar u) {
    const double palette[4] = {1.0, -1.0, 2.0, -2.0};
    double best_key = -1.0;
    double best = palette[0];
    for (double x : palette) {
      double key = std::min(std::abs(Scalar(x)), std::abs(u - x));
      if (key > best_key) {
        best_key = key;
        best = x;
      }
    }
    return Scalar(best);
  };
  const Scalar a = pick_anchor(u0);
  const Scalar c = pick_anchor(u2);
  const Scalar cp = u2 - c;
  const Scalar q = u1 - a * cp;
  realize_upper(a, q, c, out);
  realize_upper(u0 - a, Scalar(0.0), cp, out);
}

SynthesisResult finish_result(Diagram dia, const Tensor& target,
                              Tensor achieved, double guard) {
  const std::size_t k = target.argmax_abs();
  const Scalar c = achieved.flat(k) / target.flat(k);
  const double resid =
      max_abs_diff(achieved, target * c) / std::max(1.0, achieved.max_abs());
  if (!(resid <= guard)) {
    throw SynthesisResidualExceeded("synthesized diagram deviates from its "
                                    "target beyond the internal guard");
  }
  SynthesisResult r;
  r.diagram = std::move(dia);
  r.target = target;
  r.achieved = std::move(achieved);
  r.scalar = c;
  r.residual = resid;
  return r;
}

}  // namespace

Trio make_default_trio() {
  return Trio{builtin_g3(), builtin_w3(), builtin_i3()};
}

Diagram vector_mult_map(const Cfa& alg, const Tensor& v) {
  if (v.ndim() != 1 || v.shape()[0] != alg.dim) {
    throw DimensionMismatch("vector_mult_map requires a vector matching the "
                            "algebra dimension");
  }
  if (v.max_abs() == 0.0) {
    throw DomainError("vector_mult_map requires a nonzero vector");
  }
  return seq(par(state_node(v), wire_diagram(alg.dim)), mul_node(alg));
}

Diagram permutation_diagram(const std::vector<std::size_t>& images,
                            const Trio& trio) {
  if (images.size() != 3) {
    throw DomainError("permutation_diagram expects 3 images");
  }
  std::array<bool, 3> seen{};
  for (std::size_t v : images) {
    if (v > 2 || seen[v]) {
      throw DomainError("images do not form a permutation of {0,1,2}");
    }
    seen[v] = true;
  }
  // Generators: J (0<->2), T (0<->1) and the 3-cycle C sending
  // e0->e2, e1->e0, e2->e1.  Each word below composes left factor first.
  const auto J = [&] { return bent_wire(trio.g, trio.w); };
  const auto T = [&] { return bent_wire(trio.g, trio.i); };
  const auto C = [&] { return bent_wire(trio.w, trio.i); };
  const std::size_t key = images[0] * 9 + images[1] * 3 + images[2];
  switch (key) {
    case 0 * 9 + 1 * 3 + 2:
      return wire_diagram(3);
    case 2 * 9 + 1 * 3 + 0:
      return J();
    case 1 * 9 + 0 * 3 + 2:
      return T();
    case 2 * 9 + 0 * 3 + 1:
      return C();
    case 1 * 9 + 2 * 3 + 0:
      return seq(T(), J());
    default:  // 0 * 9 + 2 * 3 + 1
      return seq(T(), C());
  }
}

SynthesisResult matrix_to_diagram(const Tensor& f, const Trio& trio,
                                  const ToleranceConfig& tol) {
  if (f.ndim() != 2 || f.shape()[0] != 3 || f.shape()[1] != 3) {
    throw DimensionMismatch("matrix_to_diagram requires a 3x3 matrix");
  }
  // Scale-invariant invertibility gate: treat the matrix as singular when its
  // smallest singular value falls below rank_cutoff times its largest, so
  // well-conditioned matrices synthesize regardless of their overall scale.
  if (numeric_rank(f, tol) < 3) {
    throw SingularMatrix("matrix_to_diagram requires an invertible matrix");
  }
  const double entry_floor = tol.atol * f.max_abs();

  Diagram dia;
  bool built = false;
  if (max_abs_diff(f, Tensor::identity(3)) <= entry_floor) {
    dia = wire_diagram(3);
    built = true;
  } else {
    bool diagonal = true;
    for (std::size_t r = 0; r < 3 && diagonal; ++r) {
      for (std::size_t c = 0; c < 3; ++c) {
        if (r != c && std::abs(f.at({r, c})) > entry_floor) {
          diagonal = false;
          break;
        }
      }
    }
    if (diagonal) {
      dia = vector_mult_map(trio.g,
                            vec3(f.at({0, 0}), f.at({1, 1}), f.at({2, 2})));
      built = true;
    }
  }

  if (!built) {
    const LduFactors ldu = ldu_decompose(f, tol);
    std::vector<Diagram> stages;
    const auto add_permutation = [&](const Tensor& pm) {
      const std::vector<std::size_t> images = permutation_images(pm);
      if (!is_identity_images(images)) {
        stages.push_back(permutation_diagram(images, trio));
      }
    };

    // F = P L D U P'; the diagram composes the right permutation first.
    add_permutation(ldu.pp);

    const Scalar u0 = ldu.u.at({0, 1});
    const Scalar u1 = ldu.u.at({0, 2});
    const Scalar u2 = ldu.u.at({1, 2});
    if (u0 != Scalar(0.0) || u1 != Scalar(0.0) || u2 != Scalar(0.0)) {
      std::vector<ToeplitzFactor> factors;
      realize_upper(u0, u1, u2, factors);
      // The factor list multiplies left-to-right, so the last factor acts
      // first; within one factor diag(d2) acts first.
      for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
        stages.push_back(vector_mult_map(trio.g, it->d2));
        stages.push_back(vector_mult_map(trio.w, it->v));
        stages.push_back(vector_mult_map(trio.g, it->d1));
      }
    }

    stages.push_back(vector_mult_map(
        trio.g, vec3(ldu.d.at({0, 0}), ldu.d.at({1, 1}), ldu.d.at({2, 2}))));

    const Scalar l0 = ldu.l.at({1, 0});
    const Scalar l1 = ldu.l.at({2, 0});
    const Scalar l2 = ldu.l.at({2, 1});
    if (l0 != Scalar(0.0) || l1 != Scalar(0.0) || l2 != Scalar(0.0)) {
      // Realize L through its transpose: L^T is unit upper-triangular with
      // data (l0, l1, l2), and transposing a Toeplitz factor amounts to
      // conjugation by the antidiagonal J.  Transposition also reverses the
      // factor order, so here the first factor acts first.
      std::vector<ToeplitzFactor> factors;
      realize_upper(l0, l1, l2, factors);
      const std::vector<std::size_t> jimages{2, 1, 0};
      for (const ToeplitzFactor& g : factors) {
        stages.push_back(vector_mult_map(trio.g, g.d1));
        stages.push_back(permutation_diagram(jimages, trio));
        stages.push_back(vector_mult_map(trio.w, g.v));
        stages.push_back(permutation_diagram(jimages, trio));
        stages.push_back(vector_mult_map(trio.g, g.d2));
      }
    }

    add_permutation(ldu.p);
    dia = chain(stages);
  }

  Tensor achieved = eval_to_matrix(dia);
  return finish_result(std::move(dia), f, std::move(achieved),
                       std::max(1e-8, tol.atol));
}

namespace {

// Gating matrix A_j sends the selector basis state |j-1> to the I-unit
// (pass-through) and every other basis state to |2> (absorb into the W-unit
// after an I-multiplication by <2|.>|2>).  Each A_j factors into invertible
// integer matrices around diag(1,1,0), all realizable exactly.
Diagram gate_diagram(std::size_t j, const Trio& trio) {
  static const std::array<double, 9> kLeft = {0, 0, 1, 1, 0, 0, 1, 1, 0};
  static const std::array<std::array<double, 9>, 3> kRight = {{
      {1, 0, 0, 0, 1, 1, 0, 0, 1},
      {0, 1, 0, 1, 0, 1, 0, 0, 1},
      {0, 0, 1, 1, 1, 0, 0, 1, 0},
  }};
  Diagram right = matrix_to_diagram(int_matrix(kRight[j]), trio).diagram;
  Diagram mid = vector_mult_map(trio.g, vec3(1.0, 1.0, 0.0));
  Diagram left = matrix_to_diagram(int_matrix(kLeft), trio).diagram;
  return seq(seq(right, mid), left);
}

}  // namespace

Diagram mux_skeleton(std::size_t n, const Trio& trio) {
  if (n == 0) throw DomainError("mux_skeleton requires at least one wire");
  const std::size_t w = 3 * n;

  // Selector: one G-unit fanned out into 1 + 3n copies via comultiplication.
  Diagram sel = unit_node(trio.g);
  for (std::size_t k = 1; k <= w; ++k) {
    Diagram layer = comul_node(trio.g);
    for (std::size_t extra = 1; extra < k; ++extra) {
      layer = par(layer, wire_diagram(3));
    }
    sel = seq(sel, layer);
  }

  // Branch wires (3n of them, branch-major) alongside the selector copies.
  Diagram full = sel;
  for (std::size_t k = 0; k < w; ++k) full = par(wire_diagram(3), full);

  // Regroup as [selector-label, then per merge group g: branch wires
  // (g, n+g, 2n+g) interleaved with three gating copies].
  std::vector<std::size_t> order;
  order.push_back(w);  // first selector copy becomes the output label
  for (std::size_t g = 0; g < n; ++g) {
    order.push_back(g);
    order.push_back(w + 1 + 3 * g);
    order.push_back(n + g);
    order.push_back(w + 2 + 3 * g);
    order.push_back(2 * n + g);
    order.push_back(w + 3 + 3 * g);
  }
  std::vector<std::size_t> perm(order.size());
  for (std::size_t t = 0; t < order.size(); ++t) perm[order[t]] = t;
  Diagram route =
      permutation_wiring(std::vector<std::size_t>(order.size(), 3), perm);

  // Per-group merge: gate each branch wire by the selector copy, then fold
  // the three gated wires with W-multiplications.
  Diagram gated = par(wire_diagram(3), gate_diagram(0, trio));
  gated = par(gated, wire_diagram(3));
  gated = par(gated, gate_diagram(1, trio));
  gated = par(gated, wire_diagram(3));
  gated = par(gated, gate_diagram(2, trio));
  Diagram mul_layer =
      par(par(mul_node(trio.i), mul_node(trio.i)), mul_node(trio.i));
  Diagram merge = seq(seq(gated, mul_layer),
                      seq(par(wire_diagram(3), mul_node(trio.w)),
                          mul_node(trio.w)));

  Diagram blocks = wire_diagram(3);  // the label passes through
  for (std::size_t g = 0; g < n; ++g) blocks = par(blocks, merge);

  return seq(seq(full, route), blocks);
}

Diagram qmux(const Trio& trio) { return mux_skeleton(1, trio); }

Diagram qmux_corrected(const Tensor& psi, const Tensor& phi,
                       const Tensor& zeta, const Trio& trio,
                       const ToleranceConfig& tol) {
  const Tensor* inputs[3] = {&psi, &phi, &zeta};
  const char* names[3] = {"psi", "phi", "zeta"};
  Scalar o[3];
  for (std::size_t j = 0; j < 3; ++j) {
    if (inputs[j]->ndim() != 1 || inputs[j]->shape()[0] != 3) {
      throw DimensionMismatch("qmux_corrected expects three qutrit vectors");
    }
    o[j] = inputs[j]->at({2});
    if (std::abs(o[j]) <= tol.atol) {
      throw ZeroOverlap(j, std::string("<2|") + names[j] + "> vanishes");
    }
  }
  const Tensor lc = vec3(Scalar(1.0) / (o[1] * o[2]),
                         Scalar(1.0) / (o[2] * o[0]),
                         Scalar(1.0) / (o[0] * o[1]));
  Diagram correction = matrix_to_diagram(diag_matrix(lc), trio, tol).diagram;
  Diagram states = par(par(state_node(psi), state_node(phi)),
                       state_node(zeta));
  return seq(seq(states, qmux(trio)),
             par(correction, wire_diagram(3)));
}

namespace {

Tensor slice_first(const Tensor& t, std::size_t k) {
  const std::vector<std::size_t> shape(t.shape().begin() + 1,
                                       t.shape().end());
  std::size_t block = 1;
  for (std::size_t d : shape) block *= d;
  std::vector<Scalar> data(t.data().begin() + k * block,
                           t.data().begin() + (k + 1) * block);
  return Tensor(shape, std::move(data));
}

SynthesisResult state_synth_impl(const PureState& s, const Trio& trio,
                                 const ToleranceConfig& tol, Rng& rng) {
  if (s.parties == 1) {
    Diagram dia = state_node(s.amplitudes);
    Tensor achieved = evaluate(dia);
    return finish_result(std::move(dia), s.amplitudes, std::move(achieved),
                         std::max(1e-8, tol.atol));
  }

  const std::size_t n = s.parties;
  for (int attempt = 0; attempt < 8; ++attempt) {
    // Random invertible rotation per party keeps branch slices and their
    // |2...2> overlaps away from zero (probability-1 for any fixed state).
    std::vector<Tensor> rot;
    rot.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      Tensor r;
      do {
        r = rng.gaussian_matrix(3, 3);
      } while (std::abs(mat_det(r)) <= 0.1);
      rot.push_back(std::move(r));
    }
    const PureState rotated = apply_local(s, rot);

    // Branches are rescaled to unit peak before recursing so magnitudes stay
    // O(1) at every depth; the removed factor rejoins on the selector wire.
    std::array<Tensor, 3> branch_amp;
    std::array<Scalar, 3> tilde{};
    std::array<double, 3> bscale{};
    bool usable = true;
    for (std::size_t k = 0; k < 3; ++k) {
      Tensor b = slice_first(rotated.amplitudes, k);
      const double peak = b.max_abs();
      if (peak == 0.0) {
        usable = false;
        break;
      }
      b = b * Scalar(1.0 / peak);
      tilde[k] = b.flat(b.size() - 1);
      if (std::abs(tilde[k]) <= 1e-2) {
        usable = false;
        break;
      }
      branch_amp[k] = std::move(b);
      bscale[k] = peak;
    }
    if (!usable) continue;

    std::array<SynthesisResult, 3> branches;
    Diagram whole;
    try {
      for (std::size_t k = 0; k < 3; ++k) {
        branches[k] = state_synth_impl(make_state(branch_amp[k]), trio, tol,
                                       rng);
      }

      Diagram front = par(par(branches[0].diagram, branches[1].diagram),
                          branches[2].diagram);
      Diagram mux = mux_skeleton(n - 1, trio);

      // Undo the rotation on each output; the label wire additionally takes
      // the diagonal clearing the off-branch |2...2> overlap products and
      // restoring the per-branch peak factors removed above.
      const Tensor lc = vec3(Scalar(bscale[0]) / (tilde[1] * tilde[2]),
                             Scalar(bscale[1]) / (tilde[2] * tilde[0]),
                             Scalar(bscale[2]) / (tilde[0] * tilde[1]));
      Diagram back = matrix_to_diagram(
          mat_mul(mat_inverse(rot[0]), diag_matrix(lc)), trio, tol).diagram;
      for (std::size_t j = 1; j < n; ++j) {
        back = par(back,
                   matrix_to_diagram(mat_inverse(rot[j]), trio, tol).diagram);
      }
      whole = seq(seq(front, mux), back);
    } catch (const Error&) {
      continue;  // re-randomize
    }

    Tensor achieved = evaluate(whole);
    const std::size_t peak_index = s.amplitudes.argmax_abs();
    const Scalar c = achieved.flat(peak_index) / s.amplitudes.flat(peak_index);
    const double resid = max_abs_diff(achieved, s.amplitudes * c) /
                         std::max(1.0, achieved.max_abs());
    if (resid <= 1e-9) {
      SynthesisResult r;
      r.diagram = std::move(whole);
      r.target = s.amplitudes;
      r.achieved = std::move(achieved);
      r.scalar = c;
      r.residual = resid;
      return r;
    }
  }
  throw SynthesisResidualExceeded(
      "state_to_diagram did not reach the target after 8 rotation attempts");
}

}  // namespace

SynthesisResult state_to_diagram(const PureState& s, const Trio& trio,
                                 const ToleranceConfig& tol,
                                 std::uint64_t seed) {
  if (s.dim != 3) {
    throw DimensionMismatch("state_to_diagram requires qutrit states");
  }
  if (s.parties < 1 || s.parties > 6) {
    throw DomainError("state_to_diagram supports 1 to 6 parties");
  }
  Rng rng(seed);
  return state_synth_impl(s, trio, tol, rng);
}

}  // namespace ftriad
