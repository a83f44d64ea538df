#include "ftriad/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ftriad/linalg.hpp"

namespace ftriad {

namespace {

void validate_cfa(const Cfa& f) {
  std::size_t d = f.dim;
  if (d == 0) throw DimensionMismatch("algebra dimension must be positive");
  std::vector<std::size_t> cube{d, d, d};
  std::vector<std::size_t> vec{d};
  if (f.mu.shape() != cube || f.delta.shape() != cube ||
      f.eta.shape() != vec || f.epsilon.shape() != vec) {
    throw DimensionMismatch("algebra tensor shapes do not match dimension " +
                            std::to_string(d));
  }
}

struct LawCheck {
  double residual = 0.0;
  bool passed = true;

  void compare(const Tensor& lhs, const Tensor& rhs,
               const ToleranceConfig& tol) {
    double r = max_abs_diff(lhs, rhs);
    double scale = std::max({1.0, lhs.max_abs(), rhs.max_abs()});
    residual = std::max(residual, r);
    passed = passed && r <= tol.atol + tol.rtol * scale;
  }
};

Tensor from_entries(std::vector<std::size_t> shape,
                    const std::vector<std::vector<std::size_t>>& ones) {
  Tensor t = Tensor::zeros(std::move(shape));
  for (const auto& idx : ones) t.set(idx, Scalar(1.0));
  return t;
}

Cfa make_builtin(std::string name, std::size_t d,
                 const std::vector<std::vector<std::size_t>>& mu,
                 const std::vector<std::vector<std::size_t>>& eta,
                 const std::vector<std::vector<std::size_t>>& delta,
                 const std::vector<std::vector<std::size_t>>& eps) {
  Cfa f;
  f.name = std::move(name);
  f.dim = d;
  f.mu = from_entries({d, d, d}, mu);
  f.eta = from_entries({d}, eta);
  f.delta = from_entries({d, d, d}, delta);
  f.epsilon = from_entries({d}, eps);
  f.verified = true;
  return f;
}

}  // namespace

const char* axiom_name(AxiomLaw law) {
  switch (law) {
    case AxiomLaw::Coassociativity: return "coassociativity";
    case AxiomLaw::Counit: return "counit";
    case AxiomLaw::Associativity: return "associativity";
    case AxiomLaw::Unit: return "unit";
    case AxiomLaw::Frobenius: return "frobenius";
    case AxiomLaw::Commutativity: return "commutativity";
    case AxiomLaw::Cocommutativity: return "cocommutativity";
  }
  return "unknown";
}

bool AxiomReport::all_passed() const {
  return std::all_of(passed.begin(), passed.end(), [](bool b) { return b; });
}

double AxiomReport::max_residual() const {
  return *std::max_element(residuals.begin(), residuals.end());
}

const char* algebra_class_name(AlgebraClassLabel label) {
  switch (label) {
    case AlgebraClassLabel::Special: return "Special";
    case AlgebraClassLabel::AntiSpecial: return "AntiSpecial";
    case AlgebraClassLabel::IntermediateSpecial: return "IntermediateSpecial";
    case AlgebraClassLabel::Other: return "Other";
  }
  return "unknown";
}

AxiomReport check_axioms(const Cfa& f, const ToleranceConfig& tol) {
  validate_cfa(f);
  const Tensor& mu = f.mu;
  const Tensor& eta = f.eta;
  const Tensor& delta = f.delta;
  const Tensor& eps = f.epsilon;
  Tensor eye = Tensor::identity(f.dim);
  AxiomReport report;
  auto record = [&](AxiomLaw law, const LawCheck& check) {
    report.residuals[static_cast<std::size_t>(law)] = check.residual;
    report.passed[static_cast<std::size_t>(law)] = check.passed;
  };

  {  // (delta (x) id) . delta = (id (x) delta) . delta, both as [x,y,z,a]
    LawCheck c;
    Tensor d1 = contract(delta, delta, {{2, 0}});
    Tensor d2 = contract(delta, delta, {{2, 1}}).transpose({2, 0, 1, 3});
    c.compare(d1, d2, tol);
    record(AxiomLaw::Coassociativity, c);
  }
  {  // (eps (x) id) . delta = id = (id (x) eps) . delta
    LawCheck c;
    c.compare(contract(eps, delta, {{0, 0}}), eye, tol);
    c.compare(contract(eps, delta, {{0, 1}}), eye, tol);
    record(AxiomLaw::Counit, c);
  }
  {  // mu . (mu (x) id) = mu . (id (x) mu), both as [x,a,b,c]
    LawCheck c;
    Tensor a1 = contract(mu, mu, {{1, 0}}).transpose({0, 2, 3, 1});
    Tensor a2 = contract(mu, mu, {{2, 0}});
    c.compare(a1, a2, tol);
    record(AxiomLaw::Associativity, c);
  }
  {  // mu . (eta (x) id) = id = mu . (id (x) eta)
    LawCheck c;
    c.compare(contract(eta, mu, {{0, 1}}), eye, tol);
    c.compare(contract(eta, mu, {{0, 2}}), eye, tol);
    record(AxiomLaw::Unit, c);
  }
  {  // delta . mu = (id (x) mu) . (delta (x) id) = (mu (x) id) . (id (x) delta)
    LawCheck c;
    Tensor mid = contract(delta, mu, {{2, 0}});
    Tensor left = contract(delta, mu, {{1, 1}}).transpose({2, 0, 3, 1});
    Tensor right = contract(mu, delta, {{2, 0}}).transpose({0, 2, 1, 3});
    c.compare(mid, left, tol);
    c.compare(mid, right, tol);
    record(AxiomLaw::Frobenius, c);
  }
  {  // mu . swap = mu
    LawCheck c;
    c.compare(mu, mu.transpose({0, 2, 1}), tol);
    record(AxiomLaw::Commutativity, c);
  }
  {  // swap . delta = delta
    LawCheck c;
    c.compare(delta, delta.transpose({1, 0, 2}), tol);
    record(AxiomLaw::Cocommutativity, c);
  }
  return report;
}

DerivedMaps derived_maps(const Cfa& f) {
  validate_cfa(f);
  DerivedMaps dm;
  dm.bubble = contract(f.mu, f.delta, {{1, 0}, {2, 1}});
  dm.loop_unit = contract(dm.bubble, f.eta, {{1, 0}});
  dm.loop_counit = contract(f.epsilon, dm.bubble, {{0, 0}});
  dm.circle = contract(f.epsilon, dm.loop_unit, {{0, 0}}).flat(0);
  dm.cap = contract(f.epsilon, f.mu, {{0, 0}});
  dm.cup = contract(f.delta, f.eta, {{2, 0}});
  return dm;
}

AlgebraClass classify_algebra(const Cfa& f, const ToleranceConfig& tol) {
  if (!f.verified) {
    throw UnverifiedAlgebra("classify_algebra requires a CFA whose axioms "
                            "have been checked and marked verified");
  }
  DerivedMaps dm = derived_maps(f);
  std::size_t d = f.dim;
  AlgebraClass out;
  out.bubble_rank = numeric_rank(dm.bubble, tol);

  Tensor eye = Tensor::identity(d);
  out.special_residual = max_abs_diff(dm.bubble, eye);
  bool special_ok =
      out.special_residual <=
      tol.atol + tol.rtol * std::max(1.0, dm.bubble.max_abs());

  Tensor anti_lhs = dm.bubble * dm.circle;
  Tensor anti_rhs = outer(dm.loop_unit, dm.loop_counit);
  out.anti_special_residual = max_abs_diff(anti_lhs, anti_rhs);
  bool anti_ok = out.bubble_rank == 1 &&
                 out.anti_special_residual <=
                     tol.atol + tol.rtol * std::max({1.0, anti_lhs.max_abs(),
                                                     anti_rhs.max_abs()});

  // bubble^3 = c * bubble^2 with c read off at the largest bubble^2 entry.
  // The residual is scaled against max(|bubble|^3, |bubble^3|): error in
  // bubble^3 lives at the cube of the bubble's magnitude, and normalizing by
  // |bubble^3| alone would amplify it by 1/|c|.
  Tensor b2 = mat_mul(dm.bubble, dm.bubble);
  Tensor b3 = mat_mul(b2, dm.bubble);
  Scalar c(0.0);
  std::size_t pivot = b2.argmax_abs();
  Scalar denom = b2.flat(pivot);
  if (std::abs(denom) > tol.atol) c = b3.flat(pivot) / denom;
  out.intermediate_residual = max_abs_diff(b3, b2 * c);
  double prop_scale =
      std::max(std::pow(dm.bubble.max_abs(), 3.0), b3.max_abs());
  bool inter_ok = out.bubble_rank > 1 && out.bubble_rank < d &&
                  std::abs(c) > tol.atol &&
                  out.intermediate_residual <= tol.atol + tol.rtol * prop_scale;

  if (special_ok) {
    out.label = AlgebraClassLabel::Special;
  } else if (anti_ok) {
    out.label = AlgebraClassLabel::AntiSpecial;
  } else if (inter_ok) {
    out.label = AlgebraClassLabel::IntermediateSpecial;
  } else {
    out.label = AlgebraClassLabel::Other;
  }
  return out;
}

InducedState induce_state(const Cfa& f) {
  validate_cfa(f);
  InducedState out;
  Tensor cup = contract(f.delta, f.eta, {{2, 0}});        // [a, s]
  Tensor psi = contract(cup, f.delta, {{1, 2}});          // [a, b, c]
  out.psi = make_state(psi);
  out.phi = contract(f.epsilon, f.mu, {{0, 0}});          // cap
  out.xi = f.epsilon;
  return out;
}

InducedAlgebra induce_algebra(const PureState& psi, const Tensor& xi,
                              const ToleranceConfig& tol) {
  if (psi.parties != 3) {
    throw DimensionMismatch("induce_algebra requires a tripartite state");
  }
  std::size_t d = psi.dim;
  if (xi.shape() != std::vector<std::size_t>{d}) {
    throw DimensionMismatch("effect dimension does not match the state");
  }
  // K[x,y] = sum_b xi[b] psi[x,b,y]
  Tensor k = contract(xi, psi.amplitudes, {{0, 1}});
  if (std::abs(mat_det(k)) <= tol.atol) {
    throw NotStronglyMaximal(
        "the K-contraction for this effect is singular; no witness exists");
  }
  Tensor phi = mat_inverse(k);

  InducedAlgebra out;
  out.phi = phi;
  Cfa& f = out.algebra;
  f.name = "induced";
  f.dim = d;
  // mu[c,a,b] = sum_{a',b'} phi[a,a'] phi[b,b'] psi[a',b',c]
  Tensor t1 = contract(phi, psi.amplitudes, {{1, 0}});  // [a, b', c]
  Tensor t2 = contract(phi, t1, {{1, 1}});              // [b, a, c]
  f.mu = t2.transpose({2, 1, 0});
  // delta[b,c,a] = sum_{a'} phi[a,a'] psi[a',b,c]
  f.delta = t1.transpose({1, 2, 0});
  // eta[c] = sum_{a,b} xi[a] xi[b] psi[a,b,c]
  f.eta = contract(xi, contract(xi, psi.amplitudes, {{0, 0}}), {{0, 0}});
  f.epsilon = xi;
  f.verified = false;
  return out;
}

const Cfa& builtin_g3() {
  static const Cfa g = make_builtin(
      "G", 3,
      {{0, 0, 0}, {1, 1, 1}, {2, 2, 2}},
      {{0}, {1}, {2}},
      {{0, 0, 0}, {1, 1, 1}, {2, 2, 2}},
      {{0}, {1}, {2}});
  return g;
}

const Cfa& builtin_w3() {
  static const Cfa w = make_builtin(
      "W", 3,
      {{0, 0, 2}, {0, 1, 1}, {0, 2, 0}, {1, 1, 2}, {1, 2, 1}, {2, 2, 2}},
      {{2}},
      {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {0, 2, 2}, {1, 1, 2}, {2, 0, 2}},
      {{0}});
  return w;
}

const Cfa& builtin_i3() {
  static const Cfa i = make_builtin(
      "I", 3,
      {{0, 0, 1}, {0, 1, 0}, {1, 1, 1}, {2, 2, 2}},
      {{1}, {2}},
      {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {2, 2, 2}},
      {{0}, {2}});
  return i;
}

const Cfa& builtin_ghz2() {
  static const Cfa g = make_builtin(
      "GHZ2", 2,
      {{0, 0, 0}, {1, 1, 1}},
      {{0}, {1}},
      {{0, 0, 0}, {1, 1, 1}},
      {{0}, {1}});
  return g;
}

const Cfa& builtin_w2() {
  static const Cfa w = make_builtin(
      "W2", 2,
      {{0, 0, 1}, {0, 1, 0}, {1, 1, 1}},
      {{1}},
      {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}},
      {{0}});
  return w;
}

const std::vector<const Cfa*>& builtin_algebras() {
  static const std::vector<const Cfa*> all{&builtin_ghz2(), &builtin_w2(),
                                           &builtin_g3(), &builtin_w3(),
                                           &builtin_i3()};
  return all;
}

const Cfa* find_builtin_algebra(const std::string& name) {
  static const std::map<std::string, const Cfa*> table{
      {"G", &builtin_g3()},     {"G3", &builtin_g3()},
      {"W", &builtin_w3()},     {"W3", &builtin_w3()},
      {"I", &builtin_i3()},     {"I3", &builtin_i3()},
      {"GHZ2", &builtin_ghz2()}, {"W2", &builtin_w2()},
  };
  auto it = table.find(name);
  return it == table.end() ? nullptr : it->second;
}

}  // namespace ftriad
