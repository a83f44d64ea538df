#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "ftriad/algebra.hpp"
#include "ftriad/diagram.hpp"
#include "ftriad/linalg.hpp"
#include "ftriad/rng.hpp"
#include "ftriad/tensor.hpp"
#include "test_support.h"

using namespace ftriad;
using testutil::diff;
using testutil::thaw;

namespace {

std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> sorted_components(
    const Diagram& d) {
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> v;
  for (const SpiderComponent& c : spider_signature(d).components)
    v.emplace_back(c.m, c.n, c.loops);
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_SUITE("diagram") {

TEST_CASE("generator nodes evaluate to their structure tensors") {
  // evaluate() orders boundary indices [inputs..., outputs...]; the stored
  // tensors are outputs-first, so the node evaluations are transposes.
  for (const Cfa* a : builtin_algebras()) {
    CAPTURE(a->name);
    CHECK(max_abs_diff(evaluate(mul_node(*a)), a->mu.transpose({1, 2, 0})) == 0.0);
    CHECK(max_abs_diff(evaluate(unit_node(*a)), a->eta) == 0.0);
    CHECK(max_abs_diff(evaluate(comul_node(*a)), a->delta.transpose({2, 0, 1})) == 0.0);
    CHECK(max_abs_diff(evaluate(counit_node(*a)), a->epsilon) == 0.0);
  }
  const Cfa& g = builtin_g3();
  CHECK(max_abs_diff(eval_to_matrix(mul_node(g)), g.mu.reshape({3, 9})) == 0.0);
}

TEST_CASE("wires, swaps, boxes, states, effects, and the empty diagram") {
  CHECK(max_abs_diff(evaluate(wire_diagram(3)), Tensor::identity(3)) == 0.0);

  Tensor e = evaluate(empty_diagram());
  CHECK(e.ndim() == 0);
  CHECK(e.flat(0) == Scalar(1.0));

  // swap: boundary [in0,in1,out0,out1] with out0 = in1, out1 = in0.
  Tensor s = evaluate(swap_diagram(2, 3));
  CHECK(s.shape() == std::vector<std::size_t>{2, 3, 3, 2});
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 3; ++b)
      for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t d = 0; d < 2; ++d)
          CHECK(s.at({a, b, c, d}) == ((b == c && a == d) ? Scalar(1) : Scalar(0)));

  Tensor v({3}, {Scalar(1), Scalar(0, 2), Scalar(-1)});
  CHECK(max_abs_diff(evaluate(state_node(v)), v) == 0.0);
  CHECK(max_abs_diff(evaluate(effect_node(v)), v) == 0.0);

  Rng rng(3);
  Tensor m = rng.gaussian_matrix(3, 3);
  CHECK(max_abs_diff(evaluate(box_node("B", m)), m.transpose({1, 0})) == 0.0);
  CHECK(max_abs_diff(eval_to_matrix(box_node("B", m)), m) == 0.0);

  CHECK_THROWS_AS(state_node(m), DimensionMismatch);
  CHECK_THROWS_AS(box_node("B", v), DimensionMismatch);
  CHECK_THROWS_AS(wire_diagram(0), DimensionMismatch);
}

TEST_CASE("sequential and parallel composition") {
  const Cfa& g = builtin_g3();
  // comul then mul is the bubble (identity for the special algebra G).
  Tensor bub = evaluate(seq(comul_node(g), mul_node(g)));
  CHECK(max_abs_diff(bub, thaw(frozen::g3_bubble).transpose({1, 0})) < 1e-14);

  for (const Cfa* a : builtin_algebras()) {
    CAPTURE(a->name);
    Tensor b = evaluate(seq(comul_node(*a), mul_node(*a)));
    DerivedMaps dm = derived_maps(*a);
    CHECK(max_abs_diff(b, dm.bubble.transpose({1, 0})) < 1e-14);
    // cap = counit after mul; cup = comul after unit.
    CHECK(max_abs_diff(evaluate(seq(mul_node(*a), counit_node(*a))), dm.cap) < 1e-14);
    CHECK(max_abs_diff(evaluate(seq(unit_node(*a), comul_node(*a))), dm.cup) < 1e-14);
  }

  // par of two states is their outer product.
  Tensor v0 = Tensor::basis_vector(3, 0);
  Tensor v1({3}, {Scalar(0.5), Scalar(0, 1), Scalar(2)});
  CHECK(max_abs_diff(evaluate(par(state_node(v0), state_node(v1))), outer(v0, v1)) == 0.0);

  // composition mismatch: mul yields one wire, mul needs two.
  CHECK_THROWS_AS(seq(mul_node(builtin_g3()), mul_node(builtin_g3())),
                  DimensionMismatch);
  // algebra dimension mismatch across seq.
  CHECK_THROWS_AS(seq(unit_node(builtin_ghz2()), counit_node(builtin_g3())),
                  DimensionMismatch);
}

TEST_CASE("associativity holds at the diagram level for every built-in") {
  for (const Cfa* a : builtin_algebras()) {
    CAPTURE(a->name);
    Diagram left = seq(par(mul_node(*a), wire_diagram(a->dim)), mul_node(*a));
    Diagram right = seq(par(wire_diagram(a->dim), mul_node(*a)), mul_node(*a));
    CHECK(max_abs_diff(evaluate(left), evaluate(right)) < 1e-14);
  }
}

TEST_CASE("permutation_wiring routes input s to output perm[s]") {
  std::vector<std::size_t> dims = {2, 3, 4};
  std::vector<std::size_t> perm = {2, 0, 1};
  Diagram w = permutation_wiring(dims, perm);
  CHECK(w.input_dims == dims);
  REQUIRE(w.output_dims.size() == 3);
  for (std::size_t s = 0; s < 3; ++s) CHECK(w.output_dims[perm[s]] == dims[s]);

  // Feed distinguishable basis states and look where they come out.
  Diagram fed = seq(par(par(state_node(Tensor::basis_vector(2, 1)),
                            state_node(Tensor::basis_vector(3, 2))),
                        state_node(Tensor::basis_vector(4, 3))),
                    w);
  Tensor out = evaluate(fed);
  // Output slot 0 carries input 1 (dim 3), slot 1 input 2 (dim 4), slot 2
  // input 0 (dim 2).
  REQUIRE(out.shape() == std::vector<std::size_t>{3, 4, 2});
  CHECK(out.at({2, 3, 1}) == Scalar(1.0));
  CHECK(out.max_abs() == 1.0);

  CHECK(permutation_wiring({}, {}).nodes.empty());
  CHECK_THROWS_AS(permutation_wiring({2, 2}, {0}), DimensionMismatch);
  CHECK_THROWS_AS(permutation_wiring({2, 2}, {0, 0}), DomainError);
}

TEST_CASE("DSL parses, renders, and round-trips") {
  DiagramRegistry reg = make_default_registry();

  Diagram d1 = parse_diagram("delta[W] ; mu[W]", reg);
  CHECK(to_dsl(d1) == "delta[W] ; mu[W]");
  CHECK(max_abs_diff(evaluate(d1), thaw(frozen::w3_bubble).transpose({1, 0})) < 1e-14);

  // Aliases resolve to canonical algebra names in the rendered text.
  Diagram d2 = parse_diagram("mu[G3]", reg);
  CHECK(to_dsl(d2) == "mu[G]");

  // Parentheses, par binding tighter than seq, swaps, kets and bras.
  std::string text =
      "(ket(|0>+(0-1i)|2>) * id(3)) ; mu[G] ; delta[I] ; (bra(2|1>) * id(3))";
  Diagram d3 = parse_diagram(text, reg);
  Diagram d4 = parse_diagram(to_dsl(d3), reg);
  CHECK(max_abs_diff(evaluate(d3), evaluate(d4)) == 0.0);
  CHECK(to_dsl(d3) == to_dsl(d4));

  // Kets keep their wire dimension even when trailing amplitudes vanish.
  Diagram d5 = parse_diagram("ket(|0>+0|2>)", reg);
  CHECK(evaluate(d5).shape() == std::vector<std::size_t>{3});
  Diagram d6 = parse_diagram(to_dsl(d5), reg);
  CHECK(evaluate(d6).shape() == std::vector<std::size_t>{3});
  CHECK(max_abs_diff(evaluate(d5), evaluate(d6)) == 0.0);

  // Empty input is the empty diagram.
  CHECK(parse_diagram("   ", reg).nodes.empty());

  // swap in text form.
  Diagram d7 = parse_diagram("swap(2,3)", reg);
  CHECK(max_abs_diff(evaluate(d7), evaluate(swap_diagram(2, 3))) == 0.0);
}

TEST_CASE("DSL rejects malformed input with positioned errors") {
  DiagramRegistry reg = make_default_registry();
  // Unknown algebra name.
  CHECK_THROWS_AS(parse_diagram("mu[Q]", reg), ParseError);
  // Composition mismatch inside a seq.
  CHECK_THROWS_AS(parse_diagram("eta[G] ; mu[G]", reg), ParseError);
  // Unexpected character.
  CHECK_THROWS_AS(parse_diagram("mu[G] $ mu[G]", reg), ParseError);
  // Ket digit out of range for the qubit algebra downstream.
  CHECK_THROWS_AS(parse_diagram("ket(|2>) ; eps[GHZ2]", reg), ParseError);
  // Unknown box.
  CHECK_THROWS_AS(parse_diagram("box(nope)", reg), ParseError);

  try {
    parse_diagram("mu[G] ; ???", reg);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position() == 8);
    CHECK(std::string(e.type()) == "ParseError");
  }
}

TEST_CASE("registered boxes are usable from the DSL") {
  DiagramRegistry reg = make_default_registry();
  Rng rng(5);
  Tensor a = rng.gaussian_matrix(3, 3);
  Tensor b = rng.gaussian_matrix(3, 3);
  reg.register_box("A", a);
  reg.register_box("B", b);
  Diagram d = parse_diagram("box(A) ; box(B)", reg);
  // Applying A then B is the matrix product B*A.
  CHECK(max_abs_diff(eval_to_matrix(d), mat_mul(b, a)) < 1e-13);
}

TEST_CASE("ket expressions parse and render canonically") {
  PureState s = parse_ket("|000>+|111>");
  CHECK(s.parties == 3);
  CHECK(s.dim == 2);
  CHECK(to_ket(s) == "|000>+|111>");

  PureState t = parse_ket("2|01> - (0.5-1i)|12>", 3);
  CHECK(t.parties == 2);
  CHECK(t.dim == 3);
  CHECK(t.amplitudes.at({0, 1}) == Scalar(2.0));
  CHECK(t.amplitudes.at({1, 2}) == Scalar(-0.5, 1.0));
  PureState t2 = parse_ket(to_ket(t), 3);
  CHECK(max_abs_diff(t.amplitudes, t2.amplitudes) == 0.0);

  CHECK_THROWS_AS(parse_ket("|0>+"), ParseError);
  CHECK_THROWS_AS(parse_ket("(1+2j|0>"), ParseError);
  CHECK_THROWS_AS(parse_ket("|01>+|0>"), ParseError);
  CHECK_THROWS_AS(parse_ket("|3>", 3), ParseError);
  CHECK_THROWS_AS(parse_ket(""), ParseError);
}

TEST_CASE("spider signatures count boundary legs and loops per component") {
  const Cfa& g = builtin_g3();
  SpiderSignature sig = spider_signature(seq(comul_node(g), mul_node(g)));
  REQUIRE(sig.components.size() == 1);
  CHECK(sig.m == 1);
  CHECK(sig.n == 1);
  CHECK(sig.loops == 1);

  // Two disconnected components: a lone mul and a lone unit.
  SpiderSignature two = spider_signature(par(mul_node(g), unit_node(g)));
  CHECK(two.components.size() == 2);
  CHECK(two.m == 2);
  CHECK(two.n == 2);
  CHECK(two.loops == 0);

  // Wiring nodes are elided: a swap between two units adds nothing.
  Diagram wired = seq(par(unit_node(g), unit_node(g)), swap_diagram(3, 3));
  CHECK(spider_signature(wired).components.size() == 2);
  CHECK(spider_signature(wired).loops == 0);
}

TEST_CASE("spider normal forms reproduce the elementary generators") {
  for (const Cfa* a : builtin_algebras()) {
    CAPTURE(a->name);
    CHECK(max_abs_diff(evaluate(spider_normal_form(1, 1, 0, *a)),
                       Tensor::identity(a->dim)) == 0.0);
    CHECK(max_abs_diff(evaluate(spider_normal_form(2, 1, 0, *a)),
                       evaluate(mul_node(*a))) < 1e-14);
    CHECK(max_abs_diff(evaluate(spider_normal_form(1, 2, 0, *a)),
                       evaluate(comul_node(*a))) < 1e-14);
    CHECK(max_abs_diff(evaluate(spider_normal_form(0, 1, 0, *a)), a->eta) < 1e-14);
    CHECK(max_abs_diff(evaluate(spider_normal_form(1, 0, 0, *a)), a->epsilon) < 1e-14);
    DerivedMaps dm = derived_maps(*a);
    CHECK(max_abs_diff(evaluate(spider_normal_form(1, 1, 1, *a)),
                       dm.bubble.transpose({1, 0})) < 1e-14);
    CHECK(std::abs(evaluate(spider_normal_form(0, 0, 1, *a)).flat(0) - dm.circle) <
          1e-12);
  }
}

TEST_CASE("normalize_fgraph rejects foreign nodes") {
  const Cfa& g = builtin_g3();
  const Cfa& w = builtin_w3();
  CHECK_THROWS_AS(normalize_fgraph(seq(comul_node(g), mul_node(w)), g), ForeignNode);
  CHECK_THROWS_AS(normalize_fgraph(box_node("B", Tensor::identity(3)), g), ForeignNode);
  CHECK_THROWS_AS(normalize_fgraph(state_node(Tensor::basis_vector(3, 0)), g),
                  ForeignNode);
  // Pure wiring is fine and normalizes to itself semantically.
  Diagram sw = swap_diagram(3, 3);
  CHECK(max_abs_diff(evaluate(normalize_fgraph(sw, g)), evaluate(sw)) == 0.0);
}

TEST_CASE("normalization preserves evaluation on random connected graphs") {
  for (const Cfa* a : builtin_algebras()) {
    CAPTURE(a->name);
    Rng rng(101 + a->dim);
    for (int trial = 0; trial < 60; ++trial) {
      Diagram d = testutil::random_fgraph(*a, rng, 8);
      Diagram nf = normalize_fgraph(d, *a);
      Tensor lhs = evaluate(d);
      Tensor rhs = evaluate(nf);
      REQUIRE(lhs.same_shape(rhs));
      CHECK(max_abs_diff(lhs, rhs) <= 1e-9);
      CHECK(sorted_components(nf) == sorted_components(d));
    }
  }
}

TEST_CASE("export_dot lists every node and boundary port") {
  const Cfa& g = builtin_g3();
  Diagram d = seq(par(state_node(Tensor::basis_vector(3, 1)), wire_diagram(3)),
                  mul_node(g));
  std::string dot = export_dot(d);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("mu[G]") != std::string::npos);
  CHECK(dot.find("in_0") != std::string::npos);
  CHECK(dot.find("out_0") != std::string::npos);
  // One arrow per wire.
  std::size_t arrows = 0, pos = 0;
  while ((pos = dot.find("->", pos)) != std::string::npos) { ++arrows; pos += 2; }
  CHECK(arrows == d.wires.size());
}

TEST_CASE("registry lookup honours aliases and rejects unknowns") {
  DiagramRegistry reg = make_default_registry();
  REQUIRE(reg.find_algebra("G") != nullptr);
  CHECK(reg.find_algebra("G3") == reg.find_algebra("G"));
  CHECK(reg.find_algebra("W3") == reg.find_algebra("W"));
  CHECK(reg.find_algebra("I3") == reg.find_algebra("I"));
  CHECK(reg.find_algebra("X") == nullptr);
  CHECK(reg.algebras.size() == 5);
}

}  // TEST_SUITE("diagram")
