#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ftriad/algebra.hpp"
#include "ftriad/state.hpp"
#include "ftriad/tensor.hpp"

namespace ftriad {

// Generator kinds.  Port arities are fixed per kind:
//   Mul 2/1, Unit 0/1, Comul 1/2, Counit 1/0, Identity 1/1, Swap 2/2,
//   State 0/1, Effect 1/0, Box 1/1.
enum class GenKind { Mul, Unit, Comul, Counit, Identity, Swap, State, Effect, Box };

struct Generator {
  GenKind kind = GenKind::Identity;
  std::string algebra;  // canonical algebra name for Mul/Unit/Comul/Counit
  std::size_t dim = 0;  // wire dimension (Swap: first wire)
  std::size_t dim2 = 0; // Swap: second wire dimension
  Tensor payload;       // node tensor, indices ordered [outputs..., inputs...]
  std::string label;    // Box name

  std::size_t input_count() const;
  std::size_t output_count() const;
  std::vector<std::size_t> input_dims() const;
  std::vector<std::size_t> output_dims() const;
};

// One endpoint of a wire: either a boundary slot or a node port.
struct Endpoint {
  enum class Kind { BoundaryIn, BoundaryOut, NodeIn, NodeOut };
  Kind kind = Kind::BoundaryIn;
  std::size_t node = 0;  // node index for NodeIn/NodeOut
  std::size_t port = 0;  // port index, or boundary slot

  bool operator==(const Endpoint& o) const {
    return kind == o.kind && node == o.node && port == o.port;
  }
};

// Directed wire from a source (BoundaryIn or NodeOut) to a sink (BoundaryOut
// or NodeIn).
struct Wire {
  Endpoint from;
  Endpoint to;
  std::size_t dim = 0;
};

// Expression tree remembered by every diagram built through the library
// combinators; used to render the text DSL.
struct DslExpr {
  enum class Kind { Seq, Par, Mu, Eta, Delta, Eps, Id, Swap, Ket, Bra, Box, Empty };
  Kind kind = Kind::Empty;
  std::vector<std::shared_ptr<const DslExpr>> children;  // Seq/Par
  std::string name;  // algebra or box name
  std::size_t dim = 0, dim2 = 0;
  Tensor payload;  // ket/bra vector
};

// String-diagram IR.  Every port of every node is connected exactly once,
// wires carry dimensions, and the structure is acyclic from inputs to
// outputs.  Diagrams are built only through the combinators below and are
// immutable afterwards.
struct Diagram {
  std::vector<Generator> nodes;
  std::vector<Wire> wires;
  std::vector<std::size_t> input_dims;
  std::vector<std::size_t> output_dims;
  std::shared_ptr<const DslExpr> expr;
};

// ---- construction combinators ----
Diagram empty_diagram();
Diagram wire_diagram(std::size_t dim);
Diagram swap_diagram(std::size_t d0, std::size_t d1);
Diagram mul_node(const Cfa& a);
Diagram unit_node(const Cfa& a);
Diagram comul_node(const Cfa& a);
Diagram counit_node(const Cfa& a);
Diagram state_node(const Tensor& v);   // one output wire
Diagram effect_node(const Tensor& v);  // one input wire
Diagram box_node(const std::string& label, const Tensor& m);  // m[out,in]

// Sequential composition: g after f.  f's outputs must match g's inputs.
Diagram seq(const Diagram& f, const Diagram& g);
// Parallel composition: f beside g.
Diagram par(const Diagram& f, const Diagram& g);

// Wiring-only diagram routing input slot s to output slot perm[s], built
// from layers of adjacent swaps.  dims are the input wire dimensions.
Diagram permutation_wiring(const std::vector<std::size_t>& dims,
                           const std::vector<std::size_t>& perm);

// ---- registry for the text DSL ----
struct DiagramRegistry {
  std::map<std::string, Cfa> algebras;         // canonical name -> CFA
  std::map<std::string, std::string> aliases;  // alias -> canonical name
  std::map<std::string, Tensor> boxes;         // box name -> matrix [out,in]

  void register_algebra(const Cfa& cfa,
                        const std::vector<std::string>& extra_aliases = {});
  void register_box(const std::string& name, const Tensor& m);
  // Resolves canonical names and aliases; nullptr when unknown.
  const Cfa* find_algebra(const std::string& name) const;
};

// Registry preloaded with the built-in algebras (G, W, I, GHZ2, W2 plus
// aliases G3, W3, I3) and no boxes.
DiagramRegistry make_default_registry();

// ---- text formats ----
// Diagram DSL:  term := seq; seq := par (";" par)*; par := atom ("*" atom)*;
// atom := mu[A] | eta[A] | delta[A] | eps[A] | id(d) | swap(d,d)
//       | ket(expr) | bra(expr) | box(name) | "(" term ")".
// Whitespace-insensitive; ";" binds looser than "*"; empty input denotes the
// empty diagram.
Diagram parse_diagram(const std::string& text, const DiagramRegistry& reg);
std::string to_dsl(const Diagram& d);
std::string export_dot(const Diagram& d);

// Ket expressions: sum of coefficient-ket terms; coefficient := real |
// "(a+bi)" | "(a-bi)"; ket := "|" digits ">".  dim 0 infers the local
// dimension from the largest digit.
PureState parse_ket(const std::string& text, std::size_t dim = 0);
std::string to_ket(const PureState& s);
// Renders one complex amplitude the way to_ket does (shortest round-trip).
std::string format_ket_coefficient(Scalar c, bool leading);

// ---- evaluation ----
// Contracts all node tensors along wires.  Result indices: one per boundary
// input (in order) followed by one per boundary output.  The empty diagram
// evaluates to scalar 1.
Tensor evaluate(const Diagram& d);

// Evaluation reshaped as a matrix mapping inputs to outputs:
// rows = output multi-index, cols = input multi-index.
Tensor eval_to_matrix(const Diagram& d);

// ---- spider machinery ----
struct SpiderComponent {
  std::size_t m = 0;      // boundary inputs touching the component
  std::size_t n = 0;      // boundary outputs
  std::size_t loops = 0;  // E - V + 1 (wiring nodes elided)
};

struct SpiderSignature {
  std::size_t m = 0, n = 0, loops = 0;  // totals over components
  std::vector<SpiderComponent> components;
};

SpiderSignature spider_signature(const Diagram& d);

// Canonical connected F-graph with the given signature: left-combed
// multiplication tree (unit when m = 0), `loops` serial bubbles, left-combed
// comultiplication tree (counit when n = 0).
Diagram spider_normal_form(std::size_t m, std::size_t n, std::size_t loops,
                           const Cfa& algebra);

// Replaces every connected component by the spider normal form of its
// signature, preserving boundary order.  Throws ForeignNode when the diagram
// contains boxes, states, effects, or generators of a different algebra.
Diagram normalize_fgraph(const Diagram& d, const Cfa& algebra);

}  // namespace ftriad
