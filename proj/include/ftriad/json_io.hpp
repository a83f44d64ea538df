#ifndef FTRIAD_JSON_IO_HPP
#define FTRIAD_JSON_IO_HPP

#include <string>

#include "json.hpp"

#include "ftriad/algebra.hpp"
#include "ftriad/entanglement.hpp"
#include "ftriad/errors.hpp"
#include "ftriad/state.hpp"
#include "ftriad/synthesis.hpp"
#include "ftriad/tensor.hpp"

namespace ftriad {

// All CLI output uses insertion-ordered JSON so reruns are byte-identical.
using Json = nlohmann::ordered_json;

// Complex numbers serialize as [re, im] pairs throughout.
Json scalar_to_json(Scalar v);
Scalar scalar_from_json(const Json& j);

// {"shape": [...], "data": [[re, im], ...]} with row-major data.
Json tensor_to_json(const Tensor& t);
Tensor tensor_from_json(const Json& j);

// {"name", "dim", "mu", "eta", "delta", "epsilon"}; `verified` is not
// serialized — loaders re-run check_axioms.
Json cfa_to_json(const Cfa& f);
Cfa cfa_from_json(const Json& j);

Json state_to_json(const PureState& s);

Json axiom_report_to_json(const AxiomReport& r);
Json algebra_class_to_json(const AlgebraClass& c);
Json witness_to_json(const Witness& w);
Json class_label_to_json(const ClassLabel& l);
Json synthesis_result_to_json(const SynthesisResult& r);

// {"schema": 1, "error": {"type", "message"}}
Json error_to_json(const std::string& type, const std::string& message);

// Canonical dump: two-space indentation plus trailing newline.
std::string dump_json(const Json& j);

}  // namespace ftriad

#endif  // FTRIAD_JSON_IO_HPP
