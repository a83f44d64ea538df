#include "ftriad/json_io.hpp"

#include <utility>
#include <vector>

#include "ftriad/diagram.hpp"

namespace ftriad {

Json scalar_to_json(Scalar v) { return Json::array({v.real(), v.imag()}); }

Scalar scalar_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number()) {
    throw DomainError("complex values must be [re, im] number pairs");
  }
  return Scalar(j[0].get<double>(), j[1].get<double>());
}

Json tensor_to_json(const Tensor& t) {
  Json j;
  j["shape"] = t.shape();
  Json data = Json::array();
  for (std::size_t i = 0; i < t.size(); ++i) {
    data.push_back(scalar_to_json(t.flat(i)));
  }
  j["data"] = std::move(data);
  return j;
}

Tensor tensor_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("shape") || !j.contains("data")) {
    throw DomainError("tensor JSON requires \"shape\" and \"data\" fields");
  }
  std::vector<std::size_t> shape;
  for (const Json& d : j.at("shape")) {
    if (!d.is_number_unsigned() || d.get<std::size_t>() == 0) {
      throw DomainError("tensor shape entries must be positive integers");
    }
    shape.push_back(d.get<std::size_t>());
  }
  std::vector<Scalar> data;
  for (const Json& v : j.at("data")) data.push_back(scalar_from_json(v));
  std::size_t expect = 1;
  for (std::size_t d : shape) expect *= d;
  if (data.size() != expect) {
    throw DomainError("tensor data length does not match its shape");
  }
  return Tensor(std::move(shape), std::move(data));
}

Json cfa_to_json(const Cfa& f) {
  Json j;
  j["name"] = f.name;
  j["dim"] = f.dim;
  j["mu"] = tensor_to_json(f.mu);
  j["eta"] = tensor_to_json(f.eta);
  j["delta"] = tensor_to_json(f.delta);
  j["epsilon"] = tensor_to_json(f.epsilon);
  return j;
}

Cfa cfa_from_json(const Json& j) {
  if (!j.is_object()) throw DomainError("algebra JSON must be an object");
  for (const char* key : {"dim", "mu", "eta", "delta", "epsilon"}) {
    if (!j.contains(key)) {
      throw DomainError(std::string("algebra JSON missing field \"") + key +
                        "\"");
    }
  }
  Cfa f;
  f.name = j.value("name", std::string("custom"));
  f.dim = j.at("dim").get<std::size_t>();
  f.mu = tensor_from_json(j.at("mu"));
  f.eta = tensor_from_json(j.at("eta"));
  f.delta = tensor_from_json(j.at("delta"));
  f.epsilon = tensor_from_json(j.at("epsilon"));
  const std::vector<std::size_t> cube{f.dim, f.dim, f.dim};
  const std::vector<std::size_t> vec{f.dim};
  if (f.dim == 0 || f.mu.shape() != cube || f.delta.shape() != cube ||
      f.eta.shape() != vec || f.epsilon.shape() != vec) {
    throw DimensionMismatch("algebra tensors must have shapes (d,d,d) for "
                            "mu/delta and (d) for eta/epsilon");
  }
  return f;
}

Json state_to_json(const PureState& s) {
  Json j;
  j["parties"] = s.parties;
  j["dim"] = s.dim;
  if (s.dim <= 10) j["ket"] = to_ket(s);
  j["amplitudes"] = tensor_to_json(s.amplitudes);
  return j;
}

Json axiom_report_to_json(const AxiomReport& r) {
  Json laws = Json::array();
  for (std::size_t k = 0; k < kAxiomCount; ++k) {
    Json law;
    law["name"] = axiom_name(static_cast<AxiomLaw>(k));
    law["residual"] = r.residuals[k];
    law["passed"] = r.passed[k];
    laws.push_back(std::move(law));
  }
  Json j;
  j["laws"] = std::move(laws);
  j["max_residual"] = r.max_residual();
  j["all_passed"] = r.all_passed();
  return j;
}

Json algebra_class_to_json(const AlgebraClass& c) {
  Json j;
  j["class"] = algebra_class_name(c.label);
  j["bubble_rank"] = c.bubble_rank;
  Json res;
  res["special"] = c.special_residual;
  res["anti_special"] = c.anti_special_residual;
  res["intermediate"] = c.intermediate_residual;
  j["residuals"] = std::move(res);
  return j;
}

Json witness_to_json(const Witness& w) {
  Json j;
  j["xi"] = tensor_to_json(w.xi);
  j["phi"] = tensor_to_json(w.phi);
  return j;
}

Json class_label_to_json(const ClassLabel& l) {
  Json j;
  j["label"] = state_class_name(l.kind);
  if (l.kind == StateClassKind::NonFrobenius) {
    j["reason"] = non_frobenius_reason_name(l.reason);
  }
  if (l.witness.has_value()) j["witness"] = witness_to_json(*l.witness);
  if (l.algebra_class.has_value()) {
    j["algebra"] = algebra_class_to_json(*l.algebra_class);
  }
  return j;
}

Json synthesis_result_to_json(const SynthesisResult& r) {
  Json j;
  j["dsl"] = to_dsl(r.diagram);
  j["nodes"] = r.diagram.nodes.size();
  j["target"] = tensor_to_json(r.target);
  j["achieved"] = tensor_to_json(r.achieved);
  j["scalar"] = scalar_to_json(r.scalar);
  j["residual"] = r.residual;
  return j;
}

Json error_to_json(const std::string& type, const std::string& message) {
  Json j;
  j["schema"] = 1;
  Json e;
  e["type"] = type;
  e["message"] = message;
  j["error"] = std::move(e);
  return j;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace ftriad
