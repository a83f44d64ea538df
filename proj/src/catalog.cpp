#include <algorithm>
#include <cctype>

#include "ftriad/diagram.hpp"
#include "ftriad/entanglement.hpp"

namespace ftriad {

namespace {

// One catalog row: each term is one character per party, with '0'..'9' a
// basis vector and 'a'..'d' one of the parameter vectors.
struct RowSpec {
  std::size_t params = 0;
  std::size_t dim = 3;
  std::vector<std::string> terms;
};

const std::vector<std::pair<std::string, RowSpec>>& table() {
  static const std::vector<std::pair<std::string, RowSpec>> rows = {
      {"psi_0", {0, 3, {"000"}}},
      {"psi_1", {0, 3, {"000", "011"}}},
      {"psi_2", {0, 3, {"000", "011", "022"}}},
      {"psi_3", {0, 3, {"000", "101"}}},
      {"psi_4", {0, 3, {"000", "110"}}},
      {"psi_5", {0, 3, {"000", "111"}}},
      {"psi_6", {0, 3, {"000", "011", "101"}}},
      {"psi_7", {0, 3, {"000", "011", "112"}}},
      {"psi_8", {0, 3, {"000", "011", "120"}}},
      {"psi_9", {0, 3, {"000", "101", "202"}}},
      {"psi_10", {0, 3, {"000", "111", "202"}}},
      {"psi_11", {0, 3, {"000", "111", "201"}}},
      {"psi_12", {0, 3, {"000", "011", "101", "112"}}},
      {"psi_13", {0, 3, {"000", "011", "112", "120"}}},
      {"psi_14", {0, 3, {"000", "011", "120", "101"}}},
      {"psi_15", {0, 3, {"000", "011", "120", "102"}}},
      {"psi_16", {0, 3, {"000", "011", "022", "101"}}},
      {"psi_17", {0, 3, {"000", "011", "022", "101", "112"}}},
      {"psi_18", {0, 3, {"000", "011", "022", "112", "120"}}},
      {"psi_19", {0, 3, {"000", "011", "022", "120", "101"}}},
      {"psi_20", {0, 3, {"000", "011", "122"}}},
      {"psi_21", {0, 3, {"000", "110", "220"}}},
      {"psi_22", {0, 3, {"000", "111", "220"}}},
      {"psi_23", {0, 3, {"000", "011", "101", "112", "210", "202"}}},
      {"psi_24", {0, 3, {"000", "011", "120", "101", "221", "210"}}},
      {"G", {0, 3, {"000", "111", "222"}}},
      {"W", {0, 3, {"002", "011", "020", "101", "110", "200"}}},
      {"I", {0, 3, {"001", "010", "100", "222"}}},
      {"s2", {0, 3, {"000", "012", "021", "102", "120", "201", "210"}}},
      {"s3", {0, 3, {"012", "021", "102", "120", "201", "210"}}},
      {"GHZ2", {0, 2, {"000", "111"}}},
      {"W2", {0, 2, {"001", "010", "100"}}},
      {"pi", {4, 3, {"000", "011", "1ab", "2cd"}}},
      {"phi0", {0, 3, {"000", "011", "022", "101", "202"}}},
      {"phi1", {0, 3, {"000", "011", "022", "110", "220"}}},
      {"varphi1", {0, 3, {"000", "011", "022", "101", "212"}}},
      {"phi2", {2, 3, {"000", "011", "101", "112", "2ab"}}},
      {"varphi2", {2, 3, {"000", "011", "112", "120", "2ab"}}},
      {"phi3", {2, 3, {"000", "011", "120", "101", "2ab"}}},
      {"phi4", {0, 3, {"000", "011", "101", "112", "202", "221"}}},
      {"phi5", {0, 3, {"000", "011", "101", "112", "221", "210"}}},
      {"s0", {0, 3, {"000", "011", "112", "120", "202", "221"}}},
      {"phi6", {0, 3, {"000", "011", "112", "120", "221", "210"}}},
      {"phi7", {0, 3, {"000", "011", "022", "101", "112", "202", "221"}}},
      {"phi8", {0, 3, {"000", "011", "022", "101", "112", "210", "202"}}},
      {"s1", {0, 3, {"000", "011", "022", "101", "112", "221", "210"}}},
      {"w0", {0, 3, {"000", "011", "022", "101", "112", "202"}}},
      {"varphi3", {0, 3, {"000", "011", "022", "101", "112", "220"}}},
      {"phi9", {0, 3, {"000", "011", "022", "101", "112", "221"}}},
  };
  return rows;
}

std::string describe(const RowSpec& spec) {
  std::string out;
  for (std::size_t t = 0; t < spec.terms.size(); ++t) {
    if (t) out += "+";
    out += "|" + spec.terms[t] + ">";
  }
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

Tensor param_vector(const std::string& text) {
  std::string t = trim(text);
  if (t.size() == 1 && t[0] >= '0' && t[0] <= '9') t = "|" + t + ">";
  PureState p = parse_ket(t, 3);
  if (p.parties != 1) {
    throw DomainError("catalog parameters must be single-party kets");
  }
  return p.amplitudes;
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> out;
    for (const auto& [name, spec] : table()) {
      CatalogEntry e;
      e.name = name;
      e.parameter_count = spec.params;
      e.description = describe(spec);
      out.push_back(std::move(e));
    }
    return out;
  }();
  return entries;
}

PureState catalog(const std::string& name,
                  const std::vector<std::string>& params) {
  const RowSpec* spec = nullptr;
  for (const auto& [n, s] : table()) {
    if (n == name) {
      spec = &s;
      break;
    }
  }
  if (spec == nullptr) {
    throw UnknownName("unknown catalog entry '" + name + "'");
  }
  if (params.size() != spec->params) {
    throw DomainError("catalog entry '" + name + "' takes " +
                      std::to_string(spec->params) + " parameter(s), got " +
                      std::to_string(params.size()));
  }
  std::vector<Tensor> pvecs;
  pvecs.reserve(params.size());
  for (const std::string& p : params) pvecs.push_back(param_vector(p));

  std::size_t d = spec->dim;
  std::size_t parties = spec->terms.front().size();
  std::vector<std::size_t> shape(parties, d);
  Tensor amp = Tensor::zeros(shape);
  for (const std::string& term : spec->terms) {
    Tensor t = Tensor::scalar(Scalar(1.0));
    for (char c : term) {
      Tensor v;
      if (c >= '0' && c <= '9') {
        v = Tensor::basis_vector(d, static_cast<std::size_t>(c - '0'));
      } else {
        v = pvecs.at(static_cast<std::size_t>(c - 'a'));
      }
      t = outer(t, v);
    }
    amp = amp + t;
  }
  return make_state(std::move(amp));
}

}  // namespace ftriad
