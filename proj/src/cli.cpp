#include "ftriad/cli.hpp"

#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "ftriad/algebra.hpp"
#include "ftriad/diagram.hpp"
#include "ftriad/entanglement.hpp"
#include "ftriad/errors.hpp"
#include "ftriad/json_io.hpp"
#include "ftriad/synthesis.hpp"

namespace ftriad {

namespace {

struct CliConfig {
  double tol = -1.0;  // negative: keep library defaults
  std::uint64_t seed = 20260825ULL;
  std::size_t budget = 320;
  std::string format;  // empty: per-command default
};

ToleranceConfig make_tol(const CliConfig& cfg) {
  ToleranceConfig t;
  if (cfg.tol >= 0.0) {
    t.atol = cfg.tol;
    t.rtol = cfg.tol;
  }
  return t;
}

std::string pick_format(const CliConfig& cfg, const char* fallback) {
  return cfg.format.empty() ? fallback : cfg.format;
}

void require_not_dot(const std::string& fmt) {
  if (fmt == "dot") {
    throw DomainError("this command has no diagram to render as dot");
  }
}

void emit(const Json& j) { std::cout << dump_json(j); }

std::string read_input(const std::string& arg) {
  if (arg == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(arg);
  if (!in) throw DomainError("cannot read file: " + arg);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Accepts a built-in algebra name or a path to (or '-' for) an algebra JSON
// document with mu/eta/delta/epsilon tensors.
Cfa resolve_algebra(const std::string& arg) {
  if (const Cfa* builtin = find_builtin_algebra(arg)) return *builtin;
  const std::string text = read_input(arg);
  const Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw DomainError("'" + arg +
                      "' is neither a built-in algebra name nor a JSON "
                      "algebra document");
  }
  return cfa_from_json(j);
}

// Accepts a catalog entry name, a ket expression, or '-' to read a ket
// expression from stdin.  Kets are parsed as qutrits.
PureState resolve_state(const std::string& arg) {
  std::string text = arg;
  if (arg == "-") {
    text = read_input(arg);
  } else if (text.find('|') == std::string::npos) {
    try {
      return catalog(text);
    } catch (const UnknownName&) {
      // not a catalog entry: report it as a ket parse problem below
    }
  }
  return parse_ket(text, 3);
}

double parse_double_arg(const std::string& s) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw DomainError("invalid number: '" + s + "'");
  }
  return v;
}

// Matrix entries: "1.5", "-2", "3i", "1+2i", "2.5-0.5i" ("j" also accepted).
Scalar parse_complex_arg(const std::string& raw) {
  std::string s;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw DomainError("empty matrix entry");
  if (s.back() == 'i' || s.back() == 'j') {
    s.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
      if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
        split = k;
        break;
      }
    }
    std::string re = split == std::string::npos ? "" : s.substr(0, split);
    std::string im = split == std::string::npos ? s : s.substr(split);
    if (im.empty() || im == "+") im = "1";
    if (im == "-") im = "-1";
    const double rv = re.empty() ? 0.0 : parse_double_arg(re);
    return Scalar(rv, parse_double_arg(im));
  }
  return Scalar(parse_double_arg(s), 0.0);
}

const Cfa& infer_algebra(const Diagram& d) {
  for (const Generator& g : d.nodes) {
    switch (g.kind) {
      case GenKind::Mul:
      case GenKind::Unit:
      case GenKind::Comul:
      case GenKind::Counit: {
        const Cfa* found = find_builtin_algebra(g.algebra);
        if (found) return *found;
        throw DomainError("cannot infer algebra '" + g.algebra +
                          "'; pass --algebra");
      }
      default:
        break;
    }
  }
  // Pure wiring normalizes identically under any algebra.
  return builtin_g3();
}

// ---- subcommand bodies ----

void cmd_eval(const CliConfig& cfg, const std::string& input) {
  const std::string fmt = pick_format(cfg, "json");
  const DiagramRegistry reg = make_default_registry();
  const Diagram d = parse_diagram(read_input(input), reg);
  if (fmt == "dot") {
    std::cout << export_dot(d);
    return;
  }
  const Tensor t = evaluate(d);
  if (fmt == "text") {
    try {
      std::cout << to_ket(make_state(t)) << "\n";
      return;
    } catch (const Error&) {
      // mixed dims, scalar or zero tensor: fall back to JSON below
    }
  }
  Json j;
  j["schema"] = 1;
  j["inputs"] = d.input_dims;
  j["outputs"] = d.output_dims;
  j["tensor"] = tensor_to_json(t);
  emit(j);
}

void cmd_axioms(const CliConfig& cfg, const std::string& arg) {
  const std::string fmt = pick_format(cfg, "json");
  require_not_dot(fmt);
  const Cfa f = resolve_algebra(arg);
  const AxiomReport report = check_axioms(f, make_tol(cfg));
  if (fmt == "text") {
    for (std::size_t k = 0; k < kAxiomCount; ++k) {
      std::cout << axiom_name(static_cast<AxiomLaw>(k)) << ": residual="
                << report.residuals[k]
                << (report.passed[k] ? " pass" : " FAIL") << "\n";
    }
    std::cout << (report.all_passed() ? "all laws pass" : "some laws fail")
              << "\n";
    return;
  }
  Json j;
  j["schema"] = 1;
  j["algebra"] = f.name;
  const Json rep = axiom_report_to_json(report);
  for (auto it = rep.begin(); it != rep.end(); ++it) j[it.key()] = it.value();
  emit(j);
}

void cmd_classify_algebra(const CliConfig& cfg, const std::string& arg) {
  const std::string fmt = pick_format(cfg, "json");
  require_not_dot(fmt);
  Cfa f = resolve_algebra(arg);
  const ToleranceConfig tol = make_tol(cfg);
  const AxiomReport report = check_axioms(f, tol);
  f.verified = report.all_passed();
  const AlgebraClass cls = classify_algebra(f, tol);  // may throw Unverified
  if (fmt == "text") {
    std::cout << algebra_class_name(cls.label) << " (bubble rank "
              << cls.bubble_rank << ")\n";
    return;
  }
  Json j;
  j["schema"] = 1;
  j["algebra"] = f.name;
  j["axioms"] = axiom_report_to_json(report);
  const Json cj = algebra_class_to_json(cls);
  for (auto it = cj.begin(); it != cj.end(); ++it) j[it.key()] = it.value();
  emit(j);
}

void cmd_classify_state(const CliConfig& cfg, const std::string& arg) {
  const std::string fmt = pick_format(cfg, "json");
  require_not_dot(fmt);
  const PureState s = resolve_state(arg);
  const ClassLabel label = classify_state(s, cfg.budget, cfg.seed);
  if (fmt == "text") {
    std::cout << state_class_name(label.kind);
    if (label.kind == StateClassKind::NonFrobenius) {
      std::cout << "(" << non_frobenius_reason_name(label.reason) << ")";
    }
    std::cout << "\n";
    return;
  }
  Json j;
  j["schema"] = 1;
  j["input"] = arg;
  j["state"] = state_to_json(s);
  const Json lj = class_label_to_json(label);
  for (auto it = lj.begin(); it != lj.end(); ++it) j[it.key()] = it.value();
  emit(j);
}

void cmd_normalize(const CliConfig& cfg, const std::string& input,
                   const std::string& algebra_arg) {
  const std::string fmt = pick_format(cfg, "json");
  const DiagramRegistry reg = make_default_registry();
  const Diagram d = parse_diagram(read_input(input), reg);
  const Cfa alg =
      algebra_arg.empty() ? infer_algebra(d) : resolve_algebra(algebra_arg);
  const Diagram nf = normalize_fgraph(d, alg);
  if (fmt == "dot") {
    std::cout << export_dot(nf);
    return;
  }
  if (fmt == "text") {
    std::cout << to_dsl(nf) << "\n";
    return;
  }
  Json j;
  j["schema"] = 1;
  j["algebra"] = alg.name;
  j["input_dsl"] = to_dsl(d);
  j["normalized_dsl"] = to_dsl(nf);
  emit(j);
}

void emit_synthesis(const CliConfig& cfg, const SynthesisResult& r) {
  const std::string fmt = pick_format(cfg, "json");
  if (fmt == "dot") {
    std::cout << export_dot(r.diagram);
    return;
  }
  if (fmt == "text") {
    std::cout << to_dsl(r.diagram) << "\n"
              << "scalar=(" << r.scalar.real() << "," << r.scalar.imag()
              << ") residual=" << r.residual << "\n";
    return;
  }
  Json j;
  j["schema"] = 1;
  const Json rj = synthesis_result_to_json(r);
  for (auto it = rj.begin(); it != rj.end(); ++it) j[it.key()] = it.value();
  emit(j);
}

void cmd_synth_matrix(const CliConfig& cfg,
                      const std::vector<std::string>& entries) {
  std::vector<Scalar> data;
  data.reserve(9);
  for (const std::string& e : entries) data.push_back(parse_complex_arg(e));
  const Tensor f({3, 3}, std::move(data));
  emit_synthesis(cfg, matrix_to_diagram(f, make_default_trio(), make_tol(cfg)));
}

void cmd_synth_state(const CliConfig& cfg, const std::string& ket) {
  const PureState s = parse_ket(ket, 3);
  emit_synthesis(cfg, state_to_diagram(s, make_default_trio(), make_tol(cfg),
                                       cfg.seed));
}

void cmd_catalog_list(const CliConfig& cfg) {
  const std::string fmt = pick_format(cfg, "json");
  require_not_dot(fmt);
  if (fmt == "text") {
    for (const CatalogEntry& e : catalog_entries()) {
      std::cout << e.name;
      if (e.parameter_count > 0) {
        std::cout << " [" << e.parameter_count << " params]";
      }
      std::cout << "  " << e.description << "\n";
    }
    return;
  }
  Json entries = Json::array();
  for (const CatalogEntry& e : catalog_entries()) {
    Json ej;
    ej["name"] = e.name;
    ej["parameters"] = e.parameter_count;
    ej["description"] = e.description;
    entries.push_back(std::move(ej));
  }
  Json j;
  j["schema"] = 1;
  j["entries"] = std::move(entries);
  emit(j);
}

void cmd_catalog_show(const CliConfig& cfg, const std::string& name,
                      const std::vector<std::string>& params) {
  const std::string fmt = pick_format(cfg, "text");
  require_not_dot(fmt);
  const PureState s = catalog(name, params);
  if (fmt == "text") {
    std::cout << to_ket(s) << "\n";
    return;
  }
  Json j;
  j["schema"] = 1;
  j["name"] = name;
  j["state"] = state_to_json(s);
  emit(j);
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CliConfig cfg;
  CLI::App app{
      "ftriad: commutative Frobenius algebras, string diagrams, qutrit "
      "SLOCC classification and diagram synthesis"};
  app.require_subcommand(1);
  app.add_option("--tol", cfg.tol,
                 "absolute/relative tolerance override (default: library "
                 "defaults)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--seed", cfg.seed, "RNG seed (default 20260825)")
      ->envname("FTRIAD_SEED");
  app.add_option("--budget", cfg.budget,
                 "candidate budget for classify-state (default 320)")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", cfg.format, "output format: json, text or dot")
      ->check(CLI::IsMember({"json", "text", "dot"}));

  CLI::App* c_eval = app.add_subcommand(
      "eval", "Evaluate a diagram from a DSL file ('-' for stdin)");
  std::string eval_input;
  c_eval->add_option("input", eval_input, "diagram file or '-'")->required();

  CLI::App* c_axioms = app.add_subcommand(
      "axioms", "Check the seven CFA laws of an algebra (name or JSON file)");
  std::string axioms_arg;
  c_axioms->add_option("algebra", axioms_arg, "built-in name or JSON file")
      ->required();

  CLI::App* c_classify_algebra = app.add_subcommand(
      "classify-algebra",
      "Verify and classify an algebra as Special / AntiSpecial / "
      "IntermediateSpecial / Other");
  std::string ca_arg;
  c_classify_algebra
      ->add_option("algebra", ca_arg, "built-in name or JSON file")
      ->required();

  CLI::App* c_classify_state = app.add_subcommand(
      "classify-state",
      "Classify a tripartite qutrit state (ket expression, catalog name, or "
      "'-')");
  std::string cs_arg;
  c_classify_state->add_option("state", cs_arg, "ket, catalog name, or '-'")
      ->required();

  CLI::App* c_normalize = app.add_subcommand(
      "normalize", "Spider normal form of a single-algebra diagram");
  std::string norm_input;
  std::string norm_algebra;
  c_normalize->add_option("input", norm_input, "diagram file or '-'")
      ->required();
  c_normalize->add_option("--algebra", norm_algebra,
                          "algebra name (default: inferred from the diagram)");

  CLI::App* c_synth_matrix = app.add_subcommand(
      "synth-matrix", "Realize an invertible 3x3 matrix as a diagram");
  std::vector<std::string> sm_entries;
  c_synth_matrix
      ->add_option("entries", sm_entries,
                   "9 complex entries, row-major (e.g. 1 0 2+1i ...)")
      ->expected(9);

  CLI::App* c_synth_state = app.add_subcommand(
      "synth-state", "Realize an N-partite qutrit state as a diagram");
  std::string ss_ket;
  c_synth_state->add_option("ket", ss_ket, "ket expression, e.g. |000>+|111>")
      ->required();

  CLI::App* c_catalog =
      app.add_subcommand("catalog", "Named states from the literature");
  c_catalog->require_subcommand(1);
  CLI::App* c_list = c_catalog->add_subcommand("list", "List catalog entries");
  CLI::App* c_show =
      c_catalog->add_subcommand("show", "Print one catalog state");
  std::string show_name;
  std::vector<std::string> show_params;
  c_show->add_option("name", show_name, "catalog entry name")->required();
  c_show->add_option("params", show_params,
                     "parameter kets (single-party, e.g. '|0>+2|2>' or '1')");

  for (CLI::App* sub : {c_eval, c_axioms, c_classify_algebra,
                        c_classify_state, c_normalize, c_synth_matrix,
                        c_synth_state, c_catalog, c_list, c_show}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << dump_json(error_to_json("UsageError", e.what()));
    std::cerr << app.help();
    return 2;
  }

  try {
    if (c_eval->parsed()) {
      cmd_eval(cfg, eval_input);
    } else if (c_axioms->parsed()) {
      cmd_axioms(cfg, axioms_arg);
    } else if (c_classify_algebra->parsed()) {
      cmd_classify_algebra(cfg, ca_arg);
    } else if (c_classify_state->parsed()) {
      cmd_classify_state(cfg, cs_arg);
    } else if (c_normalize->parsed()) {
      cmd_normalize(cfg, norm_input, norm_algebra);
    } else if (c_synth_matrix->parsed()) {
      cmd_synth_matrix(cfg, sm_entries);
    } else if (c_synth_state->parsed()) {
      cmd_synth_state(cfg, ss_ket);
    } else if (c_catalog->parsed()) {
      if (c_list->parsed()) {
        cmd_catalog_list(cfg);
      } else {
        cmd_catalog_show(cfg, show_name, show_params);
      }
    }
    return 0;
  } catch (const Error& e) {
    std::cout << dump_json(error_to_json(e.type(), e.what()));
    return 1;
  } catch (const std::exception& e) {
    std::cout << dump_json(error_to_json("InternalError", e.what()));
    return 1;
  }
}

}  // namespace ftriad
