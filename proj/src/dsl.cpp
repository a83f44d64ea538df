#include <cctype>
#include <charconv>
#include <limits>
#include <map>

#include "ftriad/diagram.hpp"
#include "ftriad/state.hpp"

namespace ftriad {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

std::string fmt_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_real(const std::string& s, std::size_t& i, std::size_t base) {
  double value = 0.0;
  auto res = std::from_chars(s.data() + i, s.data() + s.size(), value);
  if (res.ec != std::errc()) {
    throw ParseError("malformed number", base + i);
  }
  i = static_cast<std::size_t>(res.ptr - s.data());
  return value;
}

// ---------------------------------------------------------------------------
// Ket expressions
// ---------------------------------------------------------------------------

struct KetTerms {
  std::map<std::vector<std::size_t>, Scalar> terms;
  std::size_t parties = 0;
  std::size_t maxdigit = 0;
  std::size_t maxdigit_pos = 0;
};

KetTerms parse_ket_terms(const std::string& s, std::size_t base) {
  KetTerms out;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && is_space(s[i])) ++i;
  };
  skip();
  if (i >= s.size()) throw ParseError("empty ket expression", base + i);
  bool first = true;
  while (true) {
    skip();
    if (i >= s.size()) break;
    double sign = 1.0;
    if (s[i] == '+') {
      ++i;
    } else if (s[i] == '-') {
      sign = -1.0;
      ++i;
    } else if (!first) {
      throw ParseError("expected '+' or '-' between ket terms", base + i);
    }
    skip();
    Scalar coeff(1.0, 0.0);
    if (i < s.size() && s[i] == '(') {
      ++i;
      skip();
      double re = parse_real(s, i, base);
      skip();
      if (i >= s.size() || (s[i] != '+' && s[i] != '-')) {
        throw ParseError("malformed complex coefficient: expected '+' or '-'",
                         base + i);
      }
      double isign = s[i] == '-' ? -1.0 : 1.0;
      ++i;
      skip();
      double im = parse_real(s, i, base);
      skip();
      if (i >= s.size() || s[i] != 'i') {
        throw ParseError("malformed complex coefficient: expected 'i'",
                         base + i);
      }
      ++i;
      skip();
      if (i >= s.size() || s[i] != ')') {
        throw ParseError("malformed complex coefficient: expected ')'",
                         base + i);
      }
      ++i;
      coeff = Scalar(re, isign * im);
    } else if (i < s.size() && (is_digit(s[i]) || s[i] == '.')) {
      coeff = Scalar(parse_real(s, i, base), 0.0);
    }
    skip();
    if (i >= s.size() || s[i] != '|') {
      throw ParseError("expected '|' to open a ket", base + i);
    }
    std::size_t ket_pos = i;
    ++i;
    std::vector<std::size_t> digits;
    while (i < s.size() && is_digit(s[i])) {
      std::size_t dgt = static_cast<std::size_t>(s[i] - '0');
      if (dgt >= out.maxdigit) {
        out.maxdigit = dgt;
        out.maxdigit_pos = base + i;
      }
      digits.push_back(dgt);
      ++i;
    }
    if (digits.empty()) {
      throw ParseError("ket must contain at least one digit", base + ket_pos);
    }
    if (i >= s.size() || s[i] != '>') {
      throw ParseError("expected '>' to close a ket", base + i);
    }
    ++i;
    if (out.parties == 0) {
      out.parties = digits.size();
    } else if (digits.size() != out.parties) {
      throw ParseError("inconsistent party counts in ket expression",
                       base + ket_pos);
    }
    out.terms[digits] += sign * coeff;
    first = false;
  }
  return out;
}

}  // namespace

PureState parse_ket(const std::string& text, std::size_t dim) {
  KetTerms kt = parse_ket_terms(text, 0);
  std::size_t d = dim == 0 ? kt.maxdigit + 1 : dim;
  if (kt.maxdigit >= d) {
    throw ParseError(
        "digit out of range for dimension " + std::to_string(d),
        kt.maxdigit_pos);
  }
  std::vector<std::size_t> shape(kt.parties, d);
  Tensor amp = Tensor::zeros(shape);
  for (const auto& [digits, c] : kt.terms) amp.set(digits, c);
  return make_state(std::move(amp));
}

std::string format_ket_coefficient(Scalar c, bool leading) {
  std::string plus = leading ? "" : "+";
  if (c.imag() == 0.0) {
    double re = c.real();
    if (re == 1.0) return plus;
    if (re == -1.0) return "-";
    if (re < 0.0) return "-" + fmt_double(-re);
    return plus + fmt_double(re);
  }
  return plus + "(" + fmt_double(c.real()) + (c.imag() < 0.0 ? "-" : "+") +
         fmt_double(std::abs(c.imag())) + "i)";
}

std::string to_ket(const PureState& s) {
  if (s.dim > 10) {
    throw DomainError("ket rendering uses one digit per party (dim <= 10)");
  }
  std::string out;
  bool leading = true;
  for (std::size_t f = 0; f < s.amplitudes.size(); ++f) {
    Scalar c = s.amplitudes.flat(f);
    if (c == Scalar(0.0, 0.0)) continue;
    out += format_ket_coefficient(c, leading);
    out += '|';
    for (std::size_t dgt : s.amplitudes.unflatten(f)) {
      out += static_cast<char>('0' + dgt);
    }
    out += '>';
    leading = false;
  }
  if (out.empty()) out = "0";
  return out;
}

// ---------------------------------------------------------------------------
// Diagram DSL parser
// ---------------------------------------------------------------------------

namespace {

// Wire-dimension variable, unified across sequential compositions.  Algebra
// generators, id, swap and boxes pin fixed dimensions; ket/bra atoms are
// flexible with a lower bound from their largest digit.
struct VarTable {
  struct V {
    std::size_t parent;
    bool fixed;
    std::size_t value;  // fixed dimension
    std::size_t min;    // lower bound for flexible vars
    std::size_t pos;    // origin (for error messages)
  };
  std::vector<V> vs;

  std::size_t make_fixed(std::size_t value, std::size_t pos) {
    vs.push_back({vs.size(), true, value, value, pos});
    return vs.size() - 1;
  }
  std::size_t make_flex(std::size_t min, std::size_t pos) {
    vs.push_back({vs.size(), false, 0, min, pos});
    return vs.size() - 1;
  }
  std::size_t find(std::size_t a) {
    while (vs[a].parent != a) {
      vs[a].parent = vs[vs[a].parent].parent;
      a = vs[a].parent;
    }
    return a;
  }
  void unite(std::size_t a, std::size_t b, std::size_t oppos) {
    std::size_t ra = find(a), rb = find(b);
    if (ra == rb) return;
    V& va = vs[ra];
    V& vb = vs[rb];
    if (va.fixed && vb.fixed) {
      if (va.value != vb.value) {
        throw ParseError("wire dimension mismatch: " +
                             std::to_string(va.value) + " vs " +
                             std::to_string(vb.value),
                         oppos);
      }
      vs[rb].parent = ra;
      return;
    }
    if (va.fixed || vb.fixed) {
      V& fx = va.fixed ? va : vb;
      V& fl = va.fixed ? vb : va;
      if (fl.min > fx.value) {
        throw ParseError("digit out of range for wire dimension " +
                             std::to_string(fx.value),
                         fl.pos);
      }
      fl.fixed = true;
      fl.value = fx.value;
      vs[rb].parent = ra;  // either root works; ra's record already merged
      vs[ra].fixed = true;
      vs[ra].value = fx.value;
      return;
    }
    va.min = std::max(va.min, vb.min);
    va.pos = std::min(va.pos, vb.pos);
    vs[rb].parent = ra;
  }
  std::size_t resolved(std::size_t a) {
    std::size_t r = find(a);
    return vs[r].fixed ? vs[r].value : vs[r].min;
  }
};

struct Ast {
  using K = DslExpr::Kind;
  K k = K::Empty;
  std::vector<Ast> children;        // Seq/Par
  std::vector<std::size_t> oppos;   // operator offsets between children
  std::string name;                 // box name
  const Cfa* alg = nullptr;         // mu/eta/delta/eps
  std::size_t d0 = 0, d1 = 0;       // id/swap
  KetTerms ket;                     // ket/bra
  Tensor box;                       // box payload
  std::size_t pos = 0;
  std::size_t var = kNone;          // ket/bra port variable
};

struct Ports {
  std::vector<std::size_t> ins;
  std::vector<std::size_t> outs;
};

class Parser {
 public:
  Parser(const std::string& text, const DiagramRegistry& reg)
      : s_(text), reg_(reg) {}

  bool only_whitespace() {
    for (char c : s_) {
      if (!is_space(c)) return false;
    }
    return true;
  }

  Ast parse_term() { return parse_seq(); }

  void expect_end() {
    skip_ws();
    if (i_ < s_.size()) {
      throw ParseError(std::string("unexpected character '") + s_[i_] + "'",
                       i_);
    }
  }

 private:
  const std::string& s_;
  const DiagramRegistry& reg_;
  std::size_t i_ = 0;

  void skip_ws() {
    while (i_ < s_.size() && is_space(s_[i_])) ++i_;
  }
  bool peek_is(char c) {
    skip_ws();
    return i_ < s_.size() && s_[i_] == c;
  }
  void expect(char c, const std::string& what) {
    skip_ws();
    if (i_ >= s_.size() || s_[i_] != c) {
      throw ParseError("expected '" + std::string(1, c) + "' " + what, i_);
    }
    ++i_;
  }

  Ast parse_seq() {
    Ast first = parse_par();
    if (!peek_is(';')) return first;
    Ast node;
    node.k = Ast::K::Seq;
    node.pos = first.pos;
    node.children.push_back(std::move(first));
    while (peek_is(';')) {
      node.oppos.push_back(i_);
      ++i_;
      node.children.push_back(parse_par());
    }
    return node;
  }

  Ast parse_par() {
    Ast first = parse_atom();
    if (!peek_is('*')) return first;
    Ast node;
    node.k = Ast::K::Par;
    node.pos = first.pos;
    node.children.push_back(std::move(first));
    while (peek_is('*')) {
      node.oppos.push_back(i_);
      ++i_;
      node.children.push_back(parse_atom());
    }
    return node;
  }

  std::size_t parse_dim() {
    skip_ws();
    std::size_t start = i_;
    while (i_ < s_.size() && is_digit(s_[i_])) ++i_;
    if (i_ == start) throw ParseError("expected a dimension", start);
    std::size_t value = 0;
    std::from_chars(s_.data() + start, s_.data() + i_, value);
    if (value == 0) throw ParseError("dimension must be positive", start);
    return value;
  }

  std::string parse_bracket_name(std::size_t* name_pos) {
    expect('[', "after generator keyword");
    skip_ws();
    std::size_t start = i_;
    while (i_ < s_.size() && s_[i_] != ']' && !is_space(s_[i_])) ++i_;
    std::string name = s_.substr(start, i_ - start);
    expect(']', "to close the algebra name");
    if (name.empty()) throw ParseError("expected an algebra name", start);
    *name_pos = start;
    return name;
  }

  Ast parse_atom() {
    skip_ws();
    if (i_ >= s_.size()) throw ParseError("unexpected end of input", i_);
    if (s_[i_] == '(') {
      ++i_;
      Ast inner = parse_term();
      expect(')', "to close the group");
      return inner;
    }
    std::size_t start = i_;
    while (i_ < s_.size() && is_word_char(s_[i_])) ++i_;
    std::string word = s_.substr(start, i_ - start);
    if (word.empty()) {
      throw ParseError(std::string("unexpected character '") + s_[i_] + "'",
                       start);
    }

    Ast a;
    a.pos = start;
    if (word == "mu" || word == "eta" || word == "delta" || word == "eps") {
      std::size_t name_pos = 0;
      std::string name = parse_bracket_name(&name_pos);
      const Cfa* alg = reg_.find_algebra(name);
      if (alg == nullptr) {
        throw ParseError("unknown algebra '" + name + "'", name_pos);
      }
      a.alg = alg;
      a.k = word == "mu"    ? Ast::K::Mu
            : word == "eta" ? Ast::K::Eta
            : word == "delta" ? Ast::K::Delta
                              : Ast::K::Eps;
      return a;
    }
    if (word == "id") {
      expect('(', "after 'id'");
      a.k = Ast::K::Id;
      a.d0 = parse_dim();
      expect(')', "to close 'id'");
      return a;
    }
    if (word == "swap") {
      expect('(', "after 'swap'");
      a.k = Ast::K::Swap;
      a.d0 = parse_dim();
      expect(',', "between swap dimensions");
      a.d1 = parse_dim();
      expect(')', "to close 'swap'");
      return a;
    }
    if (word == "box") {
      expect('(', "after 'box'");
      skip_ws();
      std::size_t nstart = i_;
      while (i_ < s_.size() && s_[i_] != ')' && !is_space(s_[i_])) ++i_;
      std::string name = s_.substr(nstart, i_ - nstart);
      expect(')', "to close 'box'");
      auto it = reg_.boxes.find(name);
      if (it == reg_.boxes.end()) {
        throw ParseError("unknown box '" + name + "'", nstart);
      }
      a.k = Ast::K::Box;
      a.name = name;
      a.box = it->second;
      return a;
    }
    if (word == "ket" || word == "bra") {
      expect('(', "after '" + word + "'");
      std::size_t inner_start = i_;
      int depth = 1;
      while (i_ < s_.size() && depth > 0) {
        if (s_[i_] == '(') {
          ++depth;
        } else if (s_[i_] == ')') {
          --depth;
          if (depth == 0) break;
        }
        ++i_;
      }
      if (depth != 0) {
        throw ParseError("unterminated '" + word + "(' expression", start);
      }
      std::string inner = s_.substr(inner_start, i_ - inner_start);
      ++i_;  // closing ')'
      a.ket = parse_ket_terms(inner, inner_start);
      if (a.ket.parties != 1) {
        throw ParseError(
            "ket/bra atoms in diagrams take a single-party expression",
            inner_start);
      }
      a.k = word == "ket" ? Ast::K::Ket : Ast::K::Bra;
      return a;
    }
    throw ParseError("unknown atom '" + word + "'", start);
  }
};

Ports assign_vars(Ast& a, VarTable& vt) {
  using K = Ast::K;
  switch (a.k) {
    case K::Mu: {
      std::size_t v = vt.make_fixed(a.alg->dim, a.pos);
      return {{v, v}, {v}};
    }
    case K::Eta: {
      std::size_t v = vt.make_fixed(a.alg->dim, a.pos);
      return {{}, {v}};
    }
    case K::Delta: {
      std::size_t v = vt.make_fixed(a.alg->dim, a.pos);
      return {{v}, {v, v}};
    }
    case K::Eps: {
      std::size_t v = vt.make_fixed(a.alg->dim, a.pos);
      return {{v}, {}};
    }
    case K::Id: {
      std::size_t v = vt.make_fixed(a.d0, a.pos);
      return {{v}, {v}};
    }
    case K::Swap: {
      std::size_t v0 = vt.make_fixed(a.d0, a.pos);
      std::size_t v1 = vt.make_fixed(a.d1, a.pos);
      return {{v0, v1}, {v1, v0}};
    }
    case K::Ket: {
      a.var = vt.make_flex(a.ket.maxdigit + 1, a.pos);
      return {{}, {a.var}};
    }
    case K::Bra: {
      a.var = vt.make_flex(a.ket.maxdigit + 1, a.pos);
      return {{a.var}, {}};
    }
    case K::Box: {
      std::size_t vout = vt.make_fixed(a.box.shape()[0], a.pos);
      std::size_t vin = vt.make_fixed(a.box.shape()[1], a.pos);
      return {{vin}, {vout}};
    }
    case K::Par: {
      Ports r;
      for (Ast& c : a.children) {
        Ports p = assign_vars(c, vt);
        r.ins.insert(r.ins.end(), p.ins.begin(), p.ins.end());
        r.outs.insert(r.outs.end(), p.outs.begin(), p.outs.end());
      }
      return r;
    }
    case K::Seq: {
      Ports prev = assign_vars(a.children[0], vt);
      std::vector<std::size_t> first_ins = prev.ins;
      for (std::size_t k = 1; k < a.children.size(); ++k) {
        Ports cur = assign_vars(a.children[k], vt);
        if (prev.outs.size() != cur.ins.size()) {
          throw ParseError("composition mismatch: " +
                               std::to_string(prev.outs.size()) +
                               " outputs vs " +
                               std::to_string(cur.ins.size()) + " inputs",
                           a.oppos[k - 1]);
        }
        for (std::size_t j = 0; j < cur.ins.size(); ++j) {
          vt.unite(prev.outs[j], cur.ins[j], a.oppos[k - 1]);
        }
        prev = std::move(cur);
      }
      return {std::move(first_ins), std::move(prev.outs)};
    }
    case K::Empty:
      break;
  }
  return {};
}

Diagram build_diagram(const Ast& a, VarTable& vt) {
  using K = Ast::K;
  switch (a.k) {
    case K::Mu: return mul_node(*a.alg);
    case K::Eta: return unit_node(*a.alg);
    case K::Delta: return comul_node(*a.alg);
    case K::Eps: return counit_node(*a.alg);
    case K::Id: return wire_diagram(a.d0);
    case K::Swap: return swap_diagram(a.d0, a.d1);
    case K::Ket:
    case K::Bra: {
      std::size_t d = vt.resolved(a.var);
      Tensor v = Tensor::zeros({d});
      for (const auto& [digits, c] : a.ket.terms) v.set({digits[0]}, c);
      return a.k == K::Ket ? state_node(v) : effect_node(v);
    }
    case K::Box: return box_node(a.name, a.box);
    case K::Par: {
      Diagram r = build_diagram(a.children[0], vt);
      for (std::size_t k = 1; k < a.children.size(); ++k) {
        r = par(r, build_diagram(a.children[k], vt));
      }
      return r;
    }
    case K::Seq: {
      Diagram r = build_diagram(a.children[0], vt);
      for (std::size_t k = 1; k < a.children.size(); ++k) {
        r = seq(r, build_diagram(a.children[k], vt));
      }
      return r;
    }
    case K::Empty:
      break;
  }
  return empty_diagram();
}

}  // namespace

Diagram parse_diagram(const std::string& text, const DiagramRegistry& reg) {
  Parser p(text, reg);
  if (p.only_whitespace()) return empty_diagram();
  Ast ast = p.parse_term();
  p.expect_end();
  VarTable vt;
  assign_vars(ast, vt);
  return build_diagram(ast, vt);
}

// ---------------------------------------------------------------------------
// DSL rendering
// ---------------------------------------------------------------------------

namespace {

std::string render_ket_payload(const Tensor& v) {
  std::size_t d = v.shape()[0];
  if (d > 10) {
    throw DomainError("ket rendering uses one digit per party (dim <= 10)");
  }
  std::string out;
  bool leading = true;
  std::size_t last_written = kNone;
  for (std::size_t k = 0; k < d; ++k) {
    Scalar c = v.flat(k);
    if (c == Scalar(0.0, 0.0)) continue;
    out += format_ket_coefficient(c, leading);
    out += '|';
    out += static_cast<char>('0' + k);
    out += '>';
    leading = false;
    last_written = k;
  }
  // Pin the wire dimension by naming the top basis state even when its
  // amplitude vanishes, so parsing the text back reproduces the dimension.
  if (last_written == kNone) {
    return "0|" + std::string(1, static_cast<char>('0' + (d - 1))) + ">";
  }
  if (last_written + 1 < d) {
    out += "+0|";
    out += static_cast<char>('0' + (d - 1));
    out += '>';
  }
  return out;
}

void collect_children(const DslExpr& e, DslExpr::Kind kind,
                      std::vector<const DslExpr*>& out) {
  for (const auto& c : e.children) {
    if (!c || c->kind == DslExpr::Kind::Empty) continue;
    if (c->kind == kind) {
      collect_children(*c, kind, out);
    } else {
      out.push_back(c.get());
    }
  }
}

// ctx 0 = top level, 1 = seq child, 2 = par child.
std::string render_expr(const DslExpr& e, int ctx) {
  using K = DslExpr::Kind;
  switch (e.kind) {
    case K::Empty: return "";
    case K::Mu: return "mu[" + e.name + "]";
    case K::Eta: return "eta[" + e.name + "]";
    case K::Delta: return "delta[" + e.name + "]";
    case K::Eps: return "eps[" + e.name + "]";
    case K::Id: return "id(" + std::to_string(e.dim) + ")";
    case K::Swap:
      return "swap(" + std::to_string(e.dim) + "," + std::to_string(e.dim2) +
             ")";
    case K::Ket: return "ket(" + render_ket_payload(e.payload) + ")";
    case K::Bra: return "bra(" + render_ket_payload(e.payload) + ")";
    case K::Box: return "box(" + e.name + ")";
    case K::Seq: {
      std::vector<const DslExpr*> parts;
      collect_children(e, K::Seq, parts);
      if (parts.empty()) return "";
      if (parts.size() == 1) return render_expr(*parts[0], ctx);
      std::string out;
      for (std::size_t k = 0; k < parts.size(); ++k) {
        if (k) out += " ; ";
        out += render_expr(*parts[k], 1);
      }
      if (ctx > 0) return "(" + out + ")";
      return out;
    }
    case K::Par: {
      std::vector<const DslExpr*> parts;
      collect_children(e, K::Par, parts);
      if (parts.empty()) return "";
      if (parts.size() == 1) return render_expr(*parts[0], ctx);
      std::string out;
      for (std::size_t k = 0; k < parts.size(); ++k) {
        if (k) out += " * ";
        out += render_expr(*parts[k], 2);
      }
      if (ctx > 1) return "(" + out + ")";
      return out;
    }
  }
  return "";
}

}  // namespace

std::string to_dsl(const Diagram& d) {
  if (!d.expr) return "";
  return render_expr(*d.expr, 0);
}

}  // namespace ftriad
