#include "lukas/speckit.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "lukas/dataset.hpp"

namespace lukas {

bool Mark::operator==(const Mark& o) const {
  return kind == o.kind && name == o.name && diagram == o.diagram &&
         gamma == o.gamma && params == o.params && lambda == o.lambda &&
         formula.to_string() == o.formula.to_string();
}

const Decl* Specification::find(const std::string& name) const {
  for (const auto& d : decls)
    if (d.name == name) return &d;
  return nullptr;
}

std::vector<Mark> Specification::marks() const {
  std::vector<Mark> out;
  for (const auto& d : decls) {
    if (d.kind == Decl::Kind::Mark) out.push_back(d.mark);
    for (const auto& m : d.nested) out.push_back(m);
  }
  return out;
}

// ----------------------------------------------------------- parser

namespace {

const char* kDelims = " \t\r\n,;:(){}[]*-#";

struct SpecParser {
  const std::string& s;
  size_t i = 0;

  explicit SpecParser(const std::string& text) : s(text) {}

  int line() const {
    return 1 + int(std::count(s.begin(), s.begin() + long(i), '\n'));
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw error("line " + std::to_string(line()) + ": " + msg);
  }

  void ws() {
    for (;;) {
      while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
      if (i < s.size() && s[i] == '#') {
        while (i < s.size() && s[i] != '\n') ++i;
        continue;
      }
      break;
    }
  }
  bool done() {
    ws();
    return i >= s.size();
  }
  char peek() {
    ws();
    return i < s.size() ? s[i] : '\0';
  }
  bool eat(char c) {
    if (peek() != c) return false;
    ++i;
    return true;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  std::string token() {
    ws();
    size_t start = i;
    while (i < s.size() && !std::strchr(kDelims, s[i])) ++i;
    if (i == start) fail("expected a name");
    return s.substr(start, i - start);
  }
  std::string capture_until(char stop) {
    ws();
    size_t start = i;
    while (i < s.size() && s[i] != stop) ++i;
    if (i >= s.size()) fail(std::string("missing '") + stop + "'");
    return s.substr(start, i - start);
  }
  double number_token() {
    std::string t = token();
    try {
      size_t used = 0;
      double v = std::stod(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (const std::exception&) {
      fail("expected a number, got '" + t + "'");
    }
  }
  bool looks_numeric() {
    char c = peek();
    return std::isdigit((unsigned char)c) || c == '.';
  }

  std::vector<std::string> token_list() {
    std::vector<std::string> out;
    char c = peek();
    if (c == '}' || c == '-' || c == ';') return out;
    out.push_back(token());
    while (eat(',')) out.push_back(token());
    return out;
  }
};

void require_declared(const std::set<std::string>& declared,
                      const std::string& name, const SpecParser& p) {
  if (!declared.count(name)) p.fail("'" + name + "' is not declared yet");
}

Mark parse_clause(SpecParser& p, const std::string& cname,
                  std::set<std::string>& declared) {
  std::string kw = p.token();
  Mark m;
  m.name = cname;
  if (kw == "similarity") {
    m.kind = Mark::Kind::Similarity;
  } else if (kw == "is_a") {
    p.expect('(');
    m.kind = Mark::Kind::IsA;
    m.gamma = p.token();
    require_declared(declared, m.gamma, p);
    p.expect(')');
  } else {
    p.fail("unknown clause '" + kw + "'");
  }
  declared.insert(cname);
  return m;
}

}  // namespace

Specification parse_spec(const std::string& text) {
  SpecParser p(text);
  Specification spec;
  std::set<std::string> declared;

  while (!p.done()) {
    Decl d;
    d.name = p.token();
    bool has_params = p.eat('(');
    if (has_params) {
      d.mark.params = p.token_list();
      p.expect(')');
    }
    p.expect(':');

    if (has_params) {
      d.kind = Decl::Kind::Mark;
      d.mark.kind = Mark::Kind::FormulaConstraint;
      d.mark.name = d.name;
      std::string ftext;
      if (p.eat('[')) {
        ftext = p.capture_until(']');
        p.expect(']');
        if (p.eat('_')) d.mark.lambda = p.number_token();
      } else {
        ftext = p.capture_until(';');
      }
      try {
        d.mark.formula = parse_formula(ftext);
      } catch (const syntax_error& e) {
        p.fail(e.what());
      }
      for (const auto& v : d.mark.formula.variables())
        if (!std::count(d.mark.params.begin(), d.mark.params.end(), v))
          p.fail("formula variable '" + v + "' is not a column of " + d.name);
    } else if (p.peek() == '{') {
      p.expect('{');
      auto first = p.token_list();
      if (p.eat('-')) {
        p.expect('>');
        d.kind = Decl::Kind::View;
        d.in = first;
        d.out = p.token_list();
        for (const auto& name : d.in) require_declared(declared, name, p);
        for (const auto& name : d.out) require_declared(declared, name, p);
        while (p.eat(';')) {
          if (p.peek() == '}') break;
          std::string cname = p.token();
          p.expect(':');
          d.nested.push_back(parse_clause(p, cname, declared));
        }
      } else {
        d.kind = Decl::Kind::Sort;
        d.values = first;
      }
      p.expect('}');
    } else if (p.peek() == '[') {
      p.expect('[');
      d.kind = Decl::Kind::Mark;
      d.mark.kind = Mark::Kind::Commutative;
      d.mark.name = d.name;
      d.mark.diagram = p.token();
      require_declared(declared, d.mark.diagram, p);
      p.expect(']');
      if (p.eat('_')) d.mark.lambda = p.number_token();
    } else if (p.looks_numeric()) {
      d.kind = Decl::Kind::Mark;
      d.mark.name = d.name;
      d.mark.lambda = p.number_token();
      p.expect('-');
      std::string kw = p.token();
      if (kw == "lim") d.mark.kind = Mark::Kind::Lim;
      else if (kw == "colim") d.mark.kind = Mark::Kind::Colim;
      else p.fail("expected lim or colim after the threshold");
      d.mark.diagram = p.token();
      require_declared(declared, d.mark.diagram, p);
    } else {
      std::string t = p.token();
      if (t == "similarity" || t == "is_a") {
        // rewind-free: reuse the clause parser by dispatching here
        d.kind = Decl::Kind::Mark;
        d.mark.name = d.name;
        if (t == "similarity") {
          d.mark.kind = Mark::Kind::Similarity;
        } else {
          p.expect('(');
          d.mark.kind = Mark::Kind::IsA;
          d.mark.gamma = p.token();
          require_declared(declared, d.mark.gamma, p);
          p.expect(')');
        }
      } else if (t == "lim" || t == "colim") {
        d.kind = Decl::Kind::Mark;
        d.mark.name = d.name;
        d.mark.kind = t == "lim" ? Mark::Kind::Lim : Mark::Kind::Colim;
        d.mark.diagram = p.token();
        require_declared(declared, d.mark.diagram, p);
      } else {
        d.kind = Decl::Kind::Diagram;
        d.factors.push_back(t);
        while (p.eat('*')) d.factors.push_back(p.token());
        for (const auto& f : d.factors) require_declared(declared, f, p);
      }
    }
    p.expect(';');
    declared.insert(d.name);
    spec.decls.push_back(std::move(d));
  }
  return spec;
}

namespace {

std::string format_lambda(double lambda) {
  std::ostringstream out;
  out << lambda;
  return out.str();
}

std::string join(const std::vector<std::string>& xs, const char* sep) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += xs[i];
  }
  return out;
}

std::string print_mark_body(const Mark& m) {
  switch (m.kind) {
    case Mark::Kind::Similarity:
      return "similarity";
    case Mark::Kind::IsA:
      return "is_a(" + m.gamma + ")";
    case Mark::Kind::Commutative:
      return m.lambda == 1.0 ? "[" + m.diagram + "]"
                             : "[" + m.diagram + "]_" + format_lambda(m.lambda);
    case Mark::Kind::Lim:
    case Mark::Kind::Colim: {
      std::string op = m.kind == Mark::Kind::Lim ? "lim" : "colim";
      return (m.lambda == 1.0 ? op : format_lambda(m.lambda) + "-" + op) +
             " " + m.diagram;
    }
    case Mark::Kind::FormulaConstraint:
      return m.lambda == 1.0
                 ? m.formula.to_string()
                 : "[" + m.formula.to_string() + "]_" + format_lambda(m.lambda);
  }
  throw error("corrupt mark");
}

}  // namespace

std::string print_spec(const Specification& spec) {
  std::ostringstream out;
  for (const auto& d : spec.decls) {
    switch (d.kind) {
      case Decl::Kind::Sort:
        out << d.name << " : { " << join(d.values, ", ") << " };\n";
        break;
      case Decl::Kind::View:
        out << d.name << " : { " << join(d.in, ", ") << " ->";
        if (!d.out.empty()) out << " " << join(d.out, ", ");
        for (const auto& m : d.nested)
          out << " ; " << m.name << " : " << print_mark_body(m);
        out << " };\n";
        break;
      case Decl::Kind::Diagram:
        out << d.name << " : " << join(d.factors, " * ") << ";\n";
        break;
      case Decl::Kind::Mark:
        if (d.mark.kind == Mark::Kind::FormulaConstraint)
          out << d.name << "(" << join(d.mark.params, ", ")
              << ") : " << print_mark_body(d.mark) << ";\n";
        else
          out << d.name << " : " << print_mark_body(d.mark) << ";\n";
        break;
    }
  }
  return out.str();
}

Specification load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str());
}

// ------------------------------------------------------------ model

const FiniteView& ModelBinding::at(const std::string& sign) const {
  auto it = views.find(sign);
  if (it == views.end()) throw error("sign '" + sign + "' is not bound");
  return it->second;
}

ModelBinding load_model(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw io_error("cannot open '" + manifest_path + "'");
  ModelBinding model;
  std::filesystem::path base =
      std::filesystem::path(manifest_path).parent_path();
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string t) {
    size_t b = t.find_first_not_of(" \t\r");
    size_t e = t.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw io_error(manifest_path + ":" + std::to_string(lineno) +
                     ": expected key = value");
    std::string key = trim(t.substr(0, eq)), value = trim(t.substr(eq + 1));
    if (key == "n")
      model.n = std::stol(value);
    else
      entries.emplace_back(key, value);
  }
  for (const auto& [sign, rel] : entries) {
    std::filesystem::path path(rel);
    if (path.is_relative()) path = base / path;
    model.views.emplace(sign, load_view(path.string(), model.n));
  }
  return model;
}

// ------------------------------------------------------------ check

namespace {

void flatten_diagram(const Specification& spec, const ModelBinding& model,
                     const std::string& name, std::vector<std::string>& out) {
  const Decl* d = spec.find(name);
  if (d && d->kind == Decl::Kind::Diagram) {
    for (const auto& f : d->factors) flatten_diagram(spec, model, f, out);
    return;
  }
  out.push_back(name);  // a view is a one-arrow diagram
}

MultiDiagram bind_diagram(const Specification& spec, const ModelBinding& model,
                          const std::string& name) {
  std::vector<std::string> signs;
  flatten_diagram(spec, model, name, signs);
  if (signs.empty()) throw error("diagram '" + name + "' is empty");
  MultiDiagram d;
  d.n = model.n;
  std::set<std::string> have, produced;
  for (const auto& sign : signs) {
    const FiniteView& v = model.at(sign);
    d.arrows.push_back({sign, v});
    for (const auto& a : v.attributes()) {
      if (have.count(a.name)) {
        if (d.node(a.name).domain != a.domain)
          throw error("node '" + a.name + "' has conflicting domains");
        continue;
      }
      have.insert(a.name);
      d.nodes.push_back({a.name, a.domain, std::nullopt});
    }
    for (const auto& a : v.outputs()) produced.insert(a.name);
  }
  for (const auto& node : d.nodes)
    if (!produced.count(node.name)) d.input_nodes.push_back(node.name);
  d.validate();
  return d;
}

OmegaSet omega_from_view(const std::string& tag, const FiniteView& v) {
  if (v.attributes().size() != 2 ||
      v.attributes()[0].domain != v.attributes()[1].domain)
    throw error("'" + tag + "' is not a square similarity view");
  OmegaSet o;
  o.tag = tag;
  o.support = v.attributes()[0].domain;
  o.n = v.resolution();
  for (const auto& a : o.support)
    for (const auto& b : o.support) o.set(a, b, v.at({a, b}));
  return o;
}

bool has_similarity_mark(const Specification& spec, const std::string& sign) {
  for (const auto& m : spec.marks())
    if (m.kind == Mark::Kind::Similarity && m.name == sign) return true;
  return false;
}

FiniteView constraint_view(const Mark& m, const FiniteView& bound) {
  if (m.params.size() != bound.attributes().size())
    throw error("constraint on '" + m.name + "': " +
                std::to_string(m.params.size()) + " columns named, view has " +
                std::to_string(bound.attributes().size()));
  FiniteView expected(bound.inputs(), bound.outputs(), bound.resolution());
  for (const auto& tuple : expected.grid()) {
    std::map<std::string, TruthValue> assign;
    for (size_t i = 0; i < tuple.size(); ++i)
      assign.emplace(m.params[i],
                     TruthValue::parse(tuple[i], bound.resolution()));
    expected.set(tuple, m.formula.eval(assign));
  }
  return expected;
}

std::string mark_title(const Mark& m) {
  switch (m.kind) {
    case Mark::Kind::Commutative: return m.name + " : [" + m.diagram + "]";
    case Mark::Kind::Lim: return m.name + " : lim " + m.diagram;
    case Mark::Kind::Colim: return m.name + " : colim " + m.diagram;
    case Mark::Kind::IsA: return m.name + " : is_a(" + m.gamma + ")";
    case Mark::Kind::Similarity: return m.name + " : similarity";
    case Mark::Kind::FormulaConstraint:
      return m.name + " : " + m.formula.to_string();
  }
  return m.name;
}

}  // namespace

CheckReport check(const Specification& spec, const ModelBinding& model,
                  SimilarityMode mode) {
  CheckReport report;
  for (const Mark& m : spec.marks()) {
    CheckReport::Item item;
    item.mark = mark_title(m);
    switch (m.kind) {
      case Mark::Kind::Commutative: {
        MultiDiagram d = bind_diagram(spec, model, m.diagram);
        CheckResult r = lambda_commutative(d, m.lambda, mode);
        item.value = r.value;
        item.passed = r.passed;
        break;
      }
      case Mark::Kind::Lim: {
        MultiDiagram d = bind_diagram(spec, model, m.diagram);
        CheckResult r = lambda_limit_check(model.at(m.name), d, m.lambda, mode);
        item.value = r.value;
        item.passed = r.passed;
        break;
      }
      case Mark::Kind::Colim: {
        const Decl* decl = spec.find(m.diagram);
        if (!decl || decl->kind != Decl::Kind::Diagram ||
            decl->factors.size() != 2) {
          item.verdict = "unsupported";
          item.passed = true;
          report.items.push_back(item);
          continue;
        }
        const std::string& f = decl->factors[0];
        const std::string& g = decl->factors[1];
        FiniteView colim;
        if (has_similarity_mark(spec, f) && has_similarity_mark(spec, g)) {
          colim = coproduct(omega_from_view(f, model.at(f)),
                            omega_from_view(g, model.at(g)));
        } else if (model.at(f).same_attributes(model.at(g)) &&
                   model.at(f).inputs().size() == 1 &&
                   model.at(f).outputs().size() == 1) {
          const FiniteView& fv = model.at(f);
          OmegaSet alpha = OmegaSet::identity("a", fv.inputs()[0].domain,
                                              fv.resolution());
          OmegaSet beta = OmegaSet::identity("b", fv.outputs()[0].domain,
                                             fv.resolution());
          colim = coequalize(fv, model.at(g), alpha, beta);
        } else {
          item.verdict = "unsupported";
          item.passed = true;
          report.items.push_back(item);
          continue;
        }
        item.value = view_similarity(model.at(m.name), colim, mode);
        item.passed = item.value >= m.lambda - 1e-12;
        break;
      }
      case Mark::Kind::IsA:
        item.value = is_a_check(model.at(m.name), model.at(m.gamma)).to_double();
        item.passed = item.value >= m.lambda - 1e-12;
        break;
      case Mark::Kind::Similarity:
        item.passed = is_similarity(model.at(m.name));
        item.value = item.passed ? 1.0 : 0.0;
        break;
      case Mark::Kind::FormulaConstraint:
        item.value = view_similarity(model.at(m.name),
                                     constraint_view(m, model.at(m.name)),
                                     mode);
        item.passed = item.value >= m.lambda - 1e-12;
        break;
    }
    if (item.verdict.empty()) item.verdict = item.passed ? "pass" : "fail";
    report.items.push_back(item);
  }
  for (const auto& item : report.items)
    if (!item.passed) report.passed = false;
  return report;
}

std::string CheckReport::to_text() const {
  std::ostringstream out;
  for (const auto& item : items) {
    out << (item.verdict == "unsupported"
                ? "????"
                : (item.passed ? "PASS" : "FAIL"))
        << "  " << item.mark;
    if (item.verdict != "unsupported") out << "  (value " << item.value << ")";
    out << "\n";
  }
  out << (passed ? "all marks pass" : "some marks fail") << "\n";
  return out.str();
}

Specification integrate(const Specification& spec, const std::string& sign,
                        const Formula& formula, double lambda,
                        bool* duplicate) {
  if (duplicate) *duplicate = false;
  Mark m;
  m.kind = Mark::Kind::FormulaConstraint;
  m.name = sign;
  m.formula = formula;
  m.lambda = lambda;

  const Decl* d = spec.find(sign);
  if (d && d->kind == Decl::Kind::View) {
    std::vector<std::string> arity = d->in;
    arity.insert(arity.end(), d->out.begin(), d->out.end());
    std::set<std::string> uniq(arity.begin(), arity.end());
    if (uniq.size() == arity.size()) {
      m.params = arity;
    } else {
      for (size_t i = 0; i < arity.size(); ++i)
        m.params.push_back("x" + std::to_string(i + 1));
    }
  } else {
    m.params = formula.variables();
  }
  for (const auto& v : formula.variables())
    if (!std::count(m.params.begin(), m.params.end(), v))
      throw error("formula variable '" + v + "' does not match the arity of '" +
                  sign + "'");

  for (const auto& existing : spec.marks())
    if (existing == m) {
      if (duplicate) *duplicate = true;
      return spec;
    }
  Specification out = spec;
  Decl decl;
  decl.kind = Decl::Kind::Mark;
  decl.name = sign;
  decl.mark = m;
  out.decls.push_back(std::move(decl));
  return out;
}

FiniteView query(const Specification& spec, const ModelBinding& model,
                 const std::string& diagram) {
  return limit(bind_diagram(spec, model, diagram));
}

}  // namespace lukas
