#include "lukas/formula.hpp"

#include <cctype>
#include <functional>
#include <set>

namespace lukas {

namespace {

void collect_vars(const Formula::NodePtr& node,
                  std::vector<std::string>& out,
                  std::set<std::string>& seen) {
  if (!node) return;
  if (node->kind == Formula::Kind::Var) {
    if (seen.insert(node->name).second) out.push_back(node->name);
    return;
  }
  collect_vars(node->left, out, seen);
  collect_vars(node->right, out, seen);
}

Formula::NodePtr make(Formula::Kind k, Formula::NodePtr l,
                      Formula::NodePtr r = nullptr) {
  auto n = std::make_shared<Formula::Node>();
  n->kind = k;
  n->left = std::move(l);
  n->right = std::move(r);
  return n;
}

}  // namespace

Formula::Formula(NodePtr root) : root_(std::move(root)) {
  std::set<std::string> seen;
  collect_vars(root_, vars_, seen);
}

Formula::NodePtr Formula::constant(Kind k) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  return n;
}

Formula Formula::var(const std::string& name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->name = name;
  return Formula(n);
}
Formula Formula::zero() { return Formula(constant(Kind::Zero)); }
Formula Formula::one() { return Formula(constant(Kind::One)); }
Formula Formula::neg(const Formula& a) {
  return Formula(make(Kind::Neg, a.root()));
}
Formula Formula::fuse(const Formula& a, const Formula& b) {
  return Formula(make(Kind::Fusion, a.root(), b.root()));
}
Formula Formula::osum(const Formula& a, const Formula& b) {
  return Formula(make(Kind::StrongSum, a.root(), b.root()));
}
Formula Formula::implies(const Formula& a, const Formula& b) {
  return Formula(make(Kind::Implies, a.root(), b.root()));
}
Formula Formula::fmin(const Formula& a, const Formula& b) {
  return Formula(make(Kind::Meet, a.root(), b.root()));
}
Formula Formula::fmax(const Formula& a, const Formula& b) {
  return Formula(make(Kind::Join, a.root(), b.root()));
}

TruthValue Formula::eval(
    const std::map<std::string, TruthValue>& assignment) const {
  std::function<TruthValue(const NodePtr&)> go =
      [&](const NodePtr& n) -> TruthValue {
    switch (n->kind) {
      case Kind::Var: {
        auto it = assignment.find(n->name);
        if (it == assignment.end())
          throw error("unassigned variable '" + n->name + "'");
        return it->second;
      }
      case Kind::Zero:
        return TruthValue::zero(assignment.empty()
                                    ? 1
                                    : assignment.begin()->second.denominator());
      case Kind::One:
        return TruthValue::one(assignment.empty()
                                   ? 1
                                   : assignment.begin()->second.denominator());
      case Kind::Neg:
        return negation(go(n->left));
      case Kind::Fusion:
        return fusion(go(n->left), go(n->right));
      case Kind::StrongSum:
        return strong_sum(go(n->left), go(n->right));
      case Kind::Implies:
        return residuum(go(n->left), go(n->right));
      case Kind::Meet:
        return meet(go(n->left), go(n->right));
      case Kind::Join:
        return join(go(n->left), go(n->right));
    }
    throw error("corrupt formula node");
  };
  return go(root_);
}

Formula Formula::substitute(const std::map<std::string, Formula>& repl) const {
  std::function<NodePtr(const NodePtr&)> go =
      [&](const NodePtr& n) -> NodePtr {
    if (n->kind == Kind::Var) {
      auto it = repl.find(n->name);
      return it == repl.end() ? n : it->second.root();
    }
    if (!n->left) return n;
    auto copy = std::make_shared<Node>(*n);
    copy->left = go(n->left);
    if (n->right) copy->right = go(n->right);
    return copy;
  };
  return Formula(go(root_));
}

bool Formula::same_as(const Formula& other) const {
  std::function<bool(const NodePtr&, const NodePtr&)> eq =
      [&](const NodePtr& a, const NodePtr& b) -> bool {
    if (a->kind != b->kind) return false;
    if (a->kind == Kind::Var) return a->name == b->name;
    if (a->left && !eq(a->left, b->left)) return false;
    if (a->right && !eq(a->right, b->right)) return false;
    return true;
  };
  return eq(root_, other.root_);
}

int Formula::connective_count() const {
  std::function<int(const NodePtr&)> go = [&](const NodePtr& n) -> int {
    if (!n) return 0;
    int self = (n->kind == Kind::Var || n->kind == Kind::Zero ||
                n->kind == Kind::One)
                   ? 0
                   : 1;
    return self + go(n->left) + go(n->right);
  };
  return go(root_);
}

namespace {

// Binding strength: + < -> < * < unary/atoms.
int level(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::StrongSum: return 1;
    case Formula::Kind::Implies: return 2;
    case Formula::Kind::Fusion: return 3;
    default: return 4;
  }
}

void print(const Formula::NodePtr& n, int min_level, std::string& out) {
  int lv = level(n->kind);
  bool paren = lv < min_level;
  if (paren) out += "(";
  switch (n->kind) {
    case Formula::Kind::Var: out += n->name; break;
    case Formula::Kind::Zero: out += "0"; break;
    case Formula::Kind::One: out += "1"; break;
    case Formula::Kind::Neg:
      out += "~";
      print(n->left, 4, out);
      break;
    case Formula::Kind::StrongSum:
      print(n->left, 1, out);
      out += " + ";
      print(n->right, 2, out);
      break;
    case Formula::Kind::Implies:
      print(n->left, 3, out);
      out += " -> ";
      print(n->right, 2, out);
      break;
    case Formula::Kind::Fusion:
      print(n->left, 3, out);
      out += " * ";
      print(n->right, 4, out);
      break;
    case Formula::Kind::Meet:
    case Formula::Kind::Join:
      out += n->kind == Formula::Kind::Meet ? "min(" : "max(";
      print(n->left, 0, out);
      out += ", ";
      print(n->right, 0, out);
      out += ")";
      break;
  }
  if (paren) out += ")";
}

}  // namespace

std::string Formula::to_string() const {
  std::string out;
  print(root_, 0, out);
  return out;
}

// ---------------------------------------------------------------- parser

namespace {

struct Parser {
  const std::string& text;
  size_t pos = 0;

  explicit Parser(const std::string& t) : text(t) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos;
  }

  bool accept(const std::string& tok) {
    skip_ws();
    if (text.compare(pos, tok.size(), tok) == 0) {
      // Keywords must not swallow the head of an identifier.
      if (std::isalnum((unsigned char)tok.back())) {
        size_t after = pos + tok.size();
        if (after < text.size() &&
            (std::isalnum((unsigned char)text[after]) || text[after] == '_'))
          return false;
      }
      pos += tok.size();
      return true;
    }
    return false;
  }

  void expect(const std::string& tok) {
    if (!accept(tok))
      throw syntax_error("expected '" + tok + "'", pos);
  }

  Formula parse() {
    Formula f = sum();
    skip_ws();
    if (pos != text.size())
      throw syntax_error("unexpected trailing input", pos);
    return f;
  }

  Formula sum() {
    Formula f = impl();
    while (accept("+")) f = Formula::osum(f, impl());
    return f;
  }

  Formula impl() {
    Formula f = prod();
    if (accept("->")) return Formula::implies(f, impl());
    return f;
  }

  Formula prod() {
    Formula f = unary();
    while (accept("*")) f = Formula::fuse(f, unary());
    return f;
  }

  Formula unary() {
    if (accept("~")) return Formula::neg(unary());
    if (accept("min(")) {
      Formula a = sum();
      expect(",");
      Formula b = sum();
      expect(")");
      return Formula::fmin(a, b);
    }
    if (accept("max(")) {
      Formula a = sum();
      expect(",");
      Formula b = sum();
      expect(")");
      return Formula::fmax(a, b);
    }
    if (accept("0")) return Formula::zero();
    if (accept("1")) return Formula::one();
    if (accept("(")) {
      Formula f = sum();
      expect(")");
      return f;
    }
    skip_ws();
    size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum((unsigned char)text[pos]) || text[pos] == '_'))
      ++pos;
    if (pos == start)
      throw syntax_error("expected a term", pos);
    return Formula::var(text.substr(start, pos - start));
  }
};

}  // namespace

Formula parse_formula(const std::string& text) {
  Parser p(text);
  return p.parse();
}

}  // namespace lukas
