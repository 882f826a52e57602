#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lukas/truth_value.hpp"

namespace lukas {

struct syntax_error : error {
  syntax_error(const std::string& what, size_t position)
      : error(what + " at position " + std::to_string(position)),
        pos(position) {}
  size_t pos;
};

/// AST of a many-valued logic sentence.
///
/// Concrete syntax: `+` bounded sum, `*` fusion, `->` residuum
/// (right-associative), `~` negation, `min(,)` / `max(,)` lattice
/// operators, constants `0` and `1`.
class Formula {
public:
  enum class Kind {
    Var, Zero, One, Neg, Fusion, StrongSum, Implies, Meet, Join
  };

  struct Node;
  using NodePtr = std::shared_ptr<const Node>;
  struct Node {
    Kind kind;
    std::string name;  // Var only
    NodePtr left, right;  // Neg uses left only
  };

  Formula() : root_(constant(Kind::Zero)) {}
  explicit Formula(NodePtr root);

  static Formula var(const std::string& name);
  static Formula zero();
  static Formula one();
  static Formula neg(const Formula& a);
  static Formula fuse(const Formula& a, const Formula& b);
  static Formula osum(const Formula& a, const Formula& b);
  static Formula implies(const Formula& a, const Formula& b);
  static Formula fmin(const Formula& a, const Formula& b);
  static Formula fmax(const Formula& a, const Formula& b);

  const NodePtr& root() const { return root_; }
  Kind kind() const { return root_->kind; }

  /// Distinct variable names in first-occurrence (preorder) order.
  const std::vector<std::string>& variables() const { return vars_; }

  TruthValue eval(const std::map<std::string, TruthValue>& assignment) const;
  Formula substitute(const std::map<std::string, Formula>& repl) const;

  /// Structural equality of the two ASTs.
  bool same_as(const Formula& other) const;

  std::string to_string() const;
  /// Number of connective nodes (everything except Var/0/1).
  int connective_count() const;

private:
  static NodePtr constant(Kind k);
  NodePtr root_;
  std::vector<std::string> vars_;
};

/// Parses the ASCII grammar above; throws syntax_error on bad input.
Formula parse_formula(const std::string& text);

}  // namespace lukas
