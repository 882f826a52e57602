#pragma once

#include <map>
#include <string>
#include <vector>

#include "lukas/diagram.hpp"
#include "lukas/finite_view.hpp"
#include "lukas/formula.hpp"

namespace lukas {

/// A constraint attached to a specification: commutativity of a
/// diagram, a sign being the (co)limit of a diagram, is_a/similarity
/// meta-signs, or a formula pinning a view's values.
struct Mark {
  enum class Kind { Commutative, Lim, Colim, IsA, Similarity, FormulaConstraint };
  Kind kind;
  std::string name;                 // declaration label
  std::string diagram;              // Commutative / Lim / Colim
  std::string gamma;                // IsA
  std::vector<std::string> params;  // FormulaConstraint column names
  Formula formula;                  // FormulaConstraint
  double lambda = 1.0;

  bool operator==(const Mark& o) const;
};

/// One `Name : body ;` statement.
struct Decl {
  enum class Kind { Sort, View, Diagram, Mark };
  Kind kind;
  std::string name;
  std::vector<std::string> values;           // Sort
  std::vector<std::string> in, out;          // View arity (earlier names)
  std::vector<Mark> nested;                  // View-scoped clauses
  std::vector<std::string> factors;          // Diagram gluing
  Mark mark;                                 // top-level mark
};

struct Specification {
  std::vector<Decl> decls;

  const Decl* find(const std::string& name) const;
  std::vector<Mark> marks() const;  // top-level and nested, in order
};

/// Grammar (one statement per `;`):
///   Sort    : { v1, v2, ... };
///   View    : { S1, ..., Sk -> T1, ..., Tm ; clause ; ... };
///   Diagram : F1 * F2 * ...;
///   Label   : [D]_0.9;            (commutativity; _λ optional)
///   Sign    : 0.9-lim D;          ("lim D" means λ = 1; same for colim)
///   Sign    : is_a(Gamma);
///   Gamma   : similarity;
///   Sign(x1, ..., xk) : <formula>;            (λ = 1)
///   Sign(x1, ..., xk) : [<formula>]_0.95;
/// Every referenced name must be declared earlier.
Specification parse_spec(const std::string& text);
std::string print_spec(const Specification& spec);
Specification load_spec(const std::string& path);

/// Sign name -> bound view, shared resolution n.
struct ModelBinding {
  long n = 1;
  std::map<std::string, FiniteView> views;

  const FiniteView& at(const std::string& sign) const;
};

/// Manifest: `n = <int>` plus `sign = path.csv` lines; relative paths
/// resolve against the manifest's directory.
ModelBinding load_model(const std::string& manifest_path);

struct CheckReport {
  struct Item {
    std::string mark;
    std::string verdict;  // pass | fail | unsupported
    double value = 0;
    bool passed = false;
  };
  std::vector<Item> items;
  bool passed = true;

  std::string to_text() const;
};

CheckReport check(const Specification& spec, const ModelBinding& model,
                  SimilarityMode mode = SimilarityMode::Inf);

/// Appends a FormulaConstraint for `sign`; an identical existing
/// constraint is left alone and *duplicate set instead.
Specification integrate(const Specification& spec, const std::string& sign,
                        const Formula& formula, double lambda,
                        bool* duplicate = nullptr);

/// Limit of the named diagram under the model binding.
FiniteView query(const Specification& spec, const ModelBinding& model,
                 const std::string& diagram);

}  // namespace lukas
