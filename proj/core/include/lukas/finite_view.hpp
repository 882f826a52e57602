#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lukas/truth_table.hpp"
#include "lukas/truth_value.hpp"

namespace lukas {

struct Attribute {
  std::string name;
  std::vector<std::string> domain;
  bool operator==(const Attribute&) const = default;
};

/// A finite relation with named input and output attributes, valued in
/// S_n. Storage is sparse: tuples not present have value 0.
class FiniteView {
public:
  FiniteView() = default;
  FiniteView(std::vector<Attribute> inputs, std::vector<Attribute> outputs,
             long n);

  const std::vector<Attribute>& inputs() const { return inputs_; }
  const std::vector<Attribute>& outputs() const { return outputs_; }
  const std::vector<Attribute>& attributes() const { return all_; }
  long resolution() const { return n_; }

  /// Tuple components follow attribute order (inputs then outputs).
  void set(const std::vector<std::string>& tuple, TruthValue v);
  TruthValue at(const std::vector<std::string>& tuple) const;
  TruthValue at_named(const std::map<std::string, std::string>& assign) const;

  const std::map<std::vector<std::string>, TruthValue>& entries() const {
    return entries_;
  }

  /// Same attribute multiset (order-insensitive) and resolution.
  bool same_attributes(const FiniteView& o) const;
  /// Entrywise equality, matching attributes by name.
  bool same_entries(const FiniteView& o) const;

  /// Every tuple of the full domain grid, in lexicographic order.
  std::vector<std::vector<std::string>> grid() const;

private:
  void check_tuple(const std::vector<std::string>& tuple) const;
  std::vector<Attribute> inputs_, outputs_, all_;
  long n_ = 1;
  std::map<std::vector<std::string>, TruthValue> entries_;
};

/// Cartesian product of attribute domains, lexicographic.
std::vector<std::vector<std::string>> domain_grid(
    const std::vector<Attribute>& attrs);

/// Tensor composition: join on the output attributes of `r` that are
/// input attributes of `g`, combine with fusion, aggregate the shared
/// attributes away with the bounded sum.
FiniteView compose(const FiniteView& r, const FiniteView& g);

enum class Side { Inputs, Outputs };

/// Bounded-sum fold over the discarded side; `keep` names the side
/// retained in the result.
FiniteView project(const FiniteView& r, Side keep);

/// Conditional view R(_|a): projection(a) => R(a,_), dense over the
/// output domains. A zero projection yields the all-ones view and sets
/// *degenerate when provided.
FiniteView conditional(const FiniteView& r,
                       const std::vector<std::string>& fixed_inputs,
                       bool* degenerate = nullptr);

/// True iff r (x) g and g (x) r exist, have the same attributes and are
/// entrywise equal.
bool independent(const FiniteView& r, const FiniteView& g);

/// Similarity between two views over their full domain grid.
double view_similarity(const FiniteView& a, const FiniteView& b,
                       SimilarityMode mode);

/// A support set with an equality degree (similarity-style) relation.
struct OmegaSet {
  std::string tag;  // prefix used when forming disjoint unions
  std::vector<std::string> support;
  long n = 1;
  std::map<std::pair<std::string, std::string>, TruthValue> eq;

  TruthValue at(const std::string& a, const std::string& b) const;
  void set(const std::string& a, const std::string& b, TruthValue v);
  static OmegaSet identity(std::string tag, std::vector<std::string> support,
                           long n);
};

/// Relation on the tagged disjoint union: R(a,a') = [a=a']_alpha (+)
/// [a=a']_beta, with 0 off-support.
FiniteView coproduct(const OmegaSet& alpha, const OmegaSet& beta);

/// Parallel-pair coequalizer on A || B, evaluated clause by clause:
///   (+)_{b,b' in B} f(a,b)(+)f(a',b')(+)[b=b']_beta
///   (+) the same for g
///   (+) (+)_{b,b' in A} f(b,a)(+)g(b',a')(+)[b=b']_alpha
///   (+) [a=a']_alpha (+) [a=a']_beta
FiniteView coequalize(const FiniteView& f, const FiniteView& g,
                      const OmegaSet& alpha, const OmegaSet& beta);

/// \/_{b0,b1} (+)_a alpha(a,a) (x) t(a,b0) (x) h(a,b1) (x) beta(b0,b1)
TruthValue power_similarity(const OmegaSet& alpha, const OmegaSet& beta,
                            const FiniteView& t, const FiniteView& h);

/// Reflexivity, symmetry and fusion-transitivity, exhaustively.
bool is_similarity(const FiniteView& gamma);

/// (x)-fold over a0,a1,b of (R(a0,b) (x) R(a1,b) => Gamma(a0,a1)).
TruthValue is_a_check(const FiniteView& r, const FiniteView& gamma);

/// (x)_b (+)_a R(a,b) = 1.
bool is_epi(const FiniteView& r);

}  // namespace lukas
