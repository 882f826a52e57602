#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lukas/finite_view.hpp"

namespace lukas {

/// A graph of views: nodes carry finite supports (with an optional
/// similarity relation; absent means the crisp identity) and arrows are
/// views whose attribute names are node names.
struct MultiDiagram {
  struct Node {
    std::string name;
    std::vector<std::string> domain;
    std::optional<OmegaSet> similarity;
  };
  struct Arrow {
    std::string name;
    FiniteView view;
  };

  long n = 1;
  std::vector<Node> nodes;
  std::vector<Arrow> arrows;
  std::vector<std::string> input_nodes;  // s(D)

  const Node& node(const std::string& name) const;
  void validate() const;
};

/// Fusion-product of all arrow relations over the joint assignment of
/// node values; input attributes of the result are s(D), the remaining
/// nodes become outputs.
FiniteView limit(const MultiDiagram& d);

struct CheckResult {
  bool passed;
  double value;
};

/// Compares the join-projection of the limit onto s(D) with the same
/// projection of the node-similarity product.
CheckResult lambda_commutative(const MultiDiagram& d, double lambda,
                               SimilarityMode mode = SimilarityMode::Inf);

/// similarity(r, limit(d)) under the chosen mode, compared with lambda.
CheckResult lambda_limit_check(const FiniteView& r, const MultiDiagram& d,
                               double lambda,
                               SimilarityMode mode = SimilarityMode::Inf);

}  // namespace lukas
