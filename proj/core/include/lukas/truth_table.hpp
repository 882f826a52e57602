#pragma once

#include <string>
#include <vector>

#include "lukas/formula.hpp"
#include "lukas/truth_value.hpp"

namespace lukas {

enum class SimilarityMode { Exp, Inf, And };

SimilarityMode parse_similarity_mode(const std::string& name);

/// Exhaustive value table of a function over the grid {0,1/n,...,1}^m.
///
/// Entries are stored as numerators at resolution n, row-major with the
/// first variable varying slowest.
struct TruthTable {
  std::vector<std::string> variables;
  long n = 1;
  std::vector<long> entries;

  size_t size() const { return entries.size(); }
  /// Grid point for flat index i, as numerators per variable.
  std::vector<long> point(size_t i) const;

  bool operator==(const TruthTable& o) const = default;
};

TruthTable truth_subtable(const Formula& f, long n);

/// Table of f over an explicitly fixed variable ordering; f need not
/// mention every listed variable.
TruthTable table_over(const Formula& f, const std::vector<std::string>& vars,
                      long n);

/// e^(-mean |a-b|); 1 exactly when the tables agree.
double exp_similarity(const TruthTable& a, const TruthTable& b);

/// Exp mode as above; Inf = min over entries of 1-|a-b|;
/// And = fusion-fold over entries of 1-|a-b|.
double similarity(const TruthTable& a, const TruthTable& b,
                  SimilarityMode mode);

}  // namespace lukas
