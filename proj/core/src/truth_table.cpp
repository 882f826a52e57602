#include "lukas/truth_table.hpp"

#include <cmath>
#include <cstdlib>

namespace lukas {

SimilarityMode parse_similarity_mode(const std::string& name) {
  if (name == "exp") return SimilarityMode::Exp;
  if (name == "inf") return SimilarityMode::Inf;
  if (name == "and") return SimilarityMode::And;
  throw error("unknown similarity mode '" + name + "'");
}

std::vector<long> TruthTable::point(size_t i) const {
  std::vector<long> coords(variables.size());
  size_t rest = i;
  for (size_t v = variables.size(); v-- > 0;) {
    coords[v] = long(rest % size_t(n + 1));
    rest /= size_t(n + 1);
  }
  return coords;
}

TruthTable truth_subtable(const Formula& f, long n) {
  return table_over(f, f.variables(), n);
}

TruthTable table_over(const Formula& f, const std::vector<std::string>& vars,
                      long n) {
  if (n < 1) throw error("resolution must be >= 1");
  TruthTable t;
  t.variables = vars;
  t.n = n;
  size_t m = t.variables.size();
  size_t total = 1;
  for (size_t v = 0; v < m; ++v) total *= size_t(n + 1);
  t.entries.reserve(total);
  std::map<std::string, TruthValue> assignment;
  for (size_t i = 0; i < total; ++i) {
    auto coords = t.point(i);
    for (size_t v = 0; v < m; ++v)
      assignment.insert_or_assign(t.variables[v], TruthValue(coords[v], n));
    TruthValue val = f.eval(assignment);
    // Closed formulas evaluate at resolution 1; rescale onto the grid.
    t.entries.push_back(val.numerator() * n / val.denominator());
  }
  return t;
}

static void check_shape(const TruthTable& a, const TruthTable& b) {
  if (a.variables != b.variables || a.n != b.n ||
      a.entries.size() != b.entries.size())
    throw error("truth tables have different shapes");
}

double exp_similarity(const TruthTable& a, const TruthTable& b) {
  check_shape(a, b);
  long total = 0;
  for (size_t i = 0; i < a.entries.size(); ++i)
    total += std::abs(a.entries[i] - b.entries[i]);
  if (total == 0) return 1.0;
  double mean = double(total) / (double(a.n) * double(a.entries.size()));
  return std::exp(-mean);
}

double similarity(const TruthTable& a, const TruthTable& b,
                  SimilarityMode mode) {
  if (mode == SimilarityMode::Exp) return exp_similarity(a, b);
  check_shape(a, b);
  if (mode == SimilarityMode::Inf) {
    long worst = 0;
    for (size_t i = 0; i < a.entries.size(); ++i)
      worst = std::max(worst, std::abs(a.entries[i] - b.entries[i]));
    return double(a.n - worst) / double(a.n);
  }
  long total = 0;  // fusion-fold: max(0, n - sum of diffs), exact in S_n
  for (size_t i = 0; i < a.entries.size(); ++i)
    total += std::abs(a.entries[i] - b.entries[i]);
  return double(std::max(0L, a.n - total)) / double(a.n);
}

}  // namespace lukas
