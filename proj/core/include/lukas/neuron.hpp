#pragma once

#include <string>
#include <vector>

#include "lukas/formula.hpp"
#include "lukas/truth_table.hpp"

namespace lukas {

/// One crisp neuron: psi_bias(sum of signed inputs). Weight-0 inputs
/// are dropped on construction.
struct NeuronConfig {
  std::vector<std::string> inputs;
  std::vector<int> weights;  // each -1 or +1, aligned with inputs
  long bias = 0;

  NeuronConfig() = default;
  NeuronConfig(std::vector<std::string> names, std::vector<int> ws, long b);

  int neg_count() const;
  int pos_count() const;

  /// psi_bias applied to the signed sum at a grid point (numerators).
  long eval_num(const std::vector<long>& point, long n) const;
  TruthTable table(long n) const;
  std::string to_string() const;
};

enum class NeuronClass {
  Conjunction, Disjunction, Constant0, Constant1, Unrepresentable
};

/// Constant1 iff b >= n+1; Constant0 iff b <= -p; Conjunction iff
/// b = -p+1; Disjunction iff b = n; otherwise unrepresentable
/// (n = negative-weight count, p = positive-weight count).
NeuronClass classify_neuron(const NeuronConfig& c);

/// Fusion chain for conjunctions, bounded-sum chain for disjunctions,
/// negated literals first.
Formula neuron_to_formula(const NeuronConfig& c);

/// All binary cascades reachable by repeatedly moving one input to an
/// outer binary neuron under the bias split b = b0 + b1, b1 <= b0, with
/// both sub-neurons non-constant; duplicates removed by truth-table
/// equality at resolution n.
std::vector<Formula> rule_r_expansions(const NeuronConfig& c, long n);

bool is_representable(const NeuronConfig& c, long n);

struct Approximation {
  Formula formula;
  double lambda = 1.0;
};

/// Best exponential-similarity match among the rule-R cascades; ties
/// broken by fewer connectives, then lexicographic printout.
Approximation best_representable_approx(const NeuronConfig& c, long n);

}  // namespace lukas
