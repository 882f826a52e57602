#include "lukas/neuron.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace lukas {

NeuronConfig::NeuronConfig(std::vector<std::string> names,
                           std::vector<int> ws, long b)
    : bias(b) {
  if (names.size() != ws.size())
    throw error("neuron weight/input count mismatch");
  for (size_t i = 0; i < ws.size(); ++i) {
    if (ws[i] == 0) continue;
    if (ws[i] != 1 && ws[i] != -1)
      throw error("crisp neuron weights must be -1, 0 or 1");
    inputs.push_back(names[i]);
    weights.push_back(ws[i]);
  }
}

int NeuronConfig::neg_count() const {
  return int(std::count(weights.begin(), weights.end(), -1));
}

int NeuronConfig::pos_count() const {
  return int(std::count(weights.begin(), weights.end(), 1));
}

long NeuronConfig::eval_num(const std::vector<long>& point, long n) const {
  long s = bias * n;
  for (size_t i = 0; i < weights.size(); ++i) s += weights[i] * point[i];
  return std::clamp(s, 0L, n);
}

TruthTable NeuronConfig::table(long n) const {
  TruthTable t;
  t.variables = inputs;
  t.n = n;
  size_t total = 1;
  for (size_t v = 0; v < inputs.size(); ++v) total *= size_t(n + 1);
  t.entries.reserve(total);
  for (size_t i = 0; i < total; ++i) {
    t.entries.push_back(0);
    t.entries.back() = eval_num(t.point(i), n);
  }
  return t;
}

std::string NeuronConfig::to_string() const {
  std::ostringstream out;
  out << "psi_" << bias << "(";
  for (size_t i = 0; i < inputs.size(); ++i) {
    if (i) out << ",";
    if (weights[i] < 0) out << "-";
    out << inputs[i];
  }
  out << ")";
  return out.str();
}

NeuronClass classify_neuron(const NeuronConfig& c) {
  long neg = c.neg_count(), pos = c.pos_count();
  if (c.bias >= neg + 1) return NeuronClass::Constant1;
  if (c.bias <= -pos) return NeuronClass::Constant0;
  if (c.bias == -pos + 1) return NeuronClass::Conjunction;
  if (c.bias == neg) return NeuronClass::Disjunction;
  return NeuronClass::Unrepresentable;
}

Formula neuron_to_formula(const NeuronConfig& c) {
  NeuronClass cls = classify_neuron(c);
  if (cls != NeuronClass::Conjunction && cls != NeuronClass::Disjunction)
    throw error("neuron " + c.to_string() +
                " is not a conjunction or disjunction");
  std::vector<Formula> literals;
  for (size_t i = 0; i < c.inputs.size(); ++i)
    if (c.weights[i] < 0) literals.push_back(Formula::neg(Formula::var(c.inputs[i])));
  for (size_t i = 0; i < c.inputs.size(); ++i)
    if (c.weights[i] > 0) literals.push_back(Formula::var(c.inputs[i]));
  Formula acc = literals[0];
  for (size_t i = 1; i < literals.size(); ++i)
    acc = cls == NeuronClass::Conjunction ? Formula::fuse(acc, literals[i])
                                          : Formula::osum(acc, literals[i]);
  return acc;
}

namespace {

struct Expander {
  long n;
  std::map<std::string, std::vector<Formula>> memo;

  static std::string key(const NeuronConfig& c) {
    std::ostringstream out;
    out << c.bias;
    for (size_t i = 0; i < c.inputs.size(); ++i)
      out << "|" << c.weights[i] << ":" << c.inputs[i];
    return out.str();
  }

  std::vector<Formula> expand(const NeuronConfig& c) {
    NeuronClass cls = classify_neuron(c);
    if (cls == NeuronClass::Constant0 || cls == NeuronClass::Constant1)
      return {};
    if (c.inputs.size() <= 2) return {neuron_to_formula(c)};
    auto k = key(c);
    auto hit = memo.find(k);
    if (hit != memo.end()) return hit->second;

    std::vector<Formula> result;
    std::set<std::vector<long>> seen;
    for (size_t moved = 0; moved < c.inputs.size(); ++moved) {
      NeuronConfig inner;
      for (size_t i = 0; i < c.inputs.size(); ++i)
        if (i != moved) {
          inner.inputs.push_back(c.inputs[i]);
          inner.weights.push_back(c.weights[i]);
        }
      long p_in = inner.pos_count(), n_in = inner.neg_count();
      // Outer neuron sees the moved literal and the inner output (+1).
      long p_out = 1 + (c.weights[moved] > 0 ? 1 : 0);
      long n_out = c.weights[moved] < 0 ? 1 : 0;
      for (long b1 = -p_out + 1; b1 <= n_out; ++b1) {
        long b0 = c.bias - b1;
        if (!(b1 <= b0)) continue;
        if (b0 < -p_in + 1 || b0 > n_in) continue;  // inner must not be constant
        inner.bias = b0;
        Formula lit = c.weights[moved] > 0
                          ? Formula::var(c.inputs[moved])
                          : Formula::neg(Formula::var(c.inputs[moved]));
        bool conj = b1 == -p_out + 1;
        for (const auto& sub : expand(inner)) {
          Formula cand = conj ? Formula::fuse(lit, sub)
                              : Formula::osum(lit, sub);
          auto entries = table_over(cand, c.inputs, n).entries;
          if (seen.insert(std::move(entries)).second)
            result.push_back(cand);
        }
      }
    }
    memo.emplace(k, result);
    return result;
  }
};

}  // namespace

std::vector<Formula> rule_r_expansions(const NeuronConfig& c, long n) {
  Expander e{n, {}};
  return e.expand(c);
}

bool is_representable(const NeuronConfig& c, long) {
  return classify_neuron(c) != NeuronClass::Unrepresentable;
}

Approximation best_representable_approx(const NeuronConfig& c, long n) {
  NeuronClass cls = classify_neuron(c);
  if (cls == NeuronClass::Constant0 || cls == NeuronClass::Constant1)
    throw error("cannot approximate the constant neuron " + c.to_string());
  if (cls != NeuronClass::Unrepresentable)
    return {neuron_to_formula(c), 1.0};
  TruthTable target = c.table(n);
  auto candidates = rule_r_expansions(c, n);
  if (candidates.empty())
    throw error("no non-constant cascade exists for " + c.to_string());
  const Formula* best = nullptr;
  double best_lambda = -1;
  for (const auto& cand : candidates) {
    TruthTable t = table_over(cand, c.inputs, n);
    t.variables = target.variables;
    double lambda = exp_similarity(t, target);
    bool better = lambda > best_lambda + 1e-12;
    if (!better && lambda > best_lambda - 1e-12 && best) {
      int cc = cand.connective_count(), bc = best->connective_count();
      better = cc < bc ||
               (cc == bc && cand.to_string() < best->to_string());
    }
    if (better) {
      best = &cand;
      best_lambda = lambda;
    }
  }
  return {*best, best_lambda};
}

}  // namespace lukas
