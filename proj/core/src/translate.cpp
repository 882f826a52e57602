#include "lukas/translate.hpp"

#include <cmath>
#include <functional>
#include <map>

namespace lukas {

namespace {

using Kind = Formula::Kind;

}  // namespace

Formula drop_lattice_operations(const Formula& f) {
  std::function<Formula(const Formula::NodePtr&)> go =
      [&](const Formula::NodePtr& n) -> Formula {
    switch (n->kind) {
      case Kind::Var: return Formula::var(n->name);
      case Kind::Zero: return Formula::zero();
      case Kind::One: return Formula::one();
      case Kind::Neg: return Formula::neg(go(n->left));
      case Kind::Fusion: return Formula::fuse(go(n->left), go(n->right));
      case Kind::StrongSum: return Formula::osum(go(n->left), go(n->right));
      case Kind::Implies: return Formula::implies(go(n->left), go(n->right));
      case Kind::Meet: {
        Formula a = go(n->left), b = go(n->right);
        return Formula::fuse(a, Formula::implies(a, b));
      }
      case Kind::Join: {
        Formula a = go(n->left), b = go(n->right);
        return Formula::implies(Formula::implies(a, b), b);
      }
    }
    throw error("corrupt formula node");
  };
  return go(f.root());
}

Formula fold_constants(const Formula& f) {
  std::function<Formula(const Formula::NodePtr&)> go =
      [&](const Formula::NodePtr& n) -> Formula {
    switch (n->kind) {
      case Kind::Var: return Formula::var(n->name);
      case Kind::Zero: return Formula::zero();
      case Kind::One: return Formula::one();
      case Kind::Neg: {
        Formula a = go(n->left);
        if (a.kind() == Kind::Zero) return Formula::one();
        if (a.kind() == Kind::One) return Formula::zero();
        return Formula::neg(a);
      }
      case Kind::Fusion: {
        Formula a = go(n->left), b = go(n->right);
        if (a.kind() == Kind::Zero || b.kind() == Kind::Zero)
          return Formula::zero();
        if (a.kind() == Kind::One) return b;
        if (b.kind() == Kind::One) return a;
        return Formula::fuse(a, b);
      }
      case Kind::StrongSum: {
        Formula a = go(n->left), b = go(n->right);
        if (a.kind() == Kind::One || b.kind() == Kind::One)
          return Formula::one();
        if (a.kind() == Kind::Zero) return b;
        if (b.kind() == Kind::Zero) return a;
        return Formula::osum(a, b);
      }
      case Kind::Implies: {
        Formula a = go(n->left), b = go(n->right);
        if (a.kind() == Kind::Zero || b.kind() == Kind::One)
          return Formula::one();
        if (a.kind() == Kind::One) return b;
        if (b.kind() == Kind::Zero) return Formula::neg(a);
        return Formula::implies(a, b);
      }
      default:
        throw error("lattice operator survived rewriting");
    }
  };
  return go(f.root());
}

namespace {

struct Neuron {
  std::vector<std::pair<int, int>> conns;  // (index in layer below, weight)
  long bias = 0;
};

struct Wire {
  int layer;  // -1 = network input
  int index;
};

struct Compiler {
  std::vector<std::string> vars;
  std::vector<std::vector<Neuron>> layers;
  std::map<std::string, int> var_index;
  // Cache of pass-through copies: (layer, index) -> copy in layer+1.
  std::map<std::pair<int, int>, int> lifted;

  int add_neuron(int layer, Neuron n) {
    if (int(layers.size()) <= layer) layers.resize(size_t(layer) + 1);
    layers[size_t(layer)].push_back(std::move(n));
    return int(layers[size_t(layer)].size()) - 1;
  }

  Wire lift(Wire w, int to_layer) {
    while (w.layer < to_layer) {
      auto key = std::make_pair(w.layer, w.index);
      auto it = lifted.find(key);
      if (it != lifted.end()) {
        w = {w.layer + 1, it->second};
        continue;
      }
      int idx = add_neuron(w.layer + 1, Neuron{{{w.index, 1}}, 0});
      lifted.emplace(key, idx);
      w = {w.layer + 1, idx};
    }
    return w;
  }

  struct Signal {
    Wire wire;
    int sign;
  };

  Signal compile(const Formula::NodePtr& n) {
    switch (n->kind) {
      case Kind::Var:
        return {{-1, var_index.at(n->name)}, 1};
      case Kind::Neg: {
        Signal s = compile(n->left);
        s.sign = -s.sign;
        return s;
      }
      case Kind::Fusion:
      case Kind::StrongSum:
      case Kind::Implies: {
        Signal l = compile(n->left);
        Signal r = compile(n->right);
        if (l.wire.layer == r.wire.layer && l.wire.index == r.wire.index) {
          // Both operands are the same signal; give the right one its own
          // slot so the connection weights stay in {-1, 0, 1}.
          if (r.wire.layer < 0) {
            r.wire = {0, add_neuron(0, Neuron{{{r.wire.index, 1}}, 0})};
          } else {
            Neuron copy = layers[size_t(r.wire.layer)][size_t(r.wire.index)];
            r.wire.index = add_neuron(r.wire.layer, std::move(copy));
          }
        }
        bool disj = n->kind != Kind::Fusion;
        if (n->kind == Kind::Implies) l.sign = -l.sign;
        int layer = std::max(l.wire.layer, r.wire.layer) + 1;
        l.wire = lift(l.wire, layer - 1);
        r.wire = lift(r.wire, layer - 1);
        Neuron neuron;
        neuron.conns = {{l.wire.index, l.sign}, {r.wire.index, r.sign}};
        long pos = (l.sign > 0) + (r.sign > 0);
        long neg = 2 - pos;
        neuron.bias = disj ? neg : -pos + 1;
        return {{layer, add_neuron(layer, neuron)}, 1};
      }
      default:
        throw error("constant survived folding");
    }
  }
};

}  // namespace

CastroNetwork formula_to_network(const Formula& f) {
  Formula g = fold_constants(drop_lattice_operations(f));
  CastroNetwork net;
  net.input_names = f.variables();
  net.crisp = true;

  Compiler comp;
  comp.vars = net.input_names;
  for (size_t i = 0; i < comp.vars.size(); ++i)
    comp.var_index[comp.vars[i]] = int(i);

  if (g.kind() == Kind::Zero || g.kind() == Kind::One) {
    CastroNetwork::Layer l;
    l.weights = Eigen::MatrixXd::Zero(1, long(net.input_arity()));
    l.biases = Eigen::VectorXd::Constant(1, g.kind() == Kind::One ? 1 : 0);
    net.layers.push_back(std::move(l));
    return net;
  }

  Compiler::Signal out = comp.compile(g.root());
  if (out.wire.layer < 0) {
    // Bare literal: a single identity (or inverter) neuron.
    Neuron n;
    n.conns = {{out.wire.index, out.sign}};
    n.bias = out.sign < 0 ? 1 : 0;
    out.wire = {0, comp.add_neuron(0, n)};
  } else if (out.sign < 0) {
    Neuron n;
    n.conns = {{out.wire.index, -1}};
    n.bias = 1;
    out.wire = {out.wire.layer + 1,
                comp.add_neuron(out.wire.layer + 1, n)};
  }

  long width = long(net.input_arity());
  for (const auto& layer : comp.layers) {
    CastroNetwork::Layer l;
    l.weights = Eigen::MatrixXd::Zero(long(layer.size()), width);
    l.biases = Eigen::VectorXd::Zero(long(layer.size()));
    for (size_t j = 0; j < layer.size(); ++j) {
      for (const auto& [idx, w] : layer[j].conns)
        l.weights(long(j), idx) += w;
      l.biases(long(j)) = double(layer[j].bias);
    }
    width = long(layer.size());
    net.layers.push_back(std::move(l));
  }
  net.validate();
  return net;
}

Translation network_to_formula(const CastroNetwork& net, long n,
                               size_t output) {
  net.validate();
  if (!net.crisp) throw error("translation requires a crisp network");
  std::vector<Formula> signals;
  for (const auto& name : net.input_names) signals.push_back(Formula::var(name));
  for (const auto& layer : net.layers) {
    std::vector<Formula> next;
    for (long j = 0; j < layer.weights.rows(); ++j) {
      long bias = std::lround(layer.biases(j));
      std::vector<std::string> names;
      std::vector<int> weights;
      std::map<std::string, Formula> operands;
      for (long c = 0; c < layer.weights.cols(); ++c) {
        int w = int(std::lround(layer.weights(j, c)));
        if (w == 0) continue;
        const Formula& op = signals[size_t(c)];
        // Constant operands shift the bias instead of adding a wire.
        if (op.kind() == Kind::Zero) continue;
        if (op.kind() == Kind::One) {
          bias += w;
          continue;
        }
        std::string placeholder = "@" + std::to_string(names.size());
        names.push_back(placeholder);
        weights.push_back(w);
        operands.emplace(placeholder, op);
      }
      NeuronConfig cfg(names, weights, bias);
      NeuronClass cls = classify_neuron(cfg);
      if (cls == NeuronClass::Constant0 || names.empty()) {
        next.push_back(bias >= 1 ? Formula::one() : Formula::zero());
        continue;
      }
      if (cls == NeuronClass::Constant1) {
        next.push_back(Formula::one());
        continue;
      }
      Formula shape = cls == NeuronClass::Unrepresentable
                          ? best_representable_approx(cfg, n).formula
                          : neuron_to_formula(cfg);
      next.push_back(shape.substitute(operands));
    }
    signals = std::move(next);
  }
  Formula result = signals.at(output);
  TruthTable actual = network_table(net, n, output);
  TruthTable predicted = table_over(result, net.input_names, n);
  return {result, exp_similarity(predicted, actual)};
}

}  // namespace lukas
