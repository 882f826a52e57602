#pragma once

#include "lukas/formula.hpp"
#include "lukas/network.hpp"
#include "lukas/neuron.hpp"

namespace lukas {

/// Rewrites min/max through divisibility x*(x->y) and its dual, leaving
/// only *, +, ->, ~ and the constants.
Formula drop_lattice_operations(const Formula& f);

/// Propagates the constants 0 and 1 until only a constant root or a
/// constant-free formula remains.
Formula fold_constants(const Formula& f);

/// Compiles a formula into a crisp network whose forward pass matches
/// eval_formula on every grid point. min/max are rewritten through
/// divisibility (x*(x->y)) and its dual first.
CastroNetwork formula_to_network(const Formula& f);

struct Translation {
  Formula formula;
  double lambda = 1.0;  // exp-similarity to the network on the S_n grid
};

/// Translates a crisp network bottom-up, approximating neurons that
/// are not conjunctions or disjunctions by their best rule-R cascade.
Translation network_to_formula(const CastroNetwork& net, long n,
                               size_t output = 0);

}  // namespace lukas
