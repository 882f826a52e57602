#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "lukas/truth_table.hpp"

namespace lukas {

/// Layered network with the truncated-identity activation
/// psi(x) = min(1, max(0, x)). While training weights are free reals;
/// a crisp network has weights in {-1,0,1} and integer biases.
struct CastroNetwork {
  struct Layer {
    Eigen::MatrixXd weights;  // rows = neurons, cols = previous width
    Eigen::VectorXd biases;
  };

  std::vector<std::string> input_names;
  std::vector<Layer> layers;
  bool crisp = false;

  size_t input_arity() const { return input_names.size(); }
  size_t output_arity() const {
    return layers.empty() ? input_names.size()
                          : size_t(layers.back().weights.rows());
  }

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;
  std::vector<double> forward(const std::vector<double>& x) const;

  /// Throws when the layer shapes disagree or the crisp flag lies.
  void validate() const;

  std::string to_json() const;
  static CastroNetwork from_json(const std::string& text);
  void save(const std::string& path) const;
  static CastroNetwork load(const std::string& path);
};

double truncate01(double x);

/// Value table of one network output over the full S_n input grid,
/// in the same order as truth_subtable. Requires a crisp network so
/// entries are exact grid points.
TruthTable network_table(const CastroNetwork& net, long n,
                         size_t output = 0);

/// Sum of squared errors of the network on rows (xs[i] -> ys[i]).
double network_sse(const CastroNetwork& net,
                   const std::vector<std::vector<double>>& xs,
                   const std::vector<std::vector<double>>& ys);

}  // namespace lukas
