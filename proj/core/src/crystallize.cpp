#include "lukas/crystallize.hpp"

#include <algorithm>
#include <cmath>

namespace lukas {

double soft_crystallize(double w, int exponent) {
  if (w == 0.0) return 0.0;
  double a = std::abs(w);
  double fl = std::floor(a);
  double frac = a - fl;
  double contracted = std::pow(std::cos((1.0 - frac) * M_PI / 2.0), exponent);
  double result = contracted + fl;
  return w < 0 ? -result : result;
}

CastroNetwork soft_crystallize(const CastroNetwork& net, int exponent) {
  CastroNetwork out = net;
  for (auto& layer : out.layers) {
    for (long r = 0; r < layer.weights.rows(); ++r)
      for (long c = 0; c < layer.weights.cols(); ++c)
        layer.weights(r, c) = soft_crystallize(layer.weights(r, c), exponent);
    for (long r = 0; r < layer.biases.size(); ++r)
      layer.biases(r) = soft_crystallize(layer.biases(r), exponent);
  }
  return out;
}

namespace {

double integer_distance(double w, bool literal_frac) {
  if (literal_frac) return w - std::floor(w);
  return std::abs(w - std::round(w));
}

}  // namespace

double representation_error(const CastroNetwork& net, bool literal_frac) {
  double total = 0;
  for (const auto& layer : net.layers) {
    for (long r = 0; r < layer.weights.rows(); ++r)
      for (long c = 0; c < layer.weights.cols(); ++c)
        total += integer_distance(layer.weights(r, c), literal_frac);
    for (long r = 0; r < layer.biases.size(); ++r)
      total += integer_distance(layer.biases(r), literal_frac);
  }
  return total;
}

CastroNetwork crisp_crystallize(const CastroNetwork& net) {
  CastroNetwork out = net;
  for (auto& layer : out.layers) {
    for (long r = 0; r < layer.weights.rows(); ++r)
      for (long c = 0; c < layer.weights.cols(); ++c) {
        double w = std::round(layer.weights(r, c));
        layer.weights(r, c) = std::clamp(w, -1.0, 1.0);
      }
    for (long r = 0; r < layer.biases.size(); ++r)
      layer.biases(r) = std::round(layer.biases(r));
  }
  out.crisp = true;
  return out;
}

}  // namespace lukas
