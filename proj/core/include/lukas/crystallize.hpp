#pragma once

#include "lukas/network.hpp"

namespace lukas {

/// Smooth crystallization:
///   sign(w) * ((cos((1 - frac(|w|)) * pi/2))^exponent + floor(|w|)).
/// Integers are exact fixed points; fractional parts are pulled toward
/// the nearest integer (except the unstable point at 1/2 for even
/// exponents).
double soft_crystallize(double w, int exponent);

/// Applies soft_crystallize to every weight and bias.
CastroNetwork soft_crystallize(const CastroNetwork& net, int exponent);

/// Total distance of weights and biases from the nearest integer.
/// With literal_frac = true uses the fractional part w - floor(w)
/// instead (the non-monotone variant).
double representation_error(const CastroNetwork& net,
                            bool literal_frac = false);

/// Rounds biases to integers and weights to the nearest of {-1,0,1}
/// (values beyond +-1 are clamped) and marks the network crisp.
CastroNetwork crisp_crystallize(const CastroNetwork& net);

}  // namespace lukas
