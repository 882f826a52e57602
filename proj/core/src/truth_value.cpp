#include "lukas/truth_value.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace lukas {

TruthValue::TruthValue(long num, long den) : num_(num), den_(den) {
  if (den < 1) throw error("truth value denominator must be >= 1");
  if (num < 0 || num > den)
    throw error("truth value " + std::to_string(num) + "/" +
                std::to_string(den) + " outside [0,1]");
}

static long require_same_den(const TruthValue& x, const TruthValue& y) {
  if (x.denominator() != y.denominator())
    throw resolution_mismatch("combined values with resolutions " +
                              std::to_string(x.denominator()) + " and " +
                              std::to_string(y.denominator()));
  return x.denominator();
}

TruthValue fusion(TruthValue x, TruthValue y) {
  long n = require_same_den(x, y);
  return TruthValue(ops::fuse(x.numerator(), y.numerator(), n), n);
}

TruthValue residuum(TruthValue x, TruthValue y) {
  long n = require_same_den(x, y);
  return TruthValue(ops::residuum(x.numerator(), y.numerator(), n), n);
}

TruthValue strong_sum(TruthValue x, TruthValue y) {
  long n = require_same_den(x, y);
  return TruthValue(ops::osum(x.numerator(), y.numerator(), n), n);
}

TruthValue negation(TruthValue x) {
  return TruthValue(ops::neg(x.numerator(), x.denominator()),
                    x.denominator());
}

TruthValue meet(TruthValue x, TruthValue y) {
  long n = require_same_den(x, y);
  return TruthValue(std::min(x.numerator(), y.numerator()), n);
}

TruthValue join(TruthValue x, TruthValue y) {
  long n = require_same_den(x, y);
  return TruthValue(std::max(x.numerator(), y.numerator()), n);
}

TruthValue biconditional(TruthValue x, TruthValue y) {
  long n = require_same_den(x, y);
  return TruthValue(ops::bicond(x.numerator(), y.numerator(), n), n);
}

TruthValue TruthValue::parse(const std::string& text, long den) {
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    long k = std::stol(text.substr(0, slash));
    long d = std::stol(text.substr(slash + 1));
    if (d <= 0) throw error("bad denominator in '" + text + "'");
    // Rescale k/d onto the session grid; must land exactly on it.
    if ((k * den) % d != 0)
      throw error("value '" + text + "' is not on the 1/" +
                  std::to_string(den) + " grid");
    return TruthValue(k * den / d, den);
  }
  size_t pos = 0;
  double v = std::stod(text, &pos);
  if (pos != text.size()) throw error("bad truth value '" + text + "'");
  if (v < -1e-9 || v > 1 + 1e-9)
    throw error("truth value '" + text + "' outside [0,1]");
  long k = std::lround(v * double(den));
  k = std::clamp(k, 0L, den);
  return TruthValue(k, den);
}

std::string TruthValue::to_string() const {
  if (num_ == 0) return "0";
  if (num_ == den_) return "1";
  long g = std::gcd(num_, den_);
  return std::to_string(num_ / g) + "/" + std::to_string(den_ / g);
}

}  // namespace lukas
