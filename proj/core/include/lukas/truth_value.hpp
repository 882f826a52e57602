#pragma once

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace lukas {

/// Base class for all errors raised by the library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two values with different resolutions were combined.
struct resolution_mismatch : error {
  using error::error;
};

/// An exact truth value k/n in the (n+1)-valued fragment S_n.
///
/// The denominator n is the resolution of the logic; all connectives on
/// values sharing a denominator stay inside S_n, so no rounding ever
/// happens here.
class TruthValue {
public:
  TruthValue() : num_(0), den_(1) {}
  TruthValue(long num, long den);

  static TruthValue zero(long den) { return TruthValue(0, den); }
  static TruthValue one(long den) { return TruthValue(den, den); }

  long numerator() const { return num_; }
  long denominator() const { return den_; }
  double to_double() const { return double(num_) / double(den_); }

  /// Accepts "k/n", "0", "1" or a decimal in [0,1]; decimals are snapped
  /// to the nearest grid point of S_den.
  static TruthValue parse(const std::string& text, long den);
  std::string to_string() const;

  bool operator==(const TruthValue& o) const {
    return num_ * o.den_ == o.num_ * den_;
  }
  bool operator!=(const TruthValue& o) const { return !(*this == o); }
  bool operator<(const TruthValue& o) const {
    return num_ * o.den_ < o.num_ * den_;
  }
  bool operator<=(const TruthValue& o) const { return !(o < *this); }

private:
  long num_;
  long den_;
};

TruthValue fusion(TruthValue x, TruthValue y);      // x (*) y = max(0, x+y-1)
TruthValue residuum(TruthValue x, TruthValue y);    // x => y = min(1, 1-x+y)
TruthValue strong_sum(TruthValue x, TruthValue y);  // x (+) y = min(1, x+y)
TruthValue negation(TruthValue x);                  // 1 - x
TruthValue meet(TruthValue x, TruthValue y);        // min
TruthValue join(TruthValue x, TruthValue y);        // max
TruthValue biconditional(TruthValue x, TruthValue y);  // 1 - |x-y|

/// Connectives on raw numerators, for tight table loops.
namespace ops {
inline long fuse(long a, long b, long n) { return std::max(0L, a + b - n); }
inline long residuum(long a, long b, long n) { return std::min(n, n - a + b); }
inline long osum(long a, long b, long n) { return std::min(n, a + b); }
inline long neg(long a, long n) { return n - a; }
inline long bicond(long a, long b, long n) { return n - std::abs(a - b); }
}  // namespace ops

}  // namespace lukas
