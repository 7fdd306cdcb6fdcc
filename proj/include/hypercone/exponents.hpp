#pragma once

#include <cmath>
#include <compare>
#include <stdexcept>
#include <string>

namespace hypercone {

/// An exponent in the extended interval [1, infinity].
///
/// Infinity is a dedicated state, never a floating-point sentinel, so the
/// limiting conventions of the norm constants can be handled as exact
/// piecewise branches.
class Exponent {
 public:
  static Exponent finite(double v) {
    if (!(v >= 1.0) || !std::isfinite(v)) {
      throw std::invalid_argument("Exponent::finite: value must be a finite real >= 1, got " +
                                  std::to_string(v));
    }
    return Exponent(v, false);
  }

  static Exponent infinity() { return Exponent(0.0, true); }

  bool is_infinite() const { return infinite_; }

  /// Finite value; throws when infinite.
  double value() const {
    if (infinite_) throw std::logic_error("Exponent::value: exponent is infinite");
    return value_;
  }

  /// 1/p with the convention 1/inf = 0.
  double reciprocal() const { return infinite_ ? 0.0 : 1.0 / value_; }

  /// Holder conjugate p' = p/(p-1); maps 1 <-> infinity.
  Exponent conjugate() const {
    if (infinite_) return finite(1.0);
    if (value_ == 1.0) return infinity();
    return finite(value_ / (value_ - 1.0));
  }

  bool operator==(const Exponent& o) const {
    return infinite_ == o.infinite_ && (infinite_ || value_ == o.value_);
  }

  /// Order by the natural order of [1, inf]; equivalently reverse order of 1/p.
  bool operator<=(const Exponent& o) const { return reciprocal() >= o.reciprocal(); }

  std::string str() const { return infinite_ ? "inf" : std::to_string(value_); }

 private:
  Exponent(double v, bool inf) : value_(v), infinite_(inf) {}
  double value_;
  bool infinite_;
};

/// An admissible pair 1 <= p <= q <= infinity.
struct ExponentPair {
  Exponent p;
  Exponent q;

  ExponentPair(Exponent p_, Exponent q_) : p(p_), q(q_) {
    if (!(p <= q)) throw std::invalid_argument("ExponentPair: requires p <= q");
  }

  static ExponentPair of(double p_, double q_) {
    return ExponentPair(Exponent::finite(p_), Exponent::finite(q_));
  }

  static ExponentPair to_infinity(double p_) {
    return ExponentPair(Exponent::finite(p_), Exponent::infinity());
  }

  /// 1/p - 1/q >= 0.
  double reciprocal_gap() const { return p.reciprocal() - q.reciprocal(); }

  /// Pairs with |1/p - 1/q| below resolution are treated as p = q.
  bool effectively_equal() const { return reciprocal_gap() < 1e-15; }

  /// Dual pair (q', p'); valid since q' <= p'.
  ExponentPair dual() const { return ExponentPair(q.conjugate(), p.conjugate()); }
};

}  // namespace hypercone
