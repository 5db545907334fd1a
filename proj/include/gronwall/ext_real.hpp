#pragma once

#include <cmath>
#include <limits>
#include <string>

namespace gronwall {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Extended real number with measure-theoretic arithmetic: finite + inf = inf
/// and 0 * inf = 0. Values are either finite or +/-inf, never NaN.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  constexpr ExtReal(double v) : v_(v) {}  // NOLINT(google-explicit-constructor)

  static constexpr ExtReal infinity() { return ExtReal(kInf); }
  static constexpr ExtReal neg_infinity() { return ExtReal(-kInf); }

  constexpr double value() const { return v_; }
  bool is_finite() const { return std::isfinite(v_); }
  bool is_pos_inf() const { return v_ == kInf; }
  bool is_neg_inf() const { return v_ == -kInf; }

  /// Sum of two extended reals; inf + (-inf) is undefined and throws.
  friend ExtReal operator+(ExtReal x, ExtReal y);
  friend ExtReal operator-(ExtReal x, ExtReal y) { return x + ExtReal(-y.v_); }
  friend ExtReal operator-(ExtReal x) { return ExtReal(-x.v_); }
  /// 0 * inf = 0.
  friend ExtReal operator*(ExtReal x, ExtReal y);

  ExtReal& operator+=(ExtReal y) { return *this = *this + y; }

  friend constexpr bool operator==(ExtReal x, ExtReal y) { return x.v_ == y.v_; }
  friend constexpr auto operator<=>(ExtReal x, ExtReal y) { return x.v_ <=> y.v_; }

 private:
  double v_ = 0.0;
};

/// "+inf", "-inf" or the shortest round-tripping decimal.
std::string format_ext(double v);

}  // namespace gronwall
