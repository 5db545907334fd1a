#pragma once

#include <optional>
#include <vector>

#include "gronwall/interval.hpp"
#include "gronwall/measure.hpp"

namespace gronwall {

/// One closed-form term of a piece.
struct Term {
  enum class Kind { Const, Poly, Power, Exp };

  Kind kind = Kind::Const;
  /// Const: {value}. Poly: c_0 + c_1 t + c_2 t^2 + ...
  std::vector<double> coeffs;
  /// Power: c0 * (t - anchor)^exponent. Exp: c0 * exp(rate * t).
  double c0 = 0.0;
  double anchor = 0.0;
  double exponent = 0.0;
  double rate = 0.0;

  static Term constant(double v) { return {Kind::Const, {v}}; }
  static Term poly(std::vector<double> c) { return {Kind::Poly, std::move(c)}; }
  static Term power(double c0, double anchor, double exponent) {
    return {Kind::Power, {}, c0, anchor, exponent};
  }
  static Term exp(double c0, double rate) { return {Kind::Exp, {}, c0, 0.0, 0.0, rate}; }

  double eval(double t) const;
  Term scaled(double k) const;

  friend bool operator==(const Term&, const Term&) = default;
};

/// A sum of terms active on one interval.
struct Piece {
  IntervalSpec interval;
  std::vector<Term> terms;

  double eval(double t) const;

  friend bool operator==(const Piece&, const Piece&) = default;
};

/// Bound |f(x)| <= coeff * |x - p|^order near an accumulation point p; limit
/// is lim |f(x)| as x -> p inside the segment.
struct VanishingBound {
  double coeff = 0.0;
  double order = 0.0;
  double limit = 0.0;
};

/// Part of an integrand's support with a constant sign.
struct Segment {
  IntervalSpec interval;
  int sign = 1;
  /// Closed-form description when available (enables the antiderivative table).
  const Piece* piece = nullptr;
};

/// Anything that can be integrated against a StructuredMeasure.
///
/// Support model: the function vanishes outside its segments, except on the
/// countable set given by support_points() and support_families(). Those
/// discrete points never lie inside a segment.
class Integrand {
 public:
  virtual ~Integrand() = default;

  virtual double value(double t) const = 0;
  /// Sign-constant segments intersected with `interval`, ordered left to right.
  virtual std::vector<Segment> segments(const IntervalSpec& interval) const = 0;
  virtual std::vector<double> support_points(const IntervalSpec&) const { return {}; }
  virtual std::vector<AtomFamily> support_families() const { return {}; }
  /// Behaviour near p inside seg, for x within distance delta of p (p may be
  /// +/-inf, then delta is the distance from the origin of the tail).
  virtual VanishingBound vanishing_bound(const Segment& seg, double p, double delta) const;
  /// Certified bound on the integral of |f| against mu over the open interval
  /// between p and u, when the integrand knows one.
  virtual std::optional<double> tail_integral_bound(const StructuredMeasure&, double /*p*/,
                                                    double /*u*/) const {
    return std::nullopt;
  }
  /// Whether values are exact closed forms (selects the tighter tolerance tier).
  virtual bool closed_form() const { return false; }
  /// True when y(t) <= integral of y over (-inf, t) against mu holds at every t
  /// by construction (no evaluation needed).
  virtual bool subsolution_by_construction(const StructuredMeasure&) const { return false; }
};

/// Piecewise closed-form function, 0 off its pieces.
class PiecewiseFunction : public Integrand {
 public:
  PiecewiseFunction() = default;
  /// Validates pieces (well-formed, pairwise disjoint) and sorts them.
  explicit PiecewiseFunction(std::vector<Piece> pieces);

  static PiecewiseFunction single(IntervalSpec interval, Term term) {
    return PiecewiseFunction({Piece{interval, {std::move(term)}}});
  }
  static PiecewiseFunction zero() { return PiecewiseFunction(); }

  const std::vector<Piece>& pieces() const { return pieces_; }

  double evaluate(double t) const { return value(t); }
  double value(double t) const override;
  std::vector<Segment> segments(const IntervalSpec& interval) const override;
  VanishingBound vanishing_bound(const Segment& seg, double p, double delta) const override;
  bool closed_form() const override { return true; }

  PiecewiseFunction scaled(double k) const;
  /// Pointwise sum; pieces are refined to a common partition.
  PiecewiseFunction plus(const PiecewiseFunction& other) const;
  /// Whether f takes negative values somewhere.
  bool has_negative_part() const;

  friend bool operator==(const PiecewiseFunction& x, const PiecewiseFunction& y) {
    return x.pieces_ == y.pieces_;
  }

 private:
  std::vector<Piece> pieces_;
};

/// max(f, 0) for any integrand.
class PositivePart : public Integrand {
 public:
  explicit PositivePart(const Integrand& f) : f_(f) {}

  double value(double t) const override;
  std::vector<Segment> segments(const IntervalSpec& interval) const override;
  std::vector<double> support_points(const IntervalSpec& interval) const override;
  std::vector<AtomFamily> support_families() const override { return f_.support_families(); }
  VanishingBound vanishing_bound(const Segment& seg, double p, double delta) const override {
    return f_.vanishing_bound(seg, p, delta);
  }
  std::optional<double> tail_integral_bound(const StructuredMeasure& mu, double p,
                                            double u) const override {
    return f_.tail_integral_bound(mu, p, u);
  }
  bool closed_form() const override { return f_.closed_form(); }

 private:
  const Integrand& f_;
};

/// f * 1{f(t) not in B} for B a finite union of intervals containing 0.
class OutsideSetPart : public Integrand {
 public:
  OutsideSetPart(const PiecewiseFunction& f, std::vector<IntervalSpec> set);

  double value(double t) const override;
  std::vector<Segment> segments(const IntervalSpec& interval) const override;
  bool closed_form() const override { return true; }

 private:
  bool in_set(double v) const;

  const PiecewiseFunction& f_;
  std::vector<IntervalSpec> set_;
};

/// Real roots of a polynomial inside [lo, hi] (finite), ascending.
std::vector<double> poly_roots(const std::vector<double>& coeffs, double lo, double hi);

}  // namespace gronwall
