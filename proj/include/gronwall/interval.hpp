#pragma once

#include <optional>

#include "gronwall/ext_real.hpp"

namespace gronwall {

/// Interval of the extended real line. Infinite endpoints are always open.
struct IntervalSpec {
  double lo = -kInf;
  double hi = kInf;
  bool lo_closed = false;
  bool hi_closed = false;

  static IntervalSpec open(double lo, double hi) { return {lo, hi, false, false}; }
  static IntervalSpec closed(double lo, double hi) { return {lo, hi, true, true}; }
  static IntervalSpec left_closed(double lo, double hi) { return {lo, hi, true, false}; }
  static IntervalSpec right_closed(double lo, double hi) { return {lo, hi, false, true}; }
  static IntervalSpec point(double x) { return {x, x, true, true}; }
  static IntervalSpec real_line() { return {}; }

  /// Throws Error(Schema) unless lo <= hi and infinite endpoints are open.
  void validate() const;

  bool empty() const;
  bool is_point() const { return lo == hi && lo_closed && hi_closed; }
  double length() const { return hi - lo; }
  bool contains(double x) const;
  /// Whether every point of `other` lies in this interval.
  bool contains(const IntervalSpec& other) const;

  friend bool operator==(const IntervalSpec&, const IntervalSpec&) = default;
};

/// Intersection; empty intersections come back as std::nullopt.
std::optional<IntervalSpec> intersect(const IntervalSpec& x, const IntervalSpec& y);

}  // namespace gronwall
