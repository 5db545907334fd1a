#pragma once

#include "gronwall/ext_real.hpp"
#include "gronwall/function.hpp"
#include "gronwall/interval.hpp"
#include "gronwall/measure.hpp"

namespace gronwall {

/// How a value was obtained, ordered from most to least exact.
enum class IntegrationPath { ClosedForm, TruncatedSeries, Quadrature };

const char* to_string(IntegrationPath path);

struct IntegralResult {
  ExtReal value;
  IntegrationPath path = IntegrationPath::ClosedForm;
  /// Whether the integral of |f| is finite.
  bool abs_integrable = true;
  /// Accumulated quadrature error estimate.
  double error = 0.0;
  /// Sum of certified bounds on truncated series tails.
  double tail_bound = 0.0;
};

/// Lebesgue-Stieltjes integral of f over I against mu, computed as P - N with
/// P, N the integrals of the positive and negative parts.
///
/// Throws Error(NonIntegrable) when P = N = inf, or
/// Error(UnsupportedDenseCombination) when that happens on a dense atomic part;
/// Error(NumericalFailure) when a series tail cannot be certified.
IntegralResult integrate(const Integrand& f, const StructuredMeasure& mu, const IntervalSpec& I);

/// Integral of |f| over I (value = P + N).
IntegralResult integrate_abs(const Integrand& f, const StructuredMeasure& mu,
                             const IntervalSpec& I);

}  // namespace gronwall
