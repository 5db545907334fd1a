#pragma once

#include <functional>
#include <optional>

namespace gronwall {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  bool divergent = false;
};

/// Adaptive Gauss-Kronrod (7/15) on a finite interval. Subintervals are
/// combined by pairwise summation in a fixed order.
QuadratureResult gauss_kronrod(const std::function<double(double)>& f, double lo, double hi,
                               double rel_tol = 1e-11, double abs_tol = 1e-300);

/// Integral of a sign-constant integrand over (lo, hi), either end possibly
/// infinite or singular.
///
/// Ends flagged singular (and infinite ends) are approached through geometric
/// shells; the shell sequence stops once its geometric tail estimate (or the
/// optional certified tail bound) drops below tolerance, and is reported
/// divergent when shell contributions stop decaying.
struct ShellOptions {
  bool singular_lo = false;
  bool singular_hi = false;
  double rel_tol = 1e-11;
  /// Bound on the integral over the open interval between an end and u.
  std::function<std::optional<double>(double end, double u)> tail_bound;
};

QuadratureResult integrate_sign_constant(const std::function<double(double)>& f, double lo,
                                         double hi, const ShellOptions& options);

}  // namespace gronwall
