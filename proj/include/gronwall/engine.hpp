#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gronwall/function.hpp"
#include "gronwall/integrate.hpp"
#include "gronwall/measure.hpp"

namespace gronwall {

struct GridSpec {
  enum class Spacing { Uniform, Geometric };

  IntervalSpec interval = IntervalSpec::open(0.0, 1.0);
  int count = 1024;
  /// Geometric spacing crowds points toward the left endpoint.
  Spacing spacing = Spacing::Uniform;
  /// Also insert atom locations of the measure and of the function's discrete
  /// support (families truncated to their first kFamilyGridAtoms atoms).
  bool include_atoms = false;
  std::vector<double> extra_points;

  static constexpr int kFamilyGridAtoms = 64;
};

/// Default grid size: GRONWALL_GRID_COUNT when set to a positive integer, else 1024.
int default_grid_count();

/// Grid points strictly increasing and inside grid.interval. Infinite ends are
/// replaced by a finite window reaching 2^40 beyond the finite end.
std::vector<double> grid_points(const GridSpec& grid, const StructuredMeasure& mu,
                                const Integrand* y = nullptr);

/// y(t) = f(t) + integral of y over (a, t), for a purely atomic mu on (a, b).
/// The result is a step correction of f, exact up to the truncation of
/// convergent atom families (tail mass below 1e-14 of the total).
PiecewiseFunction solve_forward(const StructuredMeasure& mu, const PiecewiseFunction& f, double a,
                                double b);

enum class ImplicationVerdict { ConsistentWithI, CounterexampleToI };

const char* to_string(ImplicationVerdict v);

struct VerificationReport {
  GridSpec grid;
  double a = 0.0;
  double b = 0.0;
  std::vector<double> points;
  std::vector<double> values;
  std::vector<double> inhomogeneity;
  std::vector<ExtReal> integrals;
  /// r(t) = y(t) - f(t) - integral; -inf when the integral is +inf.
  std::vector<double> residuals;
  double max_violation = 0.0;
  double tolerance = 1e-9;
  bool inequality_verdict = false;
  /// Lower bound on mu({y > tol}) from atoms and grid cells inside positive segments.
  ExtReal positivity_mass{0.0};
  ImplicationVerdict implication_verdict = ImplicationVerdict::ConsistentWithI;
  /// y takes negative values on the grid; verdicts then also hold for y+ = max(y, 0).
  bool positive_part_reduction = false;
  IntegrationPath worst_path = IntegrationPath::ClosedForm;
};

/// Checks y(t) <= f(t) + integral of y over (a, t) on the grid.
///
/// Throws Error(NotIntegrable) when |y| is not integrable over some (a, t).
VerificationReport verify_inequality(const Integrand& y, const StructuredMeasure& mu, double a,
                                     double b, const GridSpec& grid,
                                     const Integrand* f = nullptr);

/// CSV rows t,y,integral,residual with a header line.
std::string to_csv(const VerificationReport& report);

struct ProbeReport {
  double max_residual = 0.0;
  double tolerance = 1e-9;
  bool residuals_ok = false;
  bool sign_verdict = false;
  bool monotone_verdict = false;
  /// Residuals pass but sign or monotonicity fails.
  bool theory_violation = false;
  int sign = 0;
};

/// For y claimed to solve y(t) = integral of y over (a, t): residuals, constant
/// sign and monotonicity on the grid.
ProbeReport constant_sign_probe(const Integrand& y, const StructuredMeasure& mu, double a,
                                const GridSpec& grid);

struct InhomogeneousDemo {
  std::vector<int> n_values;
  std::vector<VerificationReport> reports;
  /// sup of y_n over grid points where tilde_y > 0.
  std::vector<double> sup_trace;
};

/// Verifies y_n = base_y + n * tilde_y against y <= f + integral for each n.
InhomogeneousDemo demo_inhomogeneous_unboundedness(const StructuredMeasure& mu,
                                                   const PiecewiseFunction& f,
                                                   const PiecewiseFunction& base_y,
                                                   const PiecewiseFunction& tilde_y,
                                                   const std::vector<int>& n_values, double a,
                                                   double b, const GridSpec& grid);

}  // namespace gronwall
