#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gronwall/engine.hpp"
#include "gronwall/function.hpp"
#include "gronwall/measure.hpp"

namespace gronwall {

/// y(t) = exp(-M_c([t, b))) * prod over atoms s in [t, b) of 1 / (1 + mu({s}))
/// on (a, b), and 0 elsewhere. Solves y(t) = 1 - integral of y over [t, b)
/// against mu, hence y(t) = integral of y over (a, t) when mu((a, b)) = inf.
class SolutionFunction : public Integrand {
 public:
  /// Throws Error(HypothesisViolated) unless mu((t, b)) is finite exactly for
  /// t in (a, b) and mu((a, b)) = inf, with no infinite or dense atoms in (a, b).
  SolutionFunction(StructuredMeasure mu, double a, double b);

  double a() const { return a_; }
  double b() const { return b_; }
  const StructuredMeasure& measure() const { return mu_; }

  double value(double t) const override;
  /// log y(t) for t in (a, b).
  double log_value(double t) const;
  std::vector<Segment> segments(const IntervalSpec& interval) const override;
  VanishingBound vanishing_bound(const Segment& seg, double p, double delta) const override;
  std::optional<double> tail_integral_bound(const StructuredMeasure& mu, double p,
                                            double u) const override;
  bool subsolution_by_construction(const StructuredMeasure& mu) const override { return mu == mu_; }

 private:
  /// Prefix sums of log(1 + m_n) per atom family, indexed like mu's components;
  /// prefix_tail_ holds the mass beyond the prefix when it is negligible, else -1.
  struct FamilyPrefix {
    std::vector<double> sums;
    double tail = -1.0;
  };
  double family_log_sum(std::size_t component, const AtomFamily& fam, const IntervalSpec& j) const;

  StructuredMeasure mu_;
  double a_;
  double b_;
  std::vector<FamilyPrefix> prefix_;
};

SolutionFunction product_integral_solution(const StructuredMeasure& mu, double a, double b);

/// One block G_n = (t_{n-1}, t_n] of the taming grid and its selection F_n.
struct TamingBlock {
  enum class Selection { Whole, Atoms, Interval };

  int index = 0;
  IntervalSpec block;
  bool infinite = false;
  Selection selection = Selection::Whole;
  std::vector<double> atoms;
  std::optional<IntervalSpec> subinterval;
  /// mu(F_n) (equal to mu(G_n) for Whole).
  ExtReal mass{0.0};
};

const char* to_string(TamingBlock::Selection s);

/// A subset E of (a, horizon] whose restriction mu_E is finite on every (t, b)
/// with t > a but still infinite on (a, b).
struct TamedMeasure {
  double a = 0.0;
  double horizon = 0.0;
  /// Blocks with index <= tail_index are not listed: they are either all kept
  /// whole (tail_window) or carry tail_slots atoms each (dense tails).
  int tail_index = 0;
  IntervalSpec tail_window;
  bool dense_tail = false;
  /// Dense tails: one family per atom slot, each placing one atom in every tail block.
  std::vector<AtomFamily> slot_families;
  std::vector<TamingBlock> blocks;
  StructuredMeasure mu_E;

  /// Grid point t_n.
  double grid(int n) const;
  bool contains(double t) const;
  /// Positive-length parts of E, left to right.
  std::vector<IntervalSpec> intervals() const;
  /// Isolated points of E outside every interval.
  std::vector<double> isolated_points() const;
  /// Families of isolated points (dense tails).
  const std::vector<AtomFamily>& point_families() const { return slot_families; }
};

/// Throws Error(HypothesisViolated) when mu_sf((a, t)) < inf for some t > a.
TamedMeasure extract_taming_subset(const StructuredMeasure& mu_sf, double a,
                                   std::optional<double> horizon = std::nullopt);

/// y_sf = ybar * 1_E for the solution ybar built on mu_E.
class RestrictedSolution : public Integrand {
 public:
  RestrictedSolution(std::shared_ptr<const SolutionFunction> ybar,
                     std::shared_ptr<const TamedMeasure> tamed, StructuredMeasure mu_sf);

  double value(double t) const override;
  std::vector<Segment> segments(const IntervalSpec& interval) const override;
  std::vector<double> support_points(const IntervalSpec& interval) const override;
  std::vector<AtomFamily> support_families() const override;
  VanishingBound vanishing_bound(const Segment& seg, double p, double delta) const override {
    return ybar_->vanishing_bound(seg, p, delta);
  }
  std::optional<double> tail_integral_bound(const StructuredMeasure& mu, double p,
                                            double u) const override;
  bool subsolution_by_construction(const StructuredMeasure& mu) const override {
    return mu == mu_sf_ || mu == tamed_->mu_E;
  }

 private:
  std::shared_ptr<const SolutionFunction> ybar_;
  std::shared_ptr<const TamedMeasure> tamed_;
  StructuredMeasure mu_sf_;
};

/// y(t) = min(max(ybar(t), 0), integral of y_sf over (a, t) against mu_sf) on
/// (a, b), where ybar is y_sf set to 0 on the infinite atoms of mu.
class TransferredFunction : public Integrand {
 public:
  TransferredFunction(std::shared_ptr<const Integrand> y_sf, StructuredMeasure mu, double a, double b);

  double value(double t) const override;
  std::vector<Segment> segments(const IntervalSpec& interval) const override;
  std::vector<double> support_points(const IntervalSpec& interval) const override;
  std::vector<AtomFamily> support_families() const override { return y_sf_->support_families(); }
  VanishingBound vanishing_bound(const Segment& seg, double p, double delta) const override {
    return y_sf_->vanishing_bound(seg, p, delta);
  }
  std::optional<double> tail_integral_bound(const StructuredMeasure& mu, double p,
                                            double u) const override;
  bool closed_form() const override { return y_sf_->closed_form(); }
  bool subsolution_by_construction(const StructuredMeasure& mu) const override;

 private:
  bool at_infinite_atom(double t) const;

  std::shared_ptr<const Integrand> y_sf_;
  StructuredMeasure mu_;
  StructuredMeasure mu_sf_;
  double a_;
  double b_;
  std::vector<double> infinite_atoms_;
  bool shortcut_;
};

/// Identity when mu has no infinite atoms; otherwise a TransferredFunction.
std::shared_ptr<const Integrand> transfer_to_mu(std::shared_ptr<const Integrand> y_sf,
                                                const StructuredMeasure& mu, double a, double b);

struct CounterexampleBundle {
  double a = 0.0;
  double b = 0.0;
  std::shared_ptr<const TamedMeasure> tamed;
  std::shared_ptr<const SolutionFunction> ybar;
  std::shared_ptr<const Integrand> y_sf;
  std::shared_ptr<const Integrand> y;
  VerificationReport report;
  /// Integral of y over (a, b) against mu.
  ExtReal integrability_certificate{0.0};
};

/// Default right end: a + 1 for finite a, 0 for a = -inf.
double default_b(double a);

/// Builds and verifies a nonnegative witness that the implication fails at a.
/// Throws Error(HypothesisViolated) when (M_a) holds.
CounterexampleBundle build_counterexample(const StructuredMeasure& mu, double a,
                                          std::optional<double> b = std::nullopt,
                                          std::optional<GridSpec> grid = std::nullopt);

}  // namespace gronwall
