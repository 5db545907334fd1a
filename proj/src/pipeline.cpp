#include <algorithm>
#include <cmath>
#include <variant>

#include "gronwall/condition.hpp"
#include "gronwall/construct.hpp"
#include "gronwall/error.hpp"

namespace gronwall {
namespace {

/// Bound on the integral of a function 0 <= g <= ybar over (lo, hi) against
/// mu, where ybar solves the equation against mu_E <= mu on E.
std::optional<double> solution_tail(const SolutionFunction& ybar, const StructuredMeasure& mu,
                                    double p, double u) {
  const double lo = std::min(p, u), hi = std::max(p, u);
  const double sup = hi >= ybar.b() ? 1.0 : ybar.value(hi);
  if (lo <= ybar.a()) return sup;
  ExtReal m = measure_eval(mu, IntervalSpec::open(lo, hi));
  if (!m.is_finite()) return std::nullopt;
  return sup * m.value();
}

}  // namespace

RestrictedSolution::RestrictedSolution(std::shared_ptr<const SolutionFunction> ybar,
                                       std::shared_ptr<const TamedMeasure> tamed,
                                       StructuredMeasure mu_sf)
    : ybar_(std::move(ybar)), tamed_(std::move(tamed)), mu_sf_(std::move(mu_sf)) {}

double RestrictedSolution::value(double t) const {
  return tamed_->contains(t) ? ybar_->value(t) : 0.0;
}

std::vector<Segment> RestrictedSolution::segments(const IntervalSpec& interval) const {
  std::vector<Segment> out;
  for (const IntervalSpec& e : tamed_->intervals()) {
    auto k = intersect(interval, e);
    if (k) k = intersect(*k, IntervalSpec::open(ybar_->a(), ybar_->b()));
    if (!k || k->empty()) continue;
    for (const Segment& seg : ybar_->segments(*k)) out.push_back(seg);
  }
  return out;
}

std::vector<double> RestrictedSolution::support_points(const IntervalSpec& interval) const {
  std::vector<double> out;
  const IntervalSpec inside = IntervalSpec::open(ybar_->a(), ybar_->b());
  for (double x : tamed_->isolated_points()) {
    if (interval.contains(x) && inside.contains(x)) out.push_back(x);
  }
  return out;
}

std::vector<AtomFamily> RestrictedSolution::support_families() const {
  return tamed_->point_families();
}

std::optional<double> RestrictedSolution::tail_integral_bound(const StructuredMeasure& mu, double p,
                                                              double u) const {
  // On E, mu_sf and mu_E agree up to atoms that sit outside E's selections.
  if (!(mu == mu_sf_) && !(mu == tamed_->mu_E)) return std::nullopt;
  if (std::min(p, u) <= ybar_->a()) return solution_tail(*ybar_, tamed_->mu_E, p, u);
  return solution_tail(*ybar_, mu, p, u);
}

TransferredFunction::TransferredFunction(std::shared_ptr<const Integrand> y_sf, StructuredMeasure mu,
                                         double a, double b)
    : y_sf_(std::move(y_sf)), mu_(std::move(mu)), mu_sf_(semi_finite_part(mu_)), a_(a), b_(b) {
  for (const auto& c : mu_.components()) {
    if (const auto* inf = std::get_if<InfiniteAtomPart>(&c)) {
      infinite_atoms_.insert(infinite_atoms_.end(), inf->locations.begin(), inf->locations.end());
    }
  }
  std::sort(infinite_atoms_.begin(), infinite_atoms_.end());
  shortcut_ = y_sf_->subsolution_by_construction(mu_sf_);
}

bool TransferredFunction::at_infinite_atom(double t) const {
  return std::binary_search(infinite_atoms_.begin(), infinite_atoms_.end(), t);
}

double TransferredFunction::value(double t) const {
  if (!(t > a_ && t < b_) || at_infinite_atom(t)) return 0.0;
  const double v = y_sf_->value(t);
  if (!(v > 0.0)) return 0.0;
  if (shortcut_) return v;
  ExtReal bound = integrate(*y_sf_, mu_sf_, IntervalSpec::open(a_, t)).value;
  return bound < ExtReal(v) ? bound.value() : v;
}

std::vector<Segment> TransferredFunction::segments(const IntervalSpec& interval) const {
  auto k = intersect(interval, IntervalSpec::open(a_, b_));
  if (!k || k->empty()) return {};
  auto segs = y_sf_->segments(*k);
  // Positive part: only nonnegative segments survive; pieces no longer describe y.
  std::vector<Segment> out;
  for (Segment s : segs) {
    if (s.sign < 0) continue;
    s.piece = nullptr;
    out.push_back(s);
  }
  return out;
}

std::vector<double> TransferredFunction::support_points(const IntervalSpec& interval) const {
  std::vector<double> out;
  for (double x : y_sf_->support_points(interval)) {
    if (!at_infinite_atom(x)) out.push_back(x);
  }
  return out;
}

std::optional<double> TransferredFunction::tail_integral_bound(const StructuredMeasure& mu, double p,
                                                               double u) const {
  if (mu == mu_ || mu == mu_sf_) return y_sf_->tail_integral_bound(mu_sf_, p, u);
  return std::nullopt;
}

bool TransferredFunction::subsolution_by_construction(const StructuredMeasure& mu) const {
  return shortcut_ && (mu == mu_ || mu == mu_sf_);
}

std::shared_ptr<const Integrand> transfer_to_mu(std::shared_ptr<const Integrand> y_sf,
                                                const StructuredMeasure& mu, double a, double b) {
  if (!mu.has_infinite_atoms()) return y_sf;
  return std::make_shared<TransferredFunction>(std::move(y_sf), mu, a, b);
}

double default_b(double a) { return std::isfinite(a) ? a + 1.0 : 0.0; }

CounterexampleBundle build_counterexample(const StructuredMeasure& mu, double a,
                                          std::optional<double> b, std::optional<GridSpec> grid) {
  CounterexampleBundle out;
  out.a = a;
  out.b = b.value_or(default_b(a));
  if (!(out.b > a) || !std::isfinite(out.b)) {
    throw Error(ErrorKind::Schema, "counterexample needs a finite b > a");
  }
  if (check_condition_M_a(mu, a).holds) {
    throw Error(ErrorKind::HypothesisViolated,
                "(M_a) holds at " + format_ext(a) + "; the implication cannot fail there");
  }
  const StructuredMeasure sf = semi_finite_part(mu);
  auto tamed = std::make_shared<TamedMeasure>(extract_taming_subset(sf, a, out.b));
  out.tamed = tamed;
  out.ybar = std::make_shared<SolutionFunction>(tamed->mu_E, a, out.b);
  out.y_sf = std::make_shared<RestrictedSolution>(out.ybar, tamed, sf);
  out.y = transfer_to_mu(out.y_sf, mu, a, out.b);

  GridSpec g;
  if (grid) {
    g = *grid;
  } else {
    g.interval = IntervalSpec::open(a, out.b);
    g.count = default_grid_count();
    g.spacing = GridSpec::Spacing::Geometric;
    g.include_atoms = true;
  }
  for (double x : tamed->isolated_points()) {
    if (x > a && x < out.b) g.extra_points.push_back(x);
  }
  out.report = verify_inequality(*out.y, mu, a, out.b, g);
  out.integrability_certificate = integrate(*out.y, mu, IntervalSpec::open(a, out.b)).value;
  if (out.report.implication_verdict != ImplicationVerdict::CounterexampleToI) {
    throw Error(ErrorKind::NumericalFailure, "constructed witness failed verification");
  }
  return out;
}

}  // namespace gronwall
