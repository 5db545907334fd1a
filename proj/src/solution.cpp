#include <algorithm>
#include <cmath>
#include <variant>

#include "gronwall/condition.hpp"
#include "gronwall/construct.hpp"
#include "gronwall/error.hpp"

namespace gronwall {
namespace {

[[noreturn]] void violated(const std::string& what) {
  throw Error(ErrorKind::HypothesisViolated, what);
}

constexpr std::size_t kPrefixCap = std::size_t{1} << 16;

/// Sum of log(1 + m_n) over family atoms in j; infinite ranges converge here.
double direct_log_sum(const AtomFamily& fam, const IntervalSpec& j) {
  auto range = family_index_range(fam, j);
  if (!range) return 0.0;
  auto [first, last] = *range;
  double sum = 0.0;
  if (last >= 0) {
    for (std::int64_t n = first; n <= last; ++n) sum += std::log1p(fam.mass(n));
    return sum;
  }
  // log(1+m) <= m, so the remaining mass bounds the tail; add it once small.
  for (std::int64_t n = first; n < first + (std::int64_t{1} << 22); ++n) {
    sum += std::log1p(fam.mass(n));
    double rest = fam.mass_sum(n + 1, -1);
    if (rest < 1e-13) return sum + rest;
  }
  throw Error(ErrorKind::NumericalFailure, "atom product did not converge");
}

}  // namespace

SolutionFunction::SolutionFunction(StructuredMeasure mu, double a, double b)
    : mu_(std::move(mu)), a_(a), b_(b) {
  if (std::isnan(a) || !std::isfinite(b) || !(a < b)) {
    throw Error(ErrorKind::Schema, "solution needs a < b with b finite");
  }
  const IntervalSpec inside = IntervalSpec::open(a, b);
  for (const auto& c : mu_.components()) {
    if (const auto* inf = std::get_if<InfiniteAtomPart>(&c)) {
      for (double x : inf->locations) {
        if (inside.contains(x)) violated("infinite atom inside (a, b) at " + format_ext(x));
      }
    } else if (const auto* dense = std::get_if<DenseAtomicPart>(&c)) {
      auto k = intersect(dense->interval, inside);
      if (k && k->lo < k->hi) violated("dense atomic part inside (a, b)");
    }
  }
  for (double p : left_singular_points(mu_)) {
    if (p > a && p <= b) violated("mu((t, b)) is infinite near " + format_ext(p) + " to the left");
  }
  for (const auto& sp : right_singular_points(mu_)) {
    if (sp.point > a && sp.point < b) violated("mu is singular at " + format_ext(sp.point) + " inside (a, b)");
  }
  if (measure_eval(mu_, inside).is_finite()) violated("mu((a, b)) is finite; the singularity must sit at a");

  prefix_.resize(mu_.components().size());
  for (std::size_t i = 0; i < prefix_.size(); ++i) {
    const auto* fam = std::get_if<AtomFamily>(&mu_.components()[i]);
    if (!fam) continue;
    FamilyPrefix& fp = prefix_[i];
    fp.sums.push_back(0.0);
    const bool convergent = !fam->total_mass_diverges();
    for (std::int64_t n = 0; fp.sums.size() < kPrefixCap; ++n) {
      fp.sums.push_back(fp.sums.back() + std::log1p(fam->mass(n)));
      if (convergent) {
        double rest = fam->mass_sum(n + 1, -1);
        if (rest < 1e-13) {
          fp.tail = rest;
          break;
        }
      }
      if (fam->location(n) == fam->point) break;
    }
  }
}

double SolutionFunction::family_log_sum(std::size_t component, const AtomFamily& fam,
                                        const IntervalSpec& j) const {
  auto range = family_index_range(fam, j);
  if (!range) return 0.0;
  const FamilyPrefix& fp = prefix_[component];
  const auto size = static_cast<std::int64_t>(fp.sums.size());
  auto [first, last] = *range;
  if (last >= 0 && last + 1 < size) return fp.sums[last + 1] - fp.sums[first];
  if (last < 0 && fp.tail >= 0.0 && first < size) return fp.sums.back() - fp.sums[first] + fp.tail;
  return direct_log_sum(fam, j);
}

double SolutionFunction::log_value(double t) const {
  const IntervalSpec j = IntervalSpec::left_closed(t, b_);
  double log_y = 0.0;
  for (std::size_t i = 0; i < mu_.components().size(); ++i) {
    const Component& c = mu_.components()[i];
    if (const auto* d = std::get_if<DensityPart>(&c)) {
      ExtReal m = component_mass(*d, j);
      if (!m.is_finite()) return -kInf;
      log_y -= m.value();
    } else if (const auto* part = std::get_if<AtomicPart>(&c)) {
      for (const Atom& at : part->atoms) {
        if (j.contains(at.x)) log_y -= std::log1p(at.mass);
      }
    } else if (const auto* fam = std::get_if<AtomFamily>(&c)) {
      if (fam->total_mass_diverges()) {
        auto range = family_index_range(*fam, j);
        if (range && range->second < 0) return -kInf;
      }
      log_y -= family_log_sum(i, *fam, j);
    }
  }
  return log_y;
}

double SolutionFunction::value(double t) const {
  if (!(t > a_ && t < b_)) return 0.0;
  return std::exp(log_value(t));
}

std::vector<Segment> SolutionFunction::segments(const IntervalSpec& interval) const {
  auto k = intersect(interval, IntervalSpec::open(a_, b_));
  if (!k || k->empty()) return {};
  // y jumps at every atom; cells (x_i, x_{i+1}] keep quadrature on smooth pieces.
  // Family atoms beyond the cap sit where y is already tiny.
  constexpr std::int64_t kFamilyBreaks = 32;
  const IntervalSpec inner = IntervalSpec::open(k->lo, k->hi);
  std::vector<double> cuts;
  for (const auto& c : mu_.components()) {
    if (const auto* part = std::get_if<AtomicPart>(&c)) {
      for (const Atom& at : part->atoms) {
        if (inner.contains(at.x)) cuts.push_back(at.x);
      }
    } else if (const auto* fam = std::get_if<AtomFamily>(&c)) {
      auto range = family_index_range(*fam, inner);
      if (!range) continue;
      std::int64_t last = range->second < 0 ? range->first + kFamilyBreaks : std::min(range->second, range->first + kFamilyBreaks);
      for (std::int64_t n = range->first; n <= last; ++n) {
        double x = fam->location(n);
        if (inner.contains(x)) cuts.push_back(x);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<Segment> out;
  double lo = k->lo;
  bool lo_closed = k->lo_closed;
  for (double x : cuts) {
    out.push_back(Segment{IntervalSpec{lo, x, lo_closed, true}, 1, nullptr});
    lo = x;
    lo_closed = false;
  }
  IntervalSpec last{lo, k->hi, lo_closed, k->hi_closed};
  if (!last.empty()) out.push_back(Segment{last, 1, nullptr});
  return out;
}

VanishingBound SolutionFunction::vanishing_bound(const Segment& seg, double p, double delta) const {
  auto sup_below = [&](double x) { return x >= b_ ? 1.0 : value(x); };
  if (p == -kInf) return {sup_below(delta), 0.0, 0.0};
  if (p == kInf) return {1.0, 0.0, 0.0};
  if (p <= a_) return {sup_below(a_ + delta), 0.0, 0.0};
  if (seg.interval.hi <= p) return {sup_below(p), 0.0, value(p)};
  return {sup_below(p + delta), 0.0, value(p)};
}

std::optional<double> SolutionFunction::tail_integral_bound(const StructuredMeasure& mu, double p,
                                                            double u) const {
  if (!(mu == mu_)) return std::nullopt;
  const double lo = std::min(p, u), hi = std::max(p, u);
  const double sup = hi >= b_ ? 1.0 : value(hi);
  // The equation gives the integral over (a, hi) exactly as y(hi).
  if (lo <= a_) return sup;
  ExtReal m = measure_eval(mu_, IntervalSpec::open(lo, hi));
  if (!m.is_finite()) return std::nullopt;
  return sup * m.value();
}

SolutionFunction product_integral_solution(const StructuredMeasure& mu, double a, double b) {
  return SolutionFunction(mu, a, b);
}

}  // namespace gronwall
