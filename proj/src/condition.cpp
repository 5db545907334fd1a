#include "gronwall/condition.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "gronwall/error.hpp"

namespace gronwall {
namespace {

bool covers_right_of(const IntervalSpec& w, double p) {
  return (w.lo < p || w.lo == p) && w.hi > p;
}

bool covers_left_of(const IntervalSpec& w, double p) {
  return (w.hi > p || w.hi == p) && w.lo < p;
}

bool matches(const SingularPoint& sp, double a) {
  if (sp.until) return a >= sp.point && a < *sp.until;
  return sp.point == a;
}

void sort_unique(std::vector<SingularPoint>& sps) {
  auto key = [](const SingularPoint& s) {
    return std::make_tuple(s.point, static_cast<int>(s.kind), s.until.value_or(-kInf));
  };
  std::sort(sps.begin(), sps.end(),
            [&](const SingularPoint& x, const SingularPoint& y) { return key(x) < key(y); });
  sps.erase(std::unique(sps.begin(), sps.end()), sps.end());
}

double finite_witness(const StructuredMeasure& sf, double a) {
  auto finite_on = [&](double t) {
    return t > a && measure_eval(sf, IntervalSpec::open(a, t)).is_finite();
  };
  double t = a + 1.0;
  if (finite_on(t)) return t;
  auto pts = sf.structure_points();
  auto it = std::upper_bound(pts.begin(), pts.end(), a);
  if (it != pts.end()) {
    t = a + (*it - a) / 2.0;
    if (finite_on(t)) return t;
  }
  for (int k = 0; k < 1100 && t > a; ++k) {
    t = a + (t - a) / 2.0;
    if (finite_on(t)) return t;
  }
  throw Error(ErrorKind::NumericalFailure, "no finite-mass witness found right of " + format_ext(a));
}

double tail_witness(const StructuredMeasure& sf) {
  auto finite_below = [&](double t) {
    return measure_eval(sf, IntervalSpec::open(-kInf, t)).is_finite();
  };
  auto pts = sf.structure_points();
  if (pts.empty()) return 0.0;
  std::vector<double> candidates;
  candidates.push_back(pts.size() >= 2 ? pts[0] + (pts[1] - pts[0]) / 2.0 : pts[0] + 1.0);
  candidates.push_back(pts[0]);
  for (int k = 0; k < 64; ++k) candidates.push_back(pts[0] - std::ldexp(1.0, k));
  for (double t : candidates) {
    if (finite_below(t)) return t;
  }
  throw Error(ErrorKind::NumericalFailure, "no finite-mass witness found for a = -inf");
}

}  // namespace

const char* to_string(SingularKind kind) {
  switch (kind) {
    case SingularKind::DensitySingularity: return "density-singularity";
    case SingularKind::DivergentAtomFamily: return "divergent-atom-family";
    case SingularKind::DenseAtomicInterval: return "dense-atomic-interval";
    case SingularKind::InfiniteTailAtMinusInf: return "infinite-tail-at-minus-inf";
  }
  return "unknown";
}

const char* to_string(SigmaFiniteCertificate::Verdict v) {
  switch (v) {
    case SigmaFiniteCertificate::Verdict::Proven: return "Proven";
    case SigmaFiniteCertificate::Verdict::NotSigmaFinite: return "NotSigmaFinite";
    case SigmaFiniteCertificate::Verdict::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::vector<SingularPoint> right_singular_points(const StructuredMeasure& mu) {
  std::vector<SingularPoint> out;
  for (const auto& c : mu.components()) {
    if (const auto* f = std::get_if<AtomFamily>(&c)) {
      if (!f->total_mass_diverges()) continue;
      if (!f->outward() && f->side == Side::Right && covers_right_of(f->window, f->point)) {
        out.push_back({f->point, SingularKind::DivergentAtomFamily, std::nullopt});
      }
      if (f->outward() && f->side == Side::Left && std::isinf(f->window.lo)) {
        out.push_back({-kInf, SingularKind::InfiniteTailAtMinusInf, std::nullopt});
      }
    } else if (const auto* d = std::get_if<DensityPart>(&c)) {
      auto supp = d->support();
      if (!supp) continue;
      if (d->singular_left() && supp->lo == d->interval.lo) {
        out.push_back({d->interval.lo, SingularKind::DensitySingularity, std::nullopt});
      }
      if (d->divergent_left_tail()) {
        out.push_back({-kInf, SingularKind::InfiniteTailAtMinusInf, std::nullopt});
      }
    } else if (const auto* dense = std::get_if<DenseAtomicPart>(&c)) {
      out.push_back({dense->interval.lo, SingularKind::DenseAtomicInterval, dense->interval.hi});
    }
  }
  sort_unique(out);
  return out;
}

std::vector<double> left_singular_points(const StructuredMeasure& mu) {
  std::vector<double> out;
  for (const auto& c : mu.components()) {
    if (const auto* f = std::get_if<AtomFamily>(&c)) {
      if (f->total_mass_diverges() && !f->outward() && f->side == Side::Left &&
          covers_left_of(f->window, f->point)) {
        out.push_back(f->point);
      }
    } else if (const auto* d = std::get_if<DensityPart>(&c)) {
      auto supp = d->support();
      if (supp && d->singular_right() && supp->hi == d->interval.hi) out.push_back(d->interval.hi);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

LocalCondition check_condition_M_a(const StructuredMeasure& mu, double a) {
  if (std::isnan(a) || a == kInf) throw Error(ErrorKind::Schema, "a must lie in [-inf, inf)");
  StructuredMeasure sf = semi_finite_part(mu);
  LocalCondition result;
  for (const auto& sp : right_singular_points(sf)) {
    if (matches(sp, a)) result.causes.push_back(sp);
  }
  if (!result.causes.empty()) return result;
  result.holds = true;
  result.witness = std::isinf(a) ? tail_witness(sf) : finite_witness(sf, a);
  return result;
}

ConditionMReport check_condition_M(const StructuredMeasure& mu) {
  StructuredMeasure sf = semi_finite_part(mu);
  ConditionMReport report;
  report.singular_points = right_singular_points(sf);
  report.holds = report.singular_points.empty();
  std::vector<double> tested{-kInf};
  for (double p : sf.structure_points()) tested.push_back(p);
  for (double a : tested) {
    auto local = check_condition_M_a(sf, a);
    if (local.holds) report.witnesses[a] = *local.witness;
  }
  return report;
}

SigmaFiniteCertificate sigma_finite_certificate(const StructuredMeasure& mu) {
  SigmaFiniteCertificate cert;
  if (mu.has_infinite_atoms()) {
    cert.verdict = SigmaFiniteCertificate::Verdict::NotSigmaFinite;
    cert.locally_finite = false;
    return cert;
  }
  cert.verdict = SigmaFiniteCertificate::Verdict::Proven;
  auto sps = right_singular_points(mu);
  cert.locally_finite = std::all_of(sps.begin(), sps.end(),
                                    [](const SingularPoint& s) { return std::isinf(s.point) && !s.until; });
  return cert;
}

}  // namespace gronwall
