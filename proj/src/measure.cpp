#include "gronwall/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gronwall/error.hpp"

namespace gronwall {
namespace {

constexpr std::int64_t kIndexCap = std::int64_t{1} << 40;

[[noreturn]] void schema_error(const std::string& msg) {
  throw Error(ErrorKind::Schema, msg);
}

// Euler-Maclaurin estimate of sum_{k=n}^{m} k^{-p}; m = inf allowed when p > 1.
double euler_maclaurin(double p, double n, double m) {
  auto f = [p](double x) { return std::pow(x, -p); };
  auto f1 = [p](double x) { return -p * std::pow(x, -p - 1.0); };
  auto f3 = [p](double x) { return -p * (p + 1.0) * (p + 2.0) * std::pow(x, -p - 3.0); };
  double integral;
  if (std::isinf(m)) {
    integral = std::pow(n, 1.0 - p) / (p - 1.0);
    return integral + f(n) / 2.0 - f1(n) / 12.0 + f3(n) / 720.0;
  }
  integral = p == 1.0 ? std::log(m / n)
                      : (std::pow(m, 1.0 - p) - std::pow(n, 1.0 - p)) / (1.0 - p);
  return integral + (f(n) + f(m)) / 2.0 + (f1(m) - f1(n)) / 12.0 -
         (f3(m) - f3(n)) / 720.0;
}

double direct_power_sum(double p, std::int64_t first, std::int64_t last) {
  double s = 0.0;
  for (std::int64_t k = last; k >= first; --k) s += std::pow(static_cast<double>(k), -p);
  return s;
}

double family_mass_on(const AtomFamily& f, const IntervalSpec& interval) {
  auto range = family_index_range(f, interval);
  if (!range) return 0.0;
  return f.mass_sum(range->first, range->second);
}

double density_mass_on(const DensityPart& d, const IntervalSpec& interval) {
  auto supp = d.support();
  if (!supp) return 0.0;
  auto j = intersect(*supp, interval);
  if (!j || j->lo == j->hi) return 0.0;
  double m = d.antiderivative(j->hi) - d.antiderivative(j->lo);
  if (std::isnan(m)) {
    throw Error(ErrorKind::NumericalFailure, "density mass is undefined");
  }
  return std::max(m, 0.0);
}

void validate(AtomFamily& f) {
  if (!std::isfinite(f.point)) schema_error("atom_family point must be finite");
  if (!(f.start > 0.0) || !std::isfinite(f.start)) schema_error("atom_family start must be > 0");
  if (!(f.ratio > 0.0) || f.ratio == 1.0 || !std::isfinite(f.ratio)) {
    schema_error("atom_family ratio must lie in (0,1) or (1,inf)");
  }
  if (!(f.kappa > 0.0) || !std::isfinite(f.kappa)) schema_error("atom_family kappa must be > 0");
  if (f.rule == AtomFamily::MassRule::Geometric && !(f.rate > 0.0 && f.rate < 1.0)) {
    schema_error("geometric mass rule needs lambda in (0,1)");
  }
  if (f.rule == AtomFamily::MassRule::Power && !(f.rate > 0.0)) {
    schema_error("power mass rule needs p > 0");
  }
  f.window.validate();
}

void validate(DensityPart& d) {
  d.interval.validate();
  d.window.validate();
  if (d.interval.lo >= d.interval.hi) schema_error("density interval must have positive length");
  d.interval.lo_closed = false;
  d.interval.hi_closed = false;
  if (!(d.c0 > 0.0) || !std::isfinite(d.c0)) schema_error("density c0 must be > 0");
  switch (d.form) {
    case DensityPart::Form::Constant: break;
    case DensityPart::Form::PowerLeft:
      if (!std::isfinite(d.interval.lo)) schema_error("power_left density needs a finite lower end");
      break;
    case DensityPart::Form::PowerRight:
      if (!std::isfinite(d.interval.hi)) schema_error("power_right density needs a finite upper end");
      break;
    case DensityPart::Form::Reciprocal:
      if (d.interval.lo < 0.0 && d.interval.hi > 0.0) {
        schema_error("reciprocal density interval must exclude 0");
      }
      break;
  }
  if (!std::isfinite(d.exponent)) schema_error("density exponent must be finite");
}

void validate(DenseAtomicPart& d) {
  d.interval.validate();
  if (d.interval.lo >= d.interval.hi) schema_error("dense_atoms interval must have positive length");
  if (!(d.per_atom_mass > 0.0) || !std::isfinite(d.per_atom_mass)) {
    schema_error("dense_atoms mass must be > 0");
  }
  if (d.enumeration != "calkin-wilf" && d.enumeration != "rationals") {
    schema_error("unknown dense_atoms enumeration '" + d.enumeration + "'");
  }
}

}  // namespace

double power_sum(double p, std::int64_t first, std::int64_t last) {
  constexpr std::int64_t kDirect = 64;
  if (last < 0) {
    if (p <= 1.0) return kInf;
    return direct_power_sum(p, first, first + kDirect - 1) +
           euler_maclaurin(p, static_cast<double>(first + kDirect), kInf);
  }
  if (last < first) return 0.0;
  if (last - first <= 100000) return direct_power_sum(p, first, last);
  return direct_power_sum(p, first, first + kDirect - 1) +
         euler_maclaurin(p, static_cast<double>(first + kDirect), static_cast<double>(last));
}

double AtomFamily::location(std::int64_t n) const {
  double offset = start * std::pow(ratio, static_cast<double>(n));
  return side == Side::Right ? point + offset : point - offset;
}

double AtomFamily::mass(std::int64_t n) const {
  switch (rule) {
    case MassRule::Constant: return kappa;
    case MassRule::Geometric: return kappa * std::pow(rate, static_cast<double>(n));
    case MassRule::Power: return kappa * std::pow(static_cast<double>(n + 1), -rate);
  }
  return 0.0;
}

bool AtomFamily::total_mass_diverges() const {
  return rule == MassRule::Constant || (rule == MassRule::Power && rate <= 1.0);
}

double AtomFamily::mass_sum(std::int64_t first, std::int64_t last) const {
  if (last >= 0 && last < first) return 0.0;
  switch (rule) {
    case MassRule::Constant:
      if (last < 0) return kInf;
      return kappa * static_cast<double>(last - first + 1);
    case MassRule::Geometric: {
      double head = kappa * std::pow(rate, static_cast<double>(first)) / (1.0 - rate);
      if (last < 0) return head;
      return head * -std::expm1(static_cast<double>(last - first + 1) * std::log(rate));
    }
    case MassRule::Power:
      return kappa * power_sum(rate, first + 1, last < 0 ? -1 : last + 1);
  }
  return 0.0;
}

double AtomFamily::accumulation() const {
  if (!outward()) return point;
  return side == Side::Right ? kInf : -kInf;
}

std::optional<std::pair<std::int64_t, std::int64_t>> family_index_range(
    const AtomFamily& f, const IntervalSpec& interval) {
  auto j = intersect(interval, f.window);
  if (!j) return std::nullopt;
  const IntervalSpec& w = *j;
  // Locations move monotonically in n; `early` fails only for small n and
  // `late` fails only for large n.
  bool increasing = (f.side == Side::Right) == f.outward();
  auto above_lo = [&](double x) { return w.lo_closed ? x >= w.lo : x > w.lo; };
  auto below_hi = [&](double x) { return w.hi_closed ? x <= w.hi : x < w.hi; };
  auto early = [&](std::int64_t n) {
    double x = f.location(n);
    return increasing ? above_lo(x) : below_hi(x);
  };
  auto late = [&](std::int64_t n) {
    double x = f.location(n);
    return increasing ? below_hi(x) : above_lo(x);
  };
  bool unbounded;
  if (f.outward()) {
    unbounded = increasing ? std::isinf(w.hi) : std::isinf(w.lo);
  } else {
    // Locations approach the point strictly from one side.
    unbounded = increasing ? f.point <= w.hi : f.point >= w.lo;
  }

  std::int64_t first;
  if (early(0)) {
    first = 0;
  } else {
    if (!early(kIndexCap)) return std::nullopt;
    std::int64_t lo = 0, hi = kIndexCap;  // early(lo) false, early(hi) true
    while (hi - lo > 1) {
      std::int64_t mid = lo + (hi - lo) / 2;
      (early(mid) ? hi : lo) = mid;
    }
    first = hi;
  }
  std::int64_t last = -1;
  if (!unbounded) {
    if (!late(first)) return std::nullopt;
    std::int64_t lo = first, hi = kIndexCap;  // late(lo) true
    if (late(hi)) {
      last = hi;
    } else {
      while (hi - lo > 1) {
        std::int64_t mid = lo + (hi - lo) / 2;
        (late(mid) ? lo : hi) = mid;
      }
      last = lo;
    }
  }
  if (!w.contains(f.location(first))) {
    // Rounding can leave the first candidate outside when the window is a
    // single point; such windows only matter for exact atom locations.
    return std::nullopt;
  }
  return std::make_pair(first, last);
}

double DensityPart::density(double t) const {
  switch (form) {
    case Form::Constant: return c0;
    case Form::PowerLeft: return c0 * std::pow(t - interval.lo, exponent);
    case Form::PowerRight: return c0 * std::pow(interval.hi - t, exponent);
    case Form::Reciprocal: return c0 / std::fabs(t);
  }
  return 0.0;
}

double DensityPart::antiderivative(double t) const {
  switch (form) {
    case Form::Constant: return c0 * t;
    case Form::PowerLeft: {
      double v = t - interval.lo;
      if (exponent == -1.0) return c0 * std::log(v);
      return c0 * std::pow(v, exponent + 1.0) / (exponent + 1.0);
    }
    case Form::PowerRight: {
      double v = interval.hi - t;
      if (exponent == -1.0) return -c0 * std::log(v);
      return -c0 * std::pow(v, exponent + 1.0) / (exponent + 1.0);
    }
    case Form::Reciprocal:
      return interval.lo >= 0.0 ? c0 * std::log(t) : -c0 * std::log(-t);
  }
  return 0.0;
}

bool DensityPart::singular_left() const {
  if (!std::isfinite(interval.lo)) return false;
  if (form == Form::PowerLeft) return exponent <= -1.0;
  if (form == Form::Reciprocal) return interval.lo == 0.0;
  return false;
}

bool DensityPart::singular_right() const {
  if (!std::isfinite(interval.hi)) return false;
  if (form == Form::PowerRight) return exponent <= -1.0;
  if (form == Form::Reciprocal) return interval.hi == 0.0;
  return false;
}

bool DensityPart::divergent_left_tail() const {
  auto supp = support();
  if (!supp || std::isfinite(supp->lo)) return false;
  switch (form) {
    case Form::Constant: return true;
    case Form::PowerLeft: return false;
    case Form::PowerRight: return exponent >= -1.0;
    case Form::Reciprocal: return true;
  }
  return false;
}

std::optional<IntervalSpec> DensityPart::support() const {
  auto s = intersect(interval, window);
  if (!s || s->lo == s->hi) return std::nullopt;
  return s;
}

std::vector<double> DenseAtomicPart::first_atoms(std::size_t n) const {
  std::vector<double> out;
  out.reserve(n);
  const double lo = interval.lo;
  const double hi = interval.hi;
  auto place = [&](double q, bool negate) {
    if (std::isfinite(lo) && std::isfinite(hi)) return lo + (hi - lo) * q / (1.0 + q);
    if (std::isfinite(lo)) return lo + q;
    if (std::isfinite(hi)) return hi - q;
    return negate ? -q : q;
  };
  bool whole_line = !std::isfinite(lo) && !std::isfinite(hi);
  if (whole_line && n > 0) out.push_back(0.0);
  // Calkin-Wilf: q -> 1 / (2 floor(q) - q + 1) on exact rationals num/den.
  std::int64_t num = 1, den = 1;
  while (out.size() < n) {
    double q = static_cast<double>(num) / static_cast<double>(den);
    out.push_back(place(q, false));
    if (whole_line && out.size() < n) out.push_back(place(q, true));
    std::int64_t fl = num / den;
    std::int64_t next_den = 2 * fl * den - num + den;
    num = den;
    den = next_den;
  }
  return out;
}

StructuredMeasure::StructuredMeasure(std::vector<Component> components) {
  std::vector<Atom> atoms;
  std::optional<std::size_t> atomic_slot;
  for (auto& c : components) {
    if (auto* a = std::get_if<AtomicPart>(&c)) {
      for (const auto& atom : a->atoms) {
        if (!std::isfinite(atom.x)) schema_error("atom location must be finite");
        if (!(atom.mass > 0.0) || !std::isfinite(atom.mass)) {
          schema_error("atom mass must be finite and > 0");
        }
        atoms.push_back(atom);
      }
      if (!atomic_slot) {
        atomic_slot = components_.size();
        components_.push_back(AtomicPart{});
      }
      continue;
    }
    if (auto* f = std::get_if<AtomFamily>(&c)) validate(*f);
    if (auto* d = std::get_if<DensityPart>(&c)) validate(*d);
    if (auto* d = std::get_if<DenseAtomicPart>(&c)) validate(*d);
    if (auto* inf = std::get_if<InfiniteAtomPart>(&c)) {
      for (double x : inf->locations) {
        if (!std::isfinite(x)) schema_error("infinite atom location must be finite");
      }
      std::sort(inf->locations.begin(), inf->locations.end());
      inf->locations.erase(std::unique(inf->locations.begin(), inf->locations.end()),
                           inf->locations.end());
    }
    components_.push_back(std::move(c));
  }
  if (atomic_slot) {
    std::sort(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) { return x.x < y.x; });
    AtomicPart merged;
    for (const auto& atom : atoms) {
      if (!merged.atoms.empty() && merged.atoms.back().x == atom.x) {
        merged.atoms.back().mass += atom.mass;
      } else {
        merged.atoms.push_back(atom);
      }
    }
    components_[*atomic_slot] = std::move(merged);
  }
}

bool StructuredMeasure::has_infinite_atoms() const {
  return std::any_of(components_.begin(), components_.end(), [](const Component& c) {
    auto* inf = std::get_if<InfiniteAtomPart>(&c);
    return inf && !inf->locations.empty();
  });
}

std::vector<double> StructuredMeasure::structure_points() const {
  std::vector<double> pts;
  auto add = [&](double x) {
    if (std::isfinite(x)) pts.push_back(x);
  };
  auto add_interval = [&](const IntervalSpec& i) {
    add(i.lo);
    add(i.hi);
  };
  for (const auto& c : components_) {
    std::visit(
        [&](const auto& part) {
          using T = std::decay_t<decltype(part)>;
          if constexpr (std::is_same_v<T, AtomicPart>) {
            for (const auto& a : part.atoms) add(a.x);
          } else if constexpr (std::is_same_v<T, AtomFamily>) {
            add(part.point);
            add(part.location(0));
            add_interval(part.window);
          } else if constexpr (std::is_same_v<T, DensityPart>) {
            add_interval(part.interval);
            add_interval(part.window);
          } else if constexpr (std::is_same_v<T, InfiniteAtomPart>) {
            for (double x : part.locations) add(x);
          } else {
            add_interval(part.interval);
          }
        },
        c);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

ExtReal component_mass(const Component& c, const IntervalSpec& interval) {
  if (interval.empty()) return 0.0;
  return std::visit(
      [&](const auto& part) -> ExtReal {
        using T = std::decay_t<decltype(part)>;
        if constexpr (std::is_same_v<T, AtomicPart>) {
          double s = 0.0;
          for (const auto& a : part.atoms) {
            if (interval.contains(a.x)) s += a.mass;
          }
          return s;
        } else if constexpr (std::is_same_v<T, AtomFamily>) {
          return family_mass_on(part, interval);
        } else if constexpr (std::is_same_v<T, DensityPart>) {
          return density_mass_on(part, interval);
        } else if constexpr (std::is_same_v<T, InfiniteAtomPart>) {
          for (double x : part.locations) {
            if (interval.contains(x)) return ExtReal::infinity();
          }
          return 0.0;
        } else {
          auto j = intersect(interval, part.interval);
          if (!j) return 0.0;
          if (j->lo < j->hi) return ExtReal::infinity();
          return part.per_atom_mass;
        }
      },
      c);
}

ExtReal measure_eval(const StructuredMeasure& mu, const IntervalSpec& interval) {
  interval.validate();
  ExtReal total = 0.0;
  for (const auto& c : mu.components()) total += component_mass(c, interval);
  return total;
}

StructuredMeasure semi_finite_part(const StructuredMeasure& mu) {
  std::vector<Component> kept;
  for (const auto& c : mu.components()) {
    if (!std::holds_alternative<InfiniteAtomPart>(c)) kept.push_back(c);
  }
  return StructuredMeasure(std::move(kept));
}

}  // namespace gronwall
