#include "gronwall/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <variant>

#include "gronwall/closed_form.hpp"
#include "gronwall/error.hpp"
#include "gronwall/quadrature.hpp"

namespace gronwall {
namespace {

constexpr std::int64_t kMaxTerms = std::int64_t{1} << 22;
constexpr double kSeriesTol = 1e-12;

/// Positive and negative parts accumulated separately; both stay >= 0.
struct Accumulator {
  ExtReal pos{0.0};
  ExtReal neg{0.0};
  double error = 0.0;
  double tail = 0.0;
  IntegrationPath path = IntegrationPath::ClosedForm;
  bool dense = false;

  void add(ExtReal v) {
    if (v > ExtReal(0.0)) {
      pos += v;
    } else if (v < ExtReal(0.0)) {
      neg += -v;
    }
  }
  void mark(IntegrationPath p) { path = std::max(path, p); }
};

ExtReal signed_inf(int sign) { return sign > 0 ? ExtReal::infinity() : ExtReal::neg_infinity(); }

/// Bound on sum_{n > N} |f(x_n)| m_n from the integrand's vanishing bound.
double vanishing_tail(const Integrand& f, const Segment& seg, const AtomFamily& fam,
                      std::int64_t N) {
  const double p = fam.accumulation();
  double next = fam.location(N + 1);
  // Collapsed locations: the remaining atoms lie no farther out than x_N.
  if (next == p) next = fam.location(N);
  const double delta = std::isinf(p) ? next : std::fabs(next - p);
  VanishingBound vb = f.vanishing_bound(seg, p, delta);
  if (std::isinf(vb.coeff)) return kInf;
  if (vb.coeff == 0.0) return 0.0;
  const double rest = fam.mass_sum(N + 1, -1);
  if (std::isinf(p) || vb.order <= 0.0) return vb.coeff * rest;
  const double r = vb.order;
  const double rho_r = std::pow(fam.ratio, r);
  const double lead = vb.coeff * std::pow(fam.start, r) * std::pow(rho_r, static_cast<double>(N + 1));
  switch (fam.rule) {
    case AtomFamily::MassRule::Constant:
      return fam.kappa * lead / (1.0 - rho_r);
    case AtomFamily::MassRule::Geometric: {
      double q = fam.rate * rho_r;
      return fam.kappa * vb.coeff * std::pow(fam.start, r) * std::pow(q, static_cast<double>(N + 1)) /
             (1.0 - q);
    }
    case AtomFamily::MassRule::Power:
      return fam.kappa * std::pow(static_cast<double>(N + 2), -fam.rate) * lead / (1.0 - rho_r);
  }
  return kInf;
}

/// Sum of term(n) over an infinite index range starting at `first`,
/// truncated once the tail bound is below tolerance.
template <class TermFn, class Tail>
ExtReal truncated_series(const AtomFamily& fam, std::int64_t first, TermFn term_at, Tail tail_bound,
                         Accumulator& acc) {
  double sum = 0.0, comp = 0.0;
  for (std::int64_t n = first; n < first + kMaxTerms; ++n) {
    if (fam.location(n) == fam.accumulation()) {
      // Atoms closer to the accumulation point than double resolution cannot
      // be evaluated; accept only if their total contribution is negligible.
      double tb = n > 0 ? tail_bound(n - 1) : kInf;
      if (tb <= kSeriesTol * std::max(1.0, std::fabs(sum))) {
        acc.tail += tb;
        acc.mark(IntegrationPath::TruncatedSeries);
        return ExtReal(sum);
      }
      throw Error(ErrorKind::NumericalFailure,
                  "atoms below double resolution near " + format_ext(fam.accumulation()) +
                      " carry non-negligible mass");
    }
    ExtReal term = term_at(n);
    if (!term.is_finite()) return term;
    double y = term.value() - comp;  // compensated summation
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if ((n - first) % 32 == 31) {
      double tb = tail_bound(n);
      if (tb <= kSeriesTol * std::max(1.0, std::fabs(sum))) {
        acc.tail += tb;
        acc.mark(IntegrationPath::TruncatedSeries);
        return ExtReal(sum);
      }
    }
  }
  throw Error(ErrorKind::NumericalFailure,
              "series tail could not be certified near " + format_ext(fam.accumulation()));
}

void add_family(const Integrand& f, const StructuredMeasure& mu, const Segment& seg,
                const AtomFamily& fam, Accumulator& acc) {
  auto range = family_index_range(fam, seg.interval);
  if (!range) return;
  auto [first, last] = *range;
  if (last >= 0) {
    if (last - first >= kMaxTerms) {
      throw Error(ErrorKind::NumericalFailure, "atom family range too long to sum directly");
    }
    double sum = 0.0;
    for (std::int64_t n = first; n <= last; ++n) sum += f.value(fam.location(n)) * fam.mass(n);
    acc.add(ExtReal(sum));
    return;
  }
  const double p = fam.accumulation();
  if (fam.total_mass_diverges()) {
    double loc = fam.location(first);
    VanishingBound vb = f.vanishing_bound(seg, p, std::isinf(p) ? loc : std::fabs(loc - p));
    if (vb.limit > 0.0) {
      acc.add(signed_inf(seg.sign));
      return;
    }
  }
  // f = L + (f - L) near a finite accumulation point: the constant part sums in
  // closed form and the remainder vanishes at p.
  double limit = seg.piece && std::isfinite(p) ? seg.piece->eval(p) : 0.0;
  if (limit != 0.0 && std::isfinite(limit)) {
    PiecewiseFunction g = PiecewiseFunction({*seg.piece}).plus(
        PiecewiseFunction::single(seg.piece->interval, Term::constant(-limit)));
    ExtReal s(0.0);
    if (!g.pieces().empty()) {
      Segment gseg{seg.interval, seg.sign, &g.pieces().front()};
      auto term_at = [&](std::int64_t n) { return ExtReal(g.value(fam.location(n)) * fam.mass(n)); };
      auto tail = [&](std::int64_t n) { return vanishing_tail(g, gseg, fam, n); };
      s = truncated_series(fam, first, term_at, tail, acc);
    }
    acc.add(ExtReal(limit * fam.mass_sum(first, -1)) + s);
    return;
  }
  auto term_at = [&](std::int64_t n) { return ExtReal(f.value(fam.location(n)) * fam.mass(n)); };
  auto tail = [&](std::int64_t n) {
    double b = vanishing_tail(f, seg, fam, n);
    if (auto own = f.tail_integral_bound(mu, p, fam.location(n))) b = std::min(b, *own);
    return b;
  };
  acc.add(truncated_series(fam, first, term_at, tail, acc));
}

bool blows_up(const Segment& seg, const Integrand& f, double end) {
  if (std::isinf(end)) return true;
  double v = seg.piece ? seg.piece->eval(end) : f.value(end);
  return !std::isfinite(v);
}

void add_density(const Integrand& f, const StructuredMeasure& mu, const Segment& seg,
                 const DensityPart& d, Accumulator& acc) {
  auto supp = d.support();
  if (!supp) return;
  auto k = intersect(seg.interval, *supp);
  if (!k || k->lo >= k->hi) return;
  if (seg.piece) {
    if (auto cf = closed_form_integral(*seg.piece, d, *k)) {
      acc.add(*cf);
      return;
    }
  }
  ShellOptions opt;
  opt.singular_lo = (d.singular_left() && k->lo == d.interval.lo) || blows_up(seg, f, k->lo);
  opt.singular_hi = (d.singular_right() && k->hi == d.interval.hi) || blows_up(seg, f, k->hi);
  opt.tail_bound = [&](double end, double u) { return f.tail_integral_bound(mu, end, u); };
  auto g = [&](double u) { return std::fabs(f.value(u)) * d.density(u); };
  QuadratureResult q = integrate_sign_constant(g, k->lo, k->hi, opt);
  acc.mark(IntegrationPath::Quadrature);
  if (q.divergent) {
    acc.add(signed_inf(seg.sign));
    return;
  }
  acc.error += q.error;
  acc.add(ExtReal(seg.sign * q.value));
}

void add_dense(const Integrand& f, const Segment& seg, const DenseAtomicPart& dense,
               Accumulator& acc) {
  auto k = intersect(seg.interval, dense.interval);
  if (!k) return;
  if (k->lo == k->hi) {
    acc.add(ExtReal(f.value(k->lo) * dense.per_atom_mass));
    return;
  }
  double probe = std::isfinite(k->lo) && std::isfinite(k->hi)
                     ? k->lo + 0.5 * (k->hi - k->lo)
                     : (std::isfinite(k->lo) ? k->lo + 1.0 : (std::isfinite(k->hi) ? k->hi - 1.0 : 0.0));
  if (f.value(probe) == 0.0) return;
  acc.dense = true;
  acc.add(signed_inf(seg.sign));
}

void add_support_family(const Integrand& f, const StructuredMeasure& mu, const AtomFamily& fam,
                        const IntervalSpec& I, Accumulator& acc) {
  auto range = family_index_range(fam, I);
  if (!range) return;
  auto [first, last] = *range;
  auto point_mass = [&](std::int64_t n) {
    return measure_eval(mu, IntervalSpec::point(fam.location(n)));
  };
  if (last >= 0) {
    for (std::int64_t n = first; n <= last; ++n) {
      acc.add(ExtReal(f.value(fam.location(n))) * point_mass(n));
    }
    return;
  }
  const double p = fam.accumulation();
  auto term_at = [&](std::int64_t n) { return ExtReal(f.value(fam.location(n))) * point_mass(n); };
  auto tail = [&](std::int64_t n) {
    auto b = f.tail_integral_bound(mu, p, fam.location(n));
    return b ? *b : kInf;
  };
  acc.add(truncated_series(fam, first, term_at, tail, acc));
}

Accumulator accumulate(const Integrand& f, const StructuredMeasure& mu, const IntervalSpec& I) {
  I.validate();
  Accumulator acc;
  if (I.empty()) return acc;
  for (const Segment& seg : f.segments(I)) {
    for (const auto& c : mu.components()) {
      if (const auto* atoms = std::get_if<AtomicPart>(&c)) {
        for (const Atom& a : atoms->atoms) {
          if (seg.interval.contains(a.x)) acc.add(ExtReal(f.value(a.x) * a.mass));
        }
      } else if (const auto* fam = std::get_if<AtomFamily>(&c)) {
        add_family(f, mu, seg, *fam, acc);
      } else if (const auto* d = std::get_if<DensityPart>(&c)) {
        add_density(f, mu, seg, *d, acc);
      } else if (const auto* inf = std::get_if<InfiniteAtomPart>(&c)) {
        for (double x : inf->locations) {
          if (!seg.interval.contains(x)) continue;
          double v = f.value(x);
          if (v != 0.0) acc.add(signed_inf(v > 0.0 ? 1 : -1));
        }
      } else if (const auto* dense = std::get_if<DenseAtomicPart>(&c)) {
        add_dense(f, seg, *dense, acc);
      }
    }
  }
  for (double x : f.support_points(I)) {
    acc.add(ExtReal(f.value(x)) * measure_eval(mu, IntervalSpec::point(x)));
  }
  for (const AtomFamily& fam : f.support_families()) add_support_family(f, mu, fam, I, acc);
  return acc;
}

IntegralResult finish(const Accumulator& acc, ExtReal value) {
  IntegralResult r;
  r.value = value;
  r.path = acc.path;
  r.abs_integrable = acc.pos.is_finite() && acc.neg.is_finite();
  r.error = acc.error;
  r.tail_bound = acc.tail;
  return r;
}

}  // namespace

const char* to_string(IntegrationPath path) {
  switch (path) {
    case IntegrationPath::ClosedForm: return "closed-form";
    case IntegrationPath::TruncatedSeries: return "truncated-series";
    case IntegrationPath::Quadrature: return "quadrature";
  }
  return "unknown";
}

IntegralResult integrate(const Integrand& f, const StructuredMeasure& mu, const IntervalSpec& I) {
  Accumulator acc = accumulate(f, mu, I);
  if (!acc.pos.is_finite() && !acc.neg.is_finite()) {
    if (acc.dense) {
      throw Error(ErrorKind::UnsupportedDenseCombination,
                  "positive and negative parts both infinite on a dense atomic part");
    }
    throw Error(ErrorKind::NonIntegrable, "positive and negative parts are both infinite");
  }
  return finish(acc, acc.pos - acc.neg);
}

IntegralResult integrate_abs(const Integrand& f, const StructuredMeasure& mu,
                             const IntervalSpec& I) {
  Accumulator acc = accumulate(f, mu, I);
  return finish(acc, acc.pos + acc.neg);
}

}  // namespace gronwall
