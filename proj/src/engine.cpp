#include "gronwall/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>
#include <variant>

#include "gronwall/error.hpp"

namespace gronwall {
namespace {

constexpr double kClosedFormTol = 1e-9;
constexpr double kQuadratureTol = 1e-6;

double tolerance_for(IntegrationPath path) {
  return path == IntegrationPath::Quadrature ? kQuadratureTol : kClosedFormTol;
}

PiecewiseFunction restrict_to(const PiecewiseFunction& f, const IntervalSpec& j) {
  std::vector<Piece> out;
  for (const auto& p : f.pieces()) {
    auto k = intersect(p.interval, j);
    if (k && !k->empty()) out.push_back(Piece{*k, p.terms});
  }
  return PiecewiseFunction(std::move(out));
}

void add_family_points(const AtomFamily& fam, const IntervalSpec& i, std::vector<double>& pts) {
  auto range = family_index_range(fam, i);
  if (!range) return;
  auto [first, last] = *range;
  std::int64_t stop = last < 0 ? first + GridSpec::kFamilyGridAtoms - 1
                              : std::min(last, first + GridSpec::kFamilyGridAtoms - 1);
  for (std::int64_t n = first; n <= stop; ++n) pts.push_back(fam.location(n));
}

std::vector<Atom> forward_atoms(const StructuredMeasure& mu, double a, double b) {
  const IntervalSpec window = IntervalSpec::open(a, b);
  std::map<double, double> atoms;
  for (const auto& c : mu.components()) {
    if (const auto* part = std::get_if<AtomicPart>(&c)) {
      for (const Atom& at : part->atoms) {
        if (window.contains(at.x)) atoms[at.x] += at.mass;
      }
    } else if (const auto* fam = std::get_if<AtomFamily>(&c)) {
      auto range = family_index_range(*fam, window);
      if (!range) continue;
      auto [first, last] = *range;
      if (last < 0) {
        if (fam->total_mass_diverges()) {
          throw Error(ErrorKind::LocalFinitenessViolated,
                      "divergent atom family inside (a, b) at " + format_ext(fam->accumulation()));
        }
        const double total = fam->mass_sum(first, -1);
        last = first;
        while (fam->mass_sum(last + 1, -1) >= 1e-14 * total) {
          if (++last - first > (std::int64_t{1} << 22)) {
            throw Error(ErrorKind::NumericalFailure, "atom family truncation too long");
          }
        }
      }
      for (std::int64_t n = first; n <= last; ++n) atoms[fam->location(n)] += fam->mass(n);
    } else if (const auto* d = std::get_if<DensityPart>(&c)) {
      ExtReal m = component_mass(*d, window);
      if (m > ExtReal(0.0)) {
        throw Error(ErrorKind::HypothesisViolated,
                    "solve_forward needs a purely atomic measure on (a, b)");
      }
    } else if (const auto* inf = std::get_if<InfiniteAtomPart>(&c)) {
      for (double x : inf->locations) {
        if (window.contains(x)) {
          throw Error(ErrorKind::LocalFinitenessViolated, "infinite atom at " + format_ext(x));
        }
      }
    } else if (const auto* dense = std::get_if<DenseAtomicPart>(&c)) {
      auto k = intersect(dense->interval, window);
      if (k && k->lo < k->hi) {
        throw Error(ErrorKind::LocalFinitenessViolated, "dense atomic part inside (a, b)");
      }
    }
  }
  std::vector<Atom> out;
  for (auto [x, m] : atoms) out.push_back({x, m});
  return out;
}

}  // namespace

int default_grid_count() {
  if (const char* env = std::getenv("GRONWALL_GRID_COUNT")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 1'000'000) return static_cast<int>(v);
  }
  return 1024;
}

std::vector<double> grid_points(const GridSpec& grid, const StructuredMeasure& mu,
                                const Integrand* y) {
  const IntervalSpec& iv = grid.interval;
  iv.validate();
  if (grid.count <= 0) throw Error(ErrorKind::Schema, "grid count must be positive");
  std::vector<double> pts;
  const bool geometric = grid.spacing == GridSpec::Spacing::Geometric;
  double lo = iv.lo, hi = iv.hi;
  if (!std::isfinite(lo) && !std::isfinite(hi)) {
    lo = -64.0;
    hi = 64.0;
  } else if (!std::isfinite(hi)) {
    hi = lo + 64.0 * std::max(1.0, std::fabs(lo));
  }
  const int n = grid.count;
  if (!std::isfinite(lo)) {
    const double s = std::max(1.0, std::fabs(hi));
    for (int i = 0; i < n; ++i) {
      double u = (i + 0.5) / n;
      pts.push_back(geometric ? hi - s * (std::exp2(40.0 * u) - 1.0) : hi - 64.0 * s * u);
    }
  } else if (geometric) {
    for (int i = 0; i < n; ++i) pts.push_back(lo + (hi - lo) * std::exp2(-40.0 * (i + 0.5) / n));
  } else {
    for (int i = 0; i < n; ++i) pts.push_back(lo + (hi - lo) * (i + 1.0) / (n + 1.0));
  }
  if (grid.include_atoms) {
    for (const auto& c : mu.components()) {
      if (const auto* part = std::get_if<AtomicPart>(&c)) {
        for (const Atom& at : part->atoms) pts.push_back(at.x);
      } else if (const auto* fam = std::get_if<AtomFamily>(&c)) {
        add_family_points(*fam, iv, pts);
      } else if (const auto* inf = std::get_if<InfiniteAtomPart>(&c)) {
        pts.insert(pts.end(), inf->locations.begin(), inf->locations.end());
      } else if (const auto* dense = std::get_if<DenseAtomicPart>(&c)) {
        for (double x : dense->first_atoms(GridSpec::kFamilyGridAtoms)) pts.push_back(x);
      }
    }
    if (y) {
      for (double x : y->support_points(iv)) pts.push_back(x);
      for (const auto& fam : y->support_families()) add_family_points(fam, iv, pts);
    }
  }
  pts.insert(pts.end(), grid.extra_points.begin(), grid.extra_points.end());
  std::erase_if(pts, [&](double t) { return !std::isfinite(t) || !iv.contains(t); });
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

PiecewiseFunction solve_forward(const StructuredMeasure& mu, const PiecewiseFunction& f, double a,
                                double b) {
  if (!(a < b) || std::isinf(b) || std::isnan(a)) {
    throw Error(ErrorKind::Schema, "solve_forward needs a < b with b finite");
  }
  const std::vector<Atom> atoms = forward_atoms(mu, a, b);
  std::vector<Piece> steps;
  double running = 0.0;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const double yk = f.value(atoms[k].x) + running;
    running += yk * atoms[k].mass;
    if (!std::isfinite(running)) {
      throw Error(ErrorKind::NumericalFailure, "forward recursion overflowed");
    }
    if (running == 0.0) continue;
    const double next = k + 1 < atoms.size() ? atoms[k + 1].x : b;
    IntervalSpec cell = k + 1 < atoms.size() ? IntervalSpec::right_closed(atoms[k].x, next)
                                             : IntervalSpec::open(atoms[k].x, next);
    steps.push_back(Piece{cell, {Term::constant(running)}});
  }
  return restrict_to(f, IntervalSpec::open(a, b)).plus(PiecewiseFunction(std::move(steps)));
}

const char* to_string(ImplicationVerdict v) {
  return v == ImplicationVerdict::CounterexampleToI ? "counterexample-to-(I)" : "consistent-with-(I)";
}

VerificationReport verify_inequality(const Integrand& y, const StructuredMeasure& mu, double a,
                                     double b, const GridSpec& grid, const Integrand* f) {
  VerificationReport r;
  r.grid = grid;
  r.a = a;
  r.b = b;
  r.points = grid_points(grid, mu, &y);
  for (double t : r.points) {
    IntegralResult ir;
    try {
      ir = integrate(y, mu, IntervalSpec::open(a, t));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NonIntegrable && e.kind() != ErrorKind::UnsupportedDenseCombination) throw;
      throw Error(ErrorKind::NotIntegrable, "|y| is not integrable over (a, " + format_ext(t) + ")");
    }
    if (!ir.abs_integrable) {
      throw Error(ErrorKind::NotIntegrable, "|y| is not integrable over (a, " + format_ext(t) + ")");
    }
    const double yt = y.value(t);
    const double ft = f ? f->value(t) : 0.0;
    r.values.push_back(yt);
    r.inhomogeneity.push_back(ft);
    r.integrals.push_back(ir.value);
    r.residuals.push_back(yt - ft - ir.value.value());
    r.worst_path = std::max(r.worst_path, ir.path);
    if (yt < 0.0) r.positive_part_reduction = true;
  }
  r.tolerance = tolerance_for(r.worst_path);
  r.max_violation = r.residuals.empty() ? -kInf : *std::max_element(r.residuals.begin(), r.residuals.end());
  r.inequality_verdict = r.max_violation <= r.tolerance;

  const auto segments = y.segments(IntervalSpec::open(a, b));
  auto inside_positive = [&](double s, double t) {
    return std::any_of(segments.begin(), segments.end(), [&](const Segment& seg) {
      return seg.sign > 0 && seg.interval.contains(s) && seg.interval.contains(t);
    });
  };
  ExtReal mass(0.0);
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    if (r.values[i] <= r.tolerance) continue;
    mass += measure_eval(mu, IntervalSpec::point(r.points[i]));
    if (i + 1 < r.points.size() && r.values[i + 1] > r.tolerance &&
        inside_positive(r.points[i], r.points[i + 1])) {
      mass += measure_eval(mu, IntervalSpec::open(r.points[i], r.points[i + 1]));
    }
  }
  r.positivity_mass = mass;
  r.implication_verdict = r.inequality_verdict && mass > ExtReal(0.0)
                              ? ImplicationVerdict::CounterexampleToI
                              : ImplicationVerdict::ConsistentWithI;
  return r;
}

std::string to_csv(const VerificationReport& report) {
  std::ostringstream out;
  out << "t,y,integral,residual\n";
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    out << format_ext(report.points[i]) << ',' << format_ext(report.values[i]) << ','
        << format_ext(report.integrals[i].value()) << ',' << format_ext(report.residuals[i]) << '\n';
  }
  return out.str();
}

ProbeReport constant_sign_probe(const Integrand& y, const StructuredMeasure& mu, double a,
                                const GridSpec& grid) {
  ProbeReport p;
  auto pts = grid_points(grid, mu, &y);
  std::vector<double> vals;
  IntegrationPath worst = IntegrationPath::ClosedForm;
  for (double t : pts) {
    IntegralResult ir = integrate(y, mu, IntervalSpec::open(a, t));
    worst = std::max(worst, ir.path);
    double yt = y.value(t);
    vals.push_back(yt);
    p.max_residual = std::max(p.max_residual, std::fabs(yt - ir.value.value()));
  }
  p.tolerance = tolerance_for(worst);
  p.residuals_ok = p.max_residual <= p.tolerance;
  bool nonneg = std::all_of(vals.begin(), vals.end(), [&](double v) { return v >= -p.tolerance; });
  bool nonpos = std::all_of(vals.begin(), vals.end(), [&](double v) { return v <= p.tolerance; });
  p.sign_verdict = nonneg || nonpos;
  p.sign = nonneg && nonpos ? 0 : (nonneg ? 1 : -1);
  p.monotone_verdict = true;
  for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
    double step = vals[i + 1] - vals[i];
    if ((p.sign >= 0 && step < -p.tolerance) || (p.sign < 0 && step > p.tolerance)) {
      p.monotone_verdict = false;
    }
  }
  p.theory_violation = p.residuals_ok && !(p.sign_verdict && p.monotone_verdict);
  return p;
}

InhomogeneousDemo demo_inhomogeneous_unboundedness(const StructuredMeasure& mu,
                                                   const PiecewiseFunction& f,
                                                   const PiecewiseFunction& base_y,
                                                   const PiecewiseFunction& tilde_y,
                                                   const std::vector<int>& n_values, double a,
                                                   double b, const GridSpec& grid) {
  InhomogeneousDemo demo;
  demo.n_values = n_values;
  for (int n : n_values) {
    PiecewiseFunction yn = base_y.plus(tilde_y.scaled(n));
    VerificationReport rep = verify_inequality(yn, mu, a, b, grid, &f);
    double sup = -kInf;
    for (std::size_t i = 0; i < rep.points.size(); ++i) {
      if (tilde_y.value(rep.points[i]) > 0.0) sup = std::max(sup, rep.values[i]);
    }
    demo.sup_trace.push_back(sup);
    demo.reports.push_back(std::move(rep));
  }
  return demo;
}

}  // namespace gronwall
