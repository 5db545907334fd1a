// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "corpus.hpp"
#include "gronwall/condition.hpp"
#include "gronwall/construct.hpp"
#include "gronwall/demos.hpp"
#include "gronwall/error.hpp"

using namespace gronwall;

namespace {

struct Verdict {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail << what;
    ok = ok && cond;
  }
};

using Criterion = std::function<void(Verdict&)>;

void demo(Verdict& v, const std::string& name) {
  DemoOutcome d = run_demo(name);
  for (const auto& c : d.report["checks"]) v.require(c["passed"].get<bool>(), c["check"].get<std::string>());
}

GridSpec grid(IntervalSpec i, int count, bool atoms = true) {
  GridSpec g;
  g.interval = i;
  g.count = count;
  g.spacing = GridSpec::Spacing::Geometric;
  g.include_atoms = atoms;
  return g;
}

void discrete_gronwall(Verdict& v) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = -kInf;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Atom> atoms;
    for (double x = 0.1 + u(rng); x < 10.0; x += 0.05 + 1.5 * u(rng)) atoms.push_back({x, 0.01 + 3.0 * u(rng)});
    StructuredMeasure mu({AtomicPart{atoms}});
    std::vector<Piece> eps;
    for (double x = 0.0; x < 10.0;) {
      double next = std::min(10.0, x + 0.1 + 2.0 * u(rng));
      eps.push_back({IntervalSpec::right_closed(x, next), {Term::constant(-u(rng))}});
      x = next;
    }
    // y = integral - eps, so y <= integral everywhere.
    auto y = solve_forward(mu, PiecewiseFunction(eps), 0, 10);
    for (double t : grid_points(grid(IntervalSpec::open(0, 10), 256), mu)) worst = std::max(worst, y.value(t));
  }
  v.require(worst <= 1e-12, "max y = " + std::to_string(worst));
}

StructuredMeasure construction_instance(int i, std::mt19937_64& rng, double& b) {
  using corpus::density;
  using corpus::family;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  b = 0.5 + 1.5 * u(rng);
  switch (i % 5) {
    case 0: return StructuredMeasure({density(0, 1, DensityPart::Form::Reciprocal, 0.2 + 2.8 * u(rng))});
    case 1:
      return StructuredMeasure({density(0, 3, DensityPart::Form::PowerLeft, 0.2 + 1.8 * u(rng), -1.0 - 1.5 * u(rng))});
    case 2:
      return StructuredMeasure(
          {family(0, Side::Right, AtomFamily::MassRule::Constant, 0.2 + 1.8 * u(rng), 0.0, 1.0, 0.3 + 0.5 * u(rng))});
    case 3:
      return StructuredMeasure({family(0, Side::Right, AtomFamily::MassRule::Power, 2.0 + u(rng), 0.3 + 0.4 * u(rng),
                                       1.0, 0.3 + 0.5 * u(rng))});
    default: {
      std::vector<Atom> atoms;
      for (double x = 0.1 + 0.3 * u(rng); x < b; x += 0.2 + 0.5 * u(rng)) atoms.push_back({x, 0.1 + u(rng)});
      return StructuredMeasure({density(0, 1, DensityPart::Form::Reciprocal, 0.3 + u(rng)), AtomicPart{atoms},
                                family(0, Side::Right, AtomFamily::MassRule::Geometric, u(rng) + 0.1, 0.5, 0.9)});
    }
  }
}

void construction(Verdict& v) {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 50; ++i) {
    double b = 1.0;
    StructuredMeasure mu = construction_instance(i, rng, b);
    SolutionFunction y(mu, 0, b);
    auto report = verify_inequality(y, mu, 0, b, grid(IntervalSpec::open(0, b), 256));
    const std::string tag = "instance " + std::to_string(i) + ": ";
    double prev = 0.0, worst = 0.0;
    bool range = true, monotone = true;
    for (std::size_t k = 0; k < report.points.size(); ++k) {
      // y may underflow near a; its logarithm carries the range check.
      double val = report.values[k], log_val = y.log_value(report.points[k]);
      range = range && std::isfinite(log_val) && log_val <= 0.0;
      monotone = monotone && val >= prev;
      prev = val;
      worst = std::max(worst, std::fabs(report.residuals[k]));
    }
    v.require(range, tag + "range");
    v.require(monotone, tag + "monotone");
    v.require(worst <= report.tolerance, tag + "residual " + std::to_string(worst));
    v.require(y.value(std::nextafter(b, 0.0)) >= 1.0 - 1e-6, tag + "y(b-)");
    double near = y.value(1e-300), mid = y.value(1e-10);
    v.require(near <= 0.05 && near <= mid, tag + "y(a+)");
  }
}

void taming(Verdict& v) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int cases = 0;
  for (const auto& e : corpus::measures()) {
    for (double a : e.probes) {
      if (check_condition_M_a(e.mu, a).holds) continue;
      ++cases;
      const std::string tag = e.name + " at a=" + format_ext(a) + ": ";
      TamedMeasure tm = extract_taming_subset(semi_finite_part(e.mu), a);
      for (int k = 0; k < 20; ++k) {
        double b, t;
        if (std::isfinite(a)) {
          b = a + (tm.horizon - a) * (0.01 + 0.99 * u(rng));
          t = a + (b - a) * std::pow(u(rng), 4.0) + 1e-300;
        } else {
          b = tm.horizon - 10.0 * u(rng);
          t = b - std::exp2(20.0 * u(rng));
        }
        v.require(measure_eval(tm.mu_E, IntervalSpec::open(t, b)).is_finite(), tag + "mu_E((t,b)) infinite");
        v.require(!measure_eval(tm.mu_E, IntervalSpec::open(a, b)).is_finite(), tag + "mu_E((a,b)) finite");
      }
    }
  }
  v.require(cases >= 8, "too few failing cases");
}

PiecewiseFunction candidate(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double c = lo + (hi - lo) * 0.9 * u(rng);
  double d = c + (hi - c) * (0.1 + 0.9 * u(rng));
  IntervalSpec support = IntervalSpec::open(c, d);
  switch (static_cast<int>(3 * u(rng))) {
    case 0: return PiecewiseFunction::single(support, Term::constant(0.01 + 10.0 * u(rng)));
    case 1: return PiecewiseFunction::single(support, Term::power(0.01 + 10.0 * u(rng), c, 3.0 * u(rng)));
    default: return PiecewiseFunction::single(support, Term::exp(0.01 + u(rng), 10.0 * u(rng) - 5.0));
  }
}

void round_trip(Verdict& v) {
  std::mt19937_64 rng(37);
  auto entries = corpus::measures();
  v.require(entries.size() >= 12, "corpus too small");
  for (const auto& e : entries) {
    for (double a : e.probes) {
      const std::string tag = e.name + " at a=" + format_ext(a) + ": ";
      auto local = check_condition_M_a(e.mu, a);
      if (!local.holds) {
        try {
          auto bundle = build_counterexample(e.mu, a, std::nullopt, grid(IntervalSpec::open(a, default_b(a)), 128));
          v.require(bundle.report.implication_verdict == ImplicationVerdict::CounterexampleToI, tag + "verdict");
          v.require(bundle.integrability_certificate.is_finite() &&
                        bundle.integrability_certificate > ExtReal(0.0),
                    tag + "certificate");
        } catch (const Error& err) {
          v.require(false, tag + err.what());
        }
        continue;
      }
      bool rejected = false;
      try {
        build_counterexample(e.mu, a);
      } catch (const Error& err) {
        rejected = err.kind() == ErrorKind::HypothesisViolated;
      }
      v.require(rejected, tag + "bundle built although (M_a) holds");
      const double t = *local.witness;
      const double lo = std::isfinite(a) ? a : t - 10.0;
      for (int k = 0; k < 100; ++k) {
        PiecewiseFunction y = candidate(rng, lo, t);
        const Piece& p = y.pieces().front();
        std::vector<double> near_start;
        for (int j = 1; j <= 40; ++j) near_start.push_back(p.interval.lo + std::ldexp(p.interval.hi - p.interval.lo, -j));
        // A coarse pass rejects most candidates; survivors get the full grid.
        GridSpec coarse = grid(IntervalSpec::open(a, t), 4), fine = grid(IntervalSpec::open(a, t), 64);
        coarse.extra_points = near_start;
        fine.extra_points = near_start;
        try {
          auto r = verify_inequality(y, e.mu, a, t, coarse);
          if (r.implication_verdict == ImplicationVerdict::CounterexampleToI) r = verify_inequality(y, e.mu, a, t, fine);
          v.require(r.implication_verdict != ImplicationVerdict::CounterexampleToI, tag + "falsified by a candidate");
        } catch (const Error&) {
          // Not integrable: not a valid candidate.
        }
      }
    }
  }
}

void semi_finite(Verdict& v) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    StructuredMeasure mu = corpus::random_finite(rng, true);
    double x = -4.0 + 8.0 * u(rng), y = -4.0 + 8.0 * u(rng);
    IntervalSpec I = IntervalSpec::closed(std::min(x, y), std::max(x, y));
    double exact = measure_eval(semi_finite_part(mu), I).value();
    double approx = corpus::sup_oracle(mu, I, rng);
    v.require(approx <= exact + 1e-9 * std::max(1.0, exact) && approx >= exact - 0.02 * std::max(1.0, exact),
              "sup oracle mismatch on instance " + std::to_string(trial));
  }
  int equalities = 0, null_true = 0, null_false = 0;
  for (const auto& e : corpus::measures()) {
    StructuredMeasure sf = semi_finite_part(e.mu);
    for (int k = 0; k < 8; ++k) {
      double c = 0.05 + 0.4 * u(rng), d = c + 0.1 + 0.4 * u(rng);
      auto f = PiecewiseFunction::single(IntervalSpec::open(c, d), Term::poly({u(rng) - 0.5, 2.0 * u(rng) - 1.0}));
      const IntervalSpec line = IntervalSpec::real_line();
      try {
        if (!integrate_abs(f, e.mu, line).value.is_finite()) continue;
        double lhs = integrate(f, e.mu, line).value.value(), rhs = integrate(f, sf, line).value.value();
        v.require(lhs == rhs, e.name + ": integrals differ");
        ++equalities;
        double r = 0.6 * u(rng);
        OutsideSetPart g(f, {IntervalSpec::closed(-r, r)});
        bool null_mu = integrate_abs(g, e.mu, line).value == ExtReal(0.0);
        bool null_sf = integrate_abs(g, sf, line).value == ExtReal(0.0);
        v.require(null_mu == null_sf, e.name + ": nullsets differ");
        (null_mu ? null_true : null_false)++;
      } catch (const Error& err) {
        v.require(err.kind() == ErrorKind::UnsupportedDenseCombination, e.name + ": " + err.what());
      }
    }
  }
  v.require(equalities >= 50 && null_true > 0 && null_false > 0, "integral checks too sparse");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, Criterion>> criteria{
      {"identity solution on (0, 1) violates the implication", [](Verdict& v) { demo(v, "intro-example"); }},
      {"t^-2 tail on the line fails (M) at -inf", [](Verdict& v) { demo(v, "remark-a"); }},
      {"non-integrable candidates are rejected", [](Verdict& v) { demo(v, "remark-b"); }},
      {"dense atoms and the integral equation", [](Verdict& v) { demo(v, "remark-c"); }},
      {"discrete Gronwall on 200 random atomic measures", discrete_gronwall},
      {"construction property suite (50 instances)", construction},
      {"taming property on failing corpus points", taming},
      {"round trip on the corpus", round_trip},
      {"inhomogeneous unboundedness", [](Verdict& v) { demo(v, "inhomogeneous"); }},
      {"semi-finite part properties", semi_finite},
  };
  const auto start = std::chrono::steady_clock::now();
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2zu  %s  (%.2fs)%s%s\n", v.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs,
                v.ok ? "" : "  ", v.ok ? "" : v.detail.str().c_str());
    failures += v.ok ? 0 : 1;
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("total %.2fs\n", total);
  return failures == 0 && total < 60.0 ? 0 : 1;
}
