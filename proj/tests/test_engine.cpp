#include "doctest.h"

#include <cmath>
#include <random>

#include "gronwall/engine.hpp"
#include "gronwall/error.hpp"

using namespace gronwall;

namespace {

DensityPart density(double lo, double hi, DensityPart::Form form = DensityPart::Form::Constant,
                    double exponent = 0.0) {
  DensityPart d;
  d.interval = IntervalSpec::open(lo, hi);
  d.form = form;
  d.exponent = exponent;
  return d;
}

PiecewiseFunction constant(double c) { return PiecewiseFunction::single(IntervalSpec::real_line(), Term::constant(c)); }

GridSpec grid_on(IntervalSpec i, int count = 256) {
  GridSpec g;
  g.interval = i;
  g.count = count;
  return g;
}

}  // namespace

TEST_CASE("solve_forward examples") {
  StructuredMeasure mu({AtomicPart{{{1, 1}, {2, 1}, {3, 1}}}});
  auto y = solve_forward(mu, constant(1), 0, 4);
  CHECK(y.evaluate(0.5) == 1);
  CHECK(y.evaluate(1) == 1);
  CHECK(y.evaluate(1.5) == 2);
  CHECK(y.evaluate(2) == 2);
  CHECK(y.evaluate(2.5) == 4);
  CHECK(y.evaluate(3) == 4);
  CHECK(y.evaluate(3.5) == 8);

  CHECK(solve_forward(mu, constant(0), 0, 4) == PiecewiseFunction::zero());

  StructuredMeasure two({AtomicPart{{{1, 2}}}});
  auto z = solve_forward(two, constant(-1), 0, 5);
  CHECK(z.evaluate(1) == -1);
  CHECK(z.evaluate(3) == -3);
}

TEST_CASE("solve_forward rejects non-locally-finite measures") {
  StructuredMeasure fam({AtomFamily{}});
  try {
    solve_forward(fam, constant(1), 0, 1);
    FAIL("expected LocalFinitenessViolated");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::LocalFinitenessViolated);
  }
  StructuredMeasure dense({DenseAtomicPart{IntervalSpec::open(0, kInf), 1.0}});
  CHECK_THROWS_AS(solve_forward(dense, constant(1), 0, 1), Error);
  StructuredMeasure leb({density(0, 1)});
  try {
    solve_forward(leb, constant(1), 0, 1);
    FAIL("expected HypothesisViolated");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::HypothesisViolated);
  }
}

TEST_CASE("verify_inequality examples") {
  StructuredMeasure leb({density(-kInf, kInf)});
  auto y = PiecewiseFunction::single({-kInf, -1, false, true}, Term::power(1, 0, -2));
  GridSpec g = grid_on(IntervalSpec::open(-kInf, kInf));
  auto r = verify_inequality(y, leb, -kInf, kInf, g);
  CHECK(r.inequality_verdict);
  CHECK(r.positivity_mass > ExtReal(0.0));
  CHECK(r.implication_verdict == ImplicationVerdict::CounterexampleToI);
  CHECK(r.tolerance == 1e-9);

  auto zero = verify_inequality(PiecewiseFunction::zero(), leb, -kInf, kInf, g);
  for (double res : zero.residuals) CHECK(res == 0.0);
  CHECK(zero.implication_verdict == ImplicationVerdict::ConsistentWithI);

  StructuredMeasure inv({density(0, 1, DensityPart::Form::Reciprocal)});
  auto recip = PiecewiseFunction::single(IntervalSpec::open(0, 1), Term::power(1, 0, -1));
  try {
    verify_inequality(recip, inv, 0, 1, grid_on(IntervalSpec::open(0, 1)));
    FAIL("expected NotIntegrable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotIntegrable);
  }
}

TEST_CASE("grid points") {
  StructuredMeasure mu({AtomicPart{{{0.5, 1}}}});
  GridSpec g = grid_on(IntervalSpec::open(0, 1), 10);
  g.include_atoms = true;
  auto pts = grid_points(g, mu);
  CHECK(std::is_sorted(pts.begin(), pts.end()));
  CHECK(std::find(pts.begin(), pts.end(), 0.5) != pts.end());
  g.spacing = GridSpec::Spacing::Geometric;
  pts = grid_points(g, mu);
  CHECK(pts.front() > 0.0);
  CHECK(pts.front() < 1e-9);
  CHECK(pts.back() < 1.0);
}

TEST_CASE("constant sign probe") {
  StructuredMeasure inv({density(0, kInf, DensityPart::Form::Reciprocal)});
  auto id = PiecewiseFunction::single(IntervalSpec::open(0, kInf), Term::poly({0, 1}));
  auto p = constant_sign_probe(id, inv, 0, grid_on(IntervalSpec::open(0, 10)));
  CHECK(p.residuals_ok);
  CHECK(p.sign == 1);
  CHECK(p.monotone_verdict);
  CHECK_FALSE(p.theory_violation);
  auto z = constant_sign_probe(PiecewiseFunction::zero(), inv, 0, grid_on(IntervalSpec::open(0, 10)));
  CHECK(z.sign_verdict);
  CHECK(z.sign == 0);
}

TEST_CASE("inhomogeneous demo") {
  StructuredMeasure inv({density(0, 1, DensityPart::Form::Reciprocal)});
  auto tilde = PiecewiseFunction::single(IntervalSpec::open(0, 1), Term::poly({0, 1}));
  auto demo = demo_inhomogeneous_unboundedness(inv, PiecewiseFunction::zero(), PiecewiseFunction::zero(),
                                               tilde, {0, 1, 10, 100}, 0, 1, grid_on(IntervalSpec::open(0, 1)));
  REQUIRE(demo.reports.size() == 4);
  for (const auto& r : demo.reports) CHECK(r.inequality_verdict);
  CHECK(demo.sup_trace[1] >= 0.9);
  CHECK(demo.sup_trace[2] >= 9.0);
  CHECK(demo.sup_trace[3] >= 90.0);
}

TEST_CASE("discrete Gronwall property") {
  std::mt19937_64 rng(20261015);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(unit(rng) * 20);
    std::vector<Atom> atoms;
    for (int i = 0; i < n; ++i) atoms.push_back({unit(rng) * 10.0, 0.01 + unit(rng) * 3.0});
    StructuredMeasure mu({AtomicPart{atoms}});
    // eps >= 0 piecewise constant on random cells; y = integral - eps.
    std::vector<Piece> cells;
    double x = 0.0;
    while (x < 10.0) {
      double w = 0.1 + unit(rng) * 2.0;
      cells.push_back({IntervalSpec::right_closed(x, std::min(10.0, x + w)), {Term::constant(-unit(rng))}});
      x += w;
    }
    auto y = solve_forward(mu, PiecewiseFunction(cells), 0.0, 10.0);
    auto neg = solve_forward(mu, PiecewiseFunction(cells).scaled(-1.0), 0.0, 10.0);
    for (int i = 1; i < 200; ++i) {
      double t = 10.0 * i / 200.0;
      CHECK(y.evaluate(t) <= 1e-12);
      CHECK(neg.evaluate(t) >= -1e-12);
      CHECK(y.evaluate(t) == doctest::Approx(-neg.evaluate(t)));
    }
    for (const Atom& a : atoms) CHECK(y.evaluate(a.x) <= 1e-12);
  }
}
