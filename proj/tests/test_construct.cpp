#include "doctest.h"

#include <cmath>
#include <random>

#include "gronwall/construct.hpp"
#include "gronwall/error.hpp"

using namespace gronwall;

namespace {

DensityPart density(double lo, double hi, DensityPart::Form form = DensityPart::Form::Constant) {
  DensityPart d;
  d.interval = IntervalSpec::open(lo, hi);
  d.form = form;
  return d;
}

DensityPart reciprocal(double lo, double hi) { return density(lo, hi, DensityPart::Form::Reciprocal); }

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Schema;
}

}  // namespace

TEST_CASE("solution for the reciprocal density is the identity") {
  SolutionFunction y(StructuredMeasure({reciprocal(0, 1)}), 0, 1);
  for (double t : {1e-9, 0.01, 0.3, 0.5, 0.99}) CHECK(y.value(t) == doctest::Approx(t).epsilon(1e-13));
  CHECK(y.value(0) == 0);
  CHECK(y.value(1) == 0);
  CHECK(y.subsolution_by_construction(y.measure()));
  auto r = integrate(y, y.measure(), IntervalSpec::open(0, 0.5));
  CHECK(r.value.value() == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("solution for the dyadic atom family") {
  StructuredMeasure mu({AtomFamily{}});
  SolutionFunction y(mu, 0, 2);
  CHECK(y.value(0.3) == doctest::Approx(0.25));
  CHECK(y.value(1.5) == doctest::Approx(1.0));
  CHECK(y.value(0.75) == doctest::Approx(0.5));
  auto r = integrate(y, mu, IntervalSpec::open(0, 0.3));
  CHECK(r.value.value() == doctest::Approx(0.25).epsilon(1e-11));
  auto full = integrate(y, mu, IntervalSpec::open(0, 2));
  CHECK(full.value.value() == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("solution for a density plus an atom") {
  StructuredMeasure mu({reciprocal(0, 1), AtomicPart{{{0.5, 1.0}}}});
  SolutionFunction y(mu, 0, 1);
  CHECK(y.value(0.25) == doctest::Approx(0.125).epsilon(1e-13));
  CHECK(y.value(0.75) == doctest::Approx(0.75).epsilon(1e-13));
  // The equation holds on both sides of the atom.
  for (double t : {0.25, 0.5, 0.75}) {
    auto r = integrate(y, mu, IntervalSpec::open(0, t));
    CHECK(r.value.value() == doctest::Approx(y.value(t)).epsilon(1e-9));
  }
}

TEST_CASE("solution hypotheses") {
  CHECK(kind_of([] { SolutionFunction(StructuredMeasure({density(0, 1)}), 0, 1); }) ==
        ErrorKind::HypothesisViolated);
  CHECK(kind_of([] { SolutionFunction(StructuredMeasure({reciprocal(0, 1)}), -1, 1); }) ==
        ErrorKind::HypothesisViolated);
  CHECK(kind_of([] {
          SolutionFunction(StructuredMeasure({reciprocal(0, 1), InfiniteAtomPart{{0.5}}}), 0, 1);
        }) == ErrorKind::HypothesisViolated);
  CHECK(kind_of([] { SolutionFunction(StructuredMeasure({reciprocal(0, 1)}), 0, kInf); }) ==
        ErrorKind::Schema);
}

TEST_CASE("lebesgue on the line from -inf") {
  SolutionFunction y(StructuredMeasure({density(-kInf, kInf)}), -kInf, -1);
  for (double t : {-30.0, -5.0, -1.5}) CHECK(y.value(t) == doctest::Approx(std::exp(t + 1)).epsilon(1e-13));
}

TEST_CASE("taming a dense part") {
  StructuredMeasure mu({DenseAtomicPart{IntervalSpec::open(0, kInf), 1.0}});
  TamedMeasure tm = extract_taming_subset(mu, 0, 1.0);
  CHECK(tm.dense_tail);
  CHECK(tm.slot_families.size() == 2);
  for (const TamingBlock& blk : tm.blocks) {
    CHECK(blk.infinite);
    CHECK(blk.selection == TamingBlock::Selection::Atoms);
    CHECK(blk.atoms.size() == 2);
    CHECK(blk.mass.value() == 2.0);
  }
  // Each tail block (t_{n-1}, t_n] holds one atom per slot.
  for (int n = tm.tail_index; n > tm.tail_index - 20; --n) {
    auto block = IntervalSpec::right_closed(tm.grid(n - 1), tm.grid(n));
    CHECK(measure_eval(tm.mu_E, block).value() == 2.0);
  }
  CHECK(!measure_eval(tm.mu_E, IntervalSpec::open(0, 1)).is_finite());
  CHECK(measure_eval(tm.mu_E, IntervalSpec::open(1e-6, 1)).is_finite());
}

TEST_CASE("taming keeps a singular density whole") {
  StructuredMeasure mu({reciprocal(0, 1)});
  TamedMeasure tm = extract_taming_subset(mu, 0);
  CHECK(!tm.dense_tail);
  auto parts = tm.intervals();
  REQUIRE(parts.size() == 1);
  CHECK(parts[0].lo == 0);
  CHECK(parts[0].hi >= 1);
  for (double t : {1e-8, 0.2, 0.999}) CHECK(tm.contains(t));
  CHECK(!tm.contains(0));
}

TEST_CASE("taming lebesgue from -inf") {
  StructuredMeasure mu({density(-kInf, kInf)});
  TamedMeasure tm = extract_taming_subset(mu, -kInf, 1.0);
  auto parts = tm.intervals();
  REQUIRE(parts.size() == 1);
  CHECK(parts[0].lo == -kInf);
  CHECK(parts[0].hi >= 1.0);
  CHECK(kind_of([] { extract_taming_subset(StructuredMeasure({density(0, 1)}), 0); }) ==
        ErrorKind::HypothesisViolated);
}

TEST_CASE("taming selects a subinterval near an interior singularity") {
  DensityPart d = density(0, 3, DensityPart::Form::PowerRight);
  d.exponent = -1.0;  // 1/(3 - t)
  StructuredMeasure mu({reciprocal(0, 1), d});
  TamedMeasure tm = extract_taming_subset(mu, 0, 4.0);
  bool found = false;
  for (const TamingBlock& blk : tm.blocks) {
    if (blk.selection != TamingBlock::Selection::Interval) continue;
    found = true;
    CHECK(blk.mass > ExtReal(1.0));
    CHECK(blk.mass <= ExtReal(2.0));
  }
  CHECK(found);
  CHECK(measure_eval(tm.mu_E, IntervalSpec::open(0.5, 4)).is_finite());
}

TEST_CASE("counterexample bundles") {
  GridSpec g;
  g.count = 128;
  g.spacing = GridSpec::Spacing::Geometric;
  g.include_atoms = true;

  SUBCASE("reciprocal density") {
    StructuredMeasure mu({reciprocal(0, 1)});
    g.interval = IntervalSpec::open(0, 1);
    auto bundle = build_counterexample(mu, 0, 1.0, g);
    CHECK(bundle.integrability_certificate.value() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(bundle.y->value(0.3) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(bundle.report.inequality_verdict);
  }
  SUBCASE("dense atoms") {
    StructuredMeasure mu({DenseAtomicPart{IntervalSpec::open(0, kInf), 1.0}});
    g.interval = IntervalSpec::open(0, 1);
    auto bundle = build_counterexample(mu, 0, 1.0, g);
    CHECK(bundle.integrability_certificate.value() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(bundle.y->value(0.3) == 0.0);  // not a selected atom
    for (double x : bundle.tamed->isolated_points()) {
      if (x < 1.0) CHECK(bundle.y->value(x) > 0.0);
    }
  }
  SUBCASE("lebesgue from -inf") {
    StructuredMeasure mu({density(-kInf, kInf)});
    g.interval = IntervalSpec::open(-kInf, -1);
    auto bundle = build_counterexample(mu, -kInf, -1.0, g);
    CHECK(bundle.y->value(-3) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
    CHECK(bundle.integrability_certificate.value() == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("infinite atom outside the solution window") {
    StructuredMeasure mu({reciprocal(0, 1), InfiniteAtomPart{{0.5}}});
    g.interval = IntervalSpec::open(0, 1);
    auto bundle = build_counterexample(mu, 0, 1.0, g);
    CHECK(bundle.y->value(0.5) == 0.0);
    CHECK(bundle.y->value(0.25) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(bundle.report.inequality_verdict);
  }
  SUBCASE("condition holds") {
    StructuredMeasure mu({density(0, 1)});
    CHECK(kind_of([&] { build_counterexample(mu, 0); }) == ErrorKind::HypothesisViolated);
  }
}
