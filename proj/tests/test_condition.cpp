#include "doctest.h"

#include "gronwall/condition.hpp"

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

}  // namespace

TEST_CASE("(M_a) examples") {
  StructuredMeasure sing({density(0, 1, DensityPart::Form::PowerLeft, -1.0)});
  auto r = check_condition_M_a(sing, 0.0);
  CHECK_FALSE(r.holds);
  REQUIRE(r.causes.size() == 1);
  CHECK(r.causes[0].kind == SingularKind::DensitySingularity);

  StructuredMeasure leb({density(0, 1)});
  auto l = check_condition_M_a(leb, -kInf);
  CHECK(l.holds);
  REQUIRE(l.witness);
  CHECK(*l.witness == 0.5);
  CHECK(measure_eval(leb, IntervalSpec::open(-kInf, *l.witness)).value() == doctest::Approx(0.5));

  StructuredMeasure dense({DenseAtomicPart{IntervalSpec::open(0, kInf), 1.0}});
  for (double a : {0.0, 1.0, 3.5}) CHECK_FALSE(check_condition_M_a(dense, a).holds);
  CHECK(check_condition_M_a(dense, -1.0).holds);
}

TEST_CASE("(M) reports") {
  auto whole = check_condition_M(StructuredMeasure({density(-kInf, kInf)}));
  CHECK_FALSE(whole.holds);
  REQUIRE(whole.singular_points.size() == 1);
  CHECK(whole.singular_points[0].point == -kInf);
  CHECK(whole.singular_points[0].kind == SingularKind::InfiniteTailAtMinusInf);

  auto unit = check_condition_M(StructuredMeasure({density(0, 1)}));
  CHECK(unit.holds);
  CHECK(unit.witnesses.count(-kInf) == 1);

  auto dense = check_condition_M(StructuredMeasure({DenseAtomicPart{IntervalSpec::open(0, kInf), 1.0}}));
  CHECK_FALSE(dense.holds);
  REQUIRE(dense.singular_points.size() == 1);
  CHECK(dense.singular_points[0].point == 0.0);
  CHECK(dense.singular_points[0].kind == SingularKind::DenseAtomicInterval);
  CHECK(dense.singular_points[0].until == kInf);
}

TEST_CASE("divergent families and infinite atoms") {
  AtomFamily fam;
  StructuredMeasure mu({fam, InfiniteAtomPart{{5.0}}});
  auto r = check_condition_M(mu);
  CHECK_FALSE(r.holds);
  CHECK(r.singular_points[0].kind == SingularKind::DivergentAtomFamily);
  // Infinite atoms never cause a failure: (M) reads only the semi-finite part.
  auto only_inf = check_condition_M(StructuredMeasure({InfiniteAtomPart{{0.0}}}));
  CHECK(only_inf.holds);
  auto left = fam;
  left.side = Side::Left;
  CHECK(check_condition_M(StructuredMeasure({left})).holds);
}

TEST_CASE("witnesses are sound") {
  AtomFamily fam;
  fam.point = 2.0;
  StructuredMeasure mu({density(0, 1, DensityPart::Form::PowerRight, -1.0), fam});
  auto r = check_condition_M(mu);
  for (auto [a, t] : r.witnesses) {
    CHECK(t > a);
    CHECK(measure_eval(semi_finite_part(mu), IntervalSpec::open(a, t)).is_finite());
  }
  CHECK(r.witnesses.count(1.0) == 1);
  CHECK(r.witnesses.count(2.0) == 0);
}

TEST_CASE("sigma-finite certificate") {
  auto leb = sigma_finite_certificate(StructuredMeasure({density(-kInf, kInf)}));
  CHECK(leb.verdict == SigmaFiniteCertificate::Verdict::Proven);
  CHECK(leb.locally_finite);
  auto inf = sigma_finite_certificate(StructuredMeasure({InfiniteAtomPart{{0.0}}}));
  CHECK(inf.verdict == SigmaFiniteCertificate::Verdict::NotSigmaFinite);
  auto dense = sigma_finite_certificate(
      StructuredMeasure({DenseAtomicPart{IntervalSpec::open(0, kInf), 1.0}}));
  CHECK(dense.verdict == SigmaFiniteCertificate::Verdict::Proven);
  CHECK_FALSE(dense.locally_finite);
}
