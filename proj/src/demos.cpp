#include "gronwall/demos.hpp"

#include <algorithm>
#include <cmath>

#include "gronwall/condition.hpp"
#include "gronwall/construct.hpp"
#include "gronwall/error.hpp"

namespace gronwall {
namespace {

/// Collects named checks; the outcome passes when all of them do.
class Checklist {
 public:
  explicit Checklist(std::string name) { out_.name = std::move(name); out_.report["checks"] = io::Json::array(); }

  void check(const std::string& what, bool ok) {
    out_.report["checks"].push_back({{"check", what}, {"passed", ok}});
    all_ = all_ && ok;
  }
  io::Json& data() { return out_.report; }
  DemoOutcome finish() {
    out_.passed = all_;
    out_.report["passed"] = all_;
    return std::move(out_);
  }

 private:
  DemoOutcome out_;
  bool all_ = true;
};

DensityPart density(IntervalSpec i, DensityPart::Form form = DensityPart::Form::Constant) {
  DensityPart d;
  d.interval = i;
  d.form = form;
  return d;
}

GridSpec make_grid(IntervalSpec i, int count, GridSpec::Spacing spacing) {
  GridSpec g;
  g.interval = i;
  g.count = count;
  g.spacing = spacing;
  return g;
}

DemoOutcome intro_example(int count) {
  Checklist c("intro-example");
  StructuredMeasure mu({density(IntervalSpec::open(0, 1), DensityPart::Form::Reciprocal)});
  SolutionFunction y(mu, 0, 1);
  auto report = verify_inequality(y, mu, 0, 1, make_grid(IntervalSpec::open(0, 1), count, GridSpec::Spacing::Geometric));
  double max_abs = 0.0, max_dev = 0.0;
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    max_abs = std::max(max_abs, std::fabs(report.residuals[i]));
    max_dev = std::max(max_dev, std::fabs(report.values[i] - report.points[i]));
  }
  const double y_left = y.value(std::nextafter(1.0, 0.0));
  c.data()["grid_count"] = report.points.size();
  c.data()["max_abs_residual"] = max_abs;
  c.data()["max_deviation_from_identity"] = max_dev;
  c.data()["y_at_b_minus"] = y_left;
  c.data()["implication_verdict"] = to_string(report.implication_verdict);
  c.check("fixed-point residual <= 1e-9", max_abs <= 1e-9);
  c.check("y(t) = t on the grid", max_dev <= 1e-12);
  c.check("y(1-) = 1", std::fabs(y_left - 1.0) <= 1e-9);
  c.check("counterexample to (I)", report.implication_verdict == ImplicationVerdict::CounterexampleToI);
  return c.finish();
}

DemoOutcome remark_a(int count) {
  Checklist c("remark-a");
  StructuredMeasure leb({density(IntervalSpec::real_line())});
  auto y = PiecewiseFunction::single(IntervalSpec::right_closed(-kInf, -1), Term::power(1, 0, -2));
  io::Json integrals = io::Json::array();
  bool exact = true;
  for (double t : {-1.0, -2.0, -5.0}) {
    ExtReal v = integrate(y, leb, IntervalSpec::open(-kInf, t)).value;
    exact = exact && v.is_finite() && std::fabs(v.value() + 1.0 / t) <= 1e-10;
    integrals.push_back({{"t", t}, {"integral", io::ext_to_json(v)}, {"expected", -1.0 / t}});
  }
  c.data()["integrals"] = integrals;
  c.check("integral over (-inf, t) equals -1/t", exact);

  GridSpec g = make_grid(IntervalSpec::open(-kInf, 0), count, GridSpec::Spacing::Uniform);
  g.extra_points = {-5, -2, -1};
  auto report = verify_inequality(y, leb, -kInf, 0, g);
  c.data()["positivity_mass"] = io::ext_to_json(report.positivity_mass);
  c.data()["max_violation"] = report.max_violation;
  c.check("inequality holds", report.inequality_verdict);
  c.check("positivity mass > 0", report.positivity_mass > ExtReal(0.0));

  auto m = check_condition_M(leb);
  c.data()["condition_M"] = io::to_json(m);
  bool at_minus_inf = std::any_of(m.singular_points.begin(), m.singular_points.end(),
                                  [](const SingularPoint& sp) { return sp.point == -kInf; });
  c.check("(M) fails at -inf", !m.holds && at_minus_inf);
  return c.finish();
}

DemoOutcome remark_b(int count) {
  Checklist c("remark-b");
  StructuredMeasure leb01({density(IntervalSpec::open(0, 1))});
  auto m = check_condition_M(leb01);
  c.data()["condition_M"] = io::to_json(m);
  c.check("(M) holds", m.holds);
  auto y = PiecewiseFunction::single(IntervalSpec::open(0, 1), Term::power(1, 0, -1));
  ExtReal rhs = integrate(y, leb01, IntervalSpec::open(0, 0.5)).value;
  c.data()["integral_to_half"] = io::ext_to_json(rhs);
  c.check("right-hand side is +inf", rhs.is_pos_inf());
  bool gate = false;
  try {
    verify_inequality(y, leb01, 0, 1, make_grid(IntervalSpec::open(0, 1), count, GridSpec::Spacing::Geometric));
  } catch (const Error& e) {
    gate = e.kind() == ErrorKind::NotIntegrable;
    c.data()["verify_error"] = to_string(e.kind());
  }
  c.check("verify raises NotIntegrable", gate);
  return c.finish();
}

DemoOutcome remark_c(int count) {
  Checklist c("remark-c");
  DenseAtomicPart dense{IntervalSpec::open(0, kInf), 1.0};
  StructuredMeasure mu({dense});
  bool fails = true;
  for (double a : {0.0, 1.0, 3.5}) fails = fails && !check_condition_M_a(mu, a).holds;
  c.check("(M_a) fails at a = 0, 1, 3.5", fails);

  // First-N truncations on (0, 8): f = 0 gives 0; a kick before the first atom
  // gives a solution of the homogeneous equation after it.
  const double b = 8.0;
  bool zero_ok = true, probe_ok = true;
  io::Json probes = io::Json::array();
  for (std::size_t n : {8u, 32u, 128u}) {
    std::vector<Atom> atoms;
    for (double x : dense.first_atoms(4 * n)) {
      if (x < b && atoms.size() < n) atoms.push_back({x, dense.per_atom_mass});
    }
    std::sort(atoms.begin(), atoms.end(), [](const Atom& p, const Atom& q) { return p.x < q.x; });
    StructuredMeasure trunc({AtomicPart{atoms}});
    auto zero = solve_forward(trunc, PiecewiseFunction::zero(), 0, b);
    zero_ok = zero_ok && zero == PiecewiseFunction::zero();
    const double x1 = atoms.front().x;
    auto kick = PiecewiseFunction::single(IntervalSpec::right_closed(0, x1), Term::constant(1e-3));
    auto y = solve_forward(trunc, kick, 0, b);
    auto p = constant_sign_probe(y, trunc, 0, make_grid(IntervalSpec::open(x1, b), count, GridSpec::Spacing::Uniform));
    probe_ok = probe_ok && p.residuals_ok && p.sign_verdict && p.monotone_verdict && !p.theory_violation;
    probes.push_back({{"atoms", atoms.size()}, {"probe", io::to_json(p)}});
  }
  c.data()["probes"] = probes;
  c.check("forward solution with f = 0 is 0", zero_ok);
  c.check("equation solutions have constant sign and are monotone", probe_ok);
  return c.finish();
}

DemoOutcome inhomogeneous(int count) {
  Checklist c("inhomogeneous");
  StructuredMeasure mu({density(IntervalSpec::open(0, 1), DensityPart::Form::Reciprocal)});
  auto tilde = PiecewiseFunction::single(IntervalSpec::open(0, 1), Term::poly({0, 1}));
  const std::vector<int> ns{1, 10, 100};
  auto demo = demo_inhomogeneous_unboundedness(mu, PiecewiseFunction::zero(), PiecewiseFunction::zero(), tilde, ns,
                                               0, 1, make_grid(IntervalSpec::open(0, 1), count, GridSpec::Spacing::Uniform));
  bool verdicts = true, growth = true;
  io::Json trace = io::Json::array();
  for (std::size_t i = 0; i < ns.size(); ++i) {
    verdicts = verdicts && demo.reports[i].inequality_verdict;
    growth = growth && demo.sup_trace[i] >= 0.9 * ns[i];
    trace.push_back({{"n", ns[i]}, {"sup", demo.sup_trace[i]}});
  }
  c.data()["sup_trace"] = trace;
  c.check("all inequality verdicts true", verdicts);
  c.check("sup y_n >= 0.9 n", growth);
  return c.finish();
}

}  // namespace

const std::vector<std::string>& demo_names() {
  static const std::vector<std::string> names{"intro-example", "remark-a", "remark-b", "remark-c",
                                              "inhomogeneous"};
  return names;
}

DemoOutcome run_demo(const std::string& name, std::optional<int> grid_count) {
  if (name == "intro-example") return intro_example(grid_count.value_or(2048));
  if (name == "remark-a") return remark_a(grid_count.value_or(512));
  if (name == "remark-b") return remark_b(grid_count.value_or(256));
  if (name == "remark-c") return remark_c(grid_count.value_or(256));
  if (name == "inhomogeneous") return inhomogeneous(grid_count.value_or(256));
  throw Error(ErrorKind::Schema, "unknown demo \"" + name + "\"");
}

}  // namespace gronwall
