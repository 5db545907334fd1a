#include "gronwall/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <memory>
#include <sstream>

#include "gronwall/condition.hpp"
#include "gronwall/construct.hpp"
#include "gronwall/demos.hpp"
#include "gronwall/io.hpp"

namespace gronwall {
namespace {

struct Options {
  std::string measure_path;
  std::string function_path;
  std::string a = "0";
  std::string b;
  bool local = false;
  bool a_closed = false;
  bool b_closed = false;
  bool absolute = false;
  int count = 0;
  std::string spacing = "geometric";
  bool include_atoms = false;
  std::string format = "json";
  std::string demo;
};

double endpoint(const std::string& s, const char* name) {
  if (s == "-inf") return -kInf;
  if (s == "+inf" || s == "inf") return kInf;
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used == s.size() && !std::isnan(v)) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::Schema, std::string("invalid value for --") + name + ": " + s);
}

StructuredMeasure load_measure(const Options& o) {
  if (o.measure_path.empty()) throw Error(ErrorKind::Schema, "--measure is required");
  return io::measure_from_json(io::read_file(o.measure_path));
}

PiecewiseFunction load_function(const Options& o) {
  if (o.function_path.empty()) throw Error(ErrorKind::Schema, "--function is required");
  return io::function_from_json(io::read_file(o.function_path));
}

double a_of(const Options& o) { return endpoint(o.a, "a"); }

double b_of(const Options& o, double fallback) { return o.b.empty() ? fallback : endpoint(o.b, "b"); }

GridSpec grid_of(const Options& o, double a, double b) {
  GridSpec g;
  g.interval = IntervalSpec::open(a, b);
  g.count = o.count > 0 ? o.count : default_grid_count();
  g.spacing = o.spacing == "uniform" ? GridSpec::Spacing::Uniform : GridSpec::Spacing::Geometric;
  g.include_atoms = o.include_atoms;
  return g;
}

void emit(std::ostream& out, const io::Json& j) { out << j.dump(2) << "\n"; }

int check_m(const Options& o, std::ostream& out) {
  StructuredMeasure mu = load_measure(o);
  if (o.local) {
    double a = a_of(o);
    emit(out, io::to_json(check_condition_M_a(mu, a), a));
    return 0;
  }
  io::Json j = io::to_json(check_condition_M(mu));
  j["sigma_finite"] = io::to_json(sigma_finite_certificate(semi_finite_part(mu)));
  emit(out, j);
  return 0;
}

int integrate_cmd(const Options& o, std::ostream& out) {
  StructuredMeasure mu = load_measure(o);
  PiecewiseFunction f = load_function(o);
  IntervalSpec i{a_of(o), b_of(o, kInf), o.a_closed, o.b_closed};
  i.validate();
  emit(out, io::to_json(o.absolute ? integrate_abs(f, mu, i) : integrate(f, mu, i)));
  return 0;
}

int solve_cmd(const Options& o, std::ostream& out) {
  StructuredMeasure mu = load_measure(o);
  PiecewiseFunction f = load_function(o);
  const double a = a_of(o), b = b_of(o, kInf);
  PiecewiseFunction y = solve_forward(mu, f, a, b);
  if (o.format == "csv") {
    GridSpec g = grid_of(o, a, b);
    g.include_atoms = true;
    out << "t,y\n";
    for (double t : grid_points(g, mu)) out << io::Json(t).dump() << "," << io::Json(y.value(t)).dump() << "\n";
    return 0;
  }
  emit(out, io::function_to_json(y));
  return 0;
}

int construct_cmd(const Options& o, std::ostream& out) {
  StructuredMeasure mu = load_measure(o);
  const double a = a_of(o), b = b_of(o, default_b(a));
  SolutionFunction y(mu, a, b);
  GridSpec g = grid_of(o, a, b);
  VerificationReport report = verify_inequality(y, mu, a, b, g);
  if (o.format == "csv") {
    out << to_csv(report);
    return 0;
  }
  ProbeReport probe = constant_sign_probe(y, mu, a, g);
  emit(out, {{"a", io::ext_to_json(a)}, {"b", b}, {"probe", io::to_json(probe)}, {"report", io::to_json(report)}});
  return 0;
}

int counterexample_cmd(const Options& o, std::ostream& out) {
  StructuredMeasure mu = load_measure(o);
  const double a = a_of(o), b = b_of(o, default_b(a));
  GridSpec g = grid_of(o, a, b);
  g.include_atoms = true;
  CounterexampleBundle bundle = build_counterexample(mu, a, b, g);
  if (o.format == "csv") {
    out << "# positivity_mass=" << io::ext_to_json(bundle.report.positivity_mass).dump()
        << " integrability_certificate=" << io::ext_to_json(bundle.integrability_certificate).dump()
        << " implication_verdict=" << to_string(bundle.report.implication_verdict) << "\n";
    out << to_csv(bundle.report);
    return 0;
  }
  emit(out, io::to_json(bundle));
  return 0;
}

int verify_cmd(const Options& o, std::ostream& out) {
  StructuredMeasure mu = load_measure(o);
  PiecewiseFunction y = load_function(o);
  const double a = a_of(o), b = b_of(o, kInf);
  VerificationReport report = verify_inequality(y, mu, a, b, grid_of(o, a, b));
  if (o.format == "csv") {
    out << to_csv(report);
  } else {
    emit(out, io::to_json(report));
  }
  return 0;
}

int demo_cmd(const Options& o, std::ostream& out) {
  DemoOutcome d = run_demo(o.demo, o.count > 0 ? std::optional<int>(o.count) : std::nullopt);
  emit(out, d.report);
  return d.passed ? 0 : 5;
}

}  // namespace

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Schema: return 2;
    case ErrorKind::HypothesisViolated:
    case ErrorKind::LocalFinitenessViolated:
    case ErrorKind::NotIntegrable: return 3;
    case ErrorKind::NonIntegrable:
    case ErrorKind::UnsupportedDenseCombination:
    case ErrorKind::NumericalFailure: return 4;
  }
  return 4;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gronwall inequalities for Borel measures on the real line", "gronwall"};
  app.require_subcommand(1);
  Options o;

  auto add_measure = [&](CLI::App* s) { s->add_option("--measure", o.measure_path, "measure JSON file"); };
  auto add_function = [&](CLI::App* s) { s->add_option("--function", o.function_path, "function JSON file"); };
  auto add_ends = [&](CLI::App* s) {
    s->add_option("--a", o.a, "left end (number or -inf)");
    s->add_option("--b", o.b, "right end (number or +inf)");
  };
  auto add_grid = [&](CLI::App* s) {
    s->add_option("--count", o.count, "grid points (default: GRONWALL_GRID_COUNT or 1024)");
    s->add_option("--spacing", o.spacing, "uniform or geometric")->check(CLI::IsMember({"uniform", "geometric"}));
    s->add_flag("--include-atoms", o.include_atoms, "add atom locations to the grid");
  };
  auto add_format = [&](CLI::App* s) {
    s->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };

  auto* check = app.add_subcommand("check-m", "decide condition (M), or (M_a) when --a is given");
  add_measure(check);
  add_ends(check);
  auto* semi = app.add_subcommand("semifinite", "print the semi-finite part");
  add_measure(semi);
  auto* integ = app.add_subcommand("integrate", "integral of a function over an interval");
  add_measure(integ);
  add_function(integ);
  add_ends(integ);
  integ->add_flag("--a-closed", o.a_closed, "include the left end");
  integ->add_flag("--b-closed", o.b_closed, "include the right end");
  integ->add_flag("--abs", o.absolute, "integrate |f|");
  auto* solve = app.add_subcommand("solve", "forward solve y = f + integral of y over (a, t)");
  add_measure(solve);
  add_function(solve);
  add_ends(solve);
  add_grid(solve);
  add_format(solve);
  auto* construct = app.add_subcommand("construct-solution", "product-integral solution on (a, b)");
  add_measure(construct);
  add_ends(construct);
  add_grid(construct);
  add_format(construct);
  auto* counter = app.add_subcommand("counterexample", "build and verify a witness where (M_a) fails");
  add_measure(counter);
  add_ends(counter);
  add_grid(counter);
  add_format(counter);
  auto* verify = app.add_subcommand("verify", "check y <= integral of y over (a, t) on a grid");
  add_measure(verify);
  add_function(verify);
  add_ends(verify);
  add_grid(verify);
  add_format(verify);
  auto* demo = app.add_subcommand("demo", "run a self-checking scenario");
  demo->add_option("name", o.demo, "scenario")->required()->check(CLI::IsMember(demo_names()));
  demo->add_option("--count", o.count, "grid points");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << io::error_to_json(ErrorKind::Schema, e.what()).dump() << "\n";
    return 2;
  }

  try {
    if (check->parsed()) {
      o.local = check->count("--a") > 0;
      return check_m(o, out);
    }
    if (semi->parsed()) {
      emit(out, io::measure_to_json(semi_finite_part(load_measure(o))));
      return 0;
    }
    if (integ->parsed()) return integrate_cmd(o, out);
    if (solve->parsed()) return solve_cmd(o, out);
    if (construct->parsed()) return construct_cmd(o, out);
    if (counter->parsed()) return counterexample_cmd(o, out);
    if (verify->parsed()) return verify_cmd(o, out);
    return demo_cmd(o, out);
  } catch (const Error& e) {
    err << io::error_to_json(e.kind(), e.what()).dump() << "\n";
    return exit_code(e.kind());
  }
}

}  // namespace gronwall
