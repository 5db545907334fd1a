#include "doctest.h"

#include <sstream>

#include "gronwall/cli.hpp"
#include "gronwall/demos.hpp"
#include "gronwall/io.hpp"

using namespace gronwall;

namespace {

const std::string kData = GRONWALL_DATA_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string measure(const std::string& name) { return kData + "/measures/" + name + ".json"; }
std::string function(const std::string& name) { return kData + "/functions/" + name + ".json"; }

}  // namespace

TEST_CASE("every command is reachable") {
  auto m = run({"check-m", "--measure", measure("lebesgue_R")});
  REQUIRE(m.code == 0);
  auto mj = io::parse(m.out);
  CHECK(mj["holds"] == false);
  CHECK(mj["singular_points"][0]["point"] == "-inf");

  auto ma = run({"check-m", "--measure", measure("dense_rationals"), "--a", "3.5"});
  REQUIRE(ma.code == 0);
  CHECK(io::parse(ma.out)["holds"] == false);

  // An explicit --a 0 is a local query even though 0 is the default end.
  auto zero = io::parse(run({"check-m", "--measure", measure("reciprocal_01"), "--a", "0"}).out);
  CHECK(zero["a"] == 0.0);
  CHECK(zero["holds"] == false);

  auto sf = run({"semifinite", "--measure", measure("with_infinite_atom")});
  REQUIRE(sf.code == 0);
  CHECK(io::parse(sf.out)["components"].size() == 1);

  auto in = run({"integrate", "--measure", measure("lebesgue_R"), "--function", function("inverse_square_tail"),
                 "--a", "-inf", "--b", "-2"});
  REQUIRE(in.code == 0);
  CHECK(io::parse(in.out)["value"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));

  auto so = run({"solve", "--measure", measure("three_atoms"), "--function", function("one"), "--a", "0", "--b", "4"});
  REQUIRE(so.code == 0);
  auto y = io::function_from_json(io::parse(so.out));
  CHECK(y.value(3.5) == 8.0);

  auto cs = run({"construct-solution", "--measure", measure("reciprocal_01"), "--a", "0", "--b", "1", "--count", "64"});
  REQUIRE(cs.code == 0);
  CHECK(io::parse(cs.out)["probe"]["residuals_ok"] == true);

  auto ce = run({"counterexample", "--measure", measure("dense_rationals"), "--a", "0", "--b", "1", "--format", "csv",
                 "--count", "32"});
  REQUIRE(ce.code == 0);
  CHECK(ce.out.rfind("# positivity_mass=", 0) == 0);
  CHECK(ce.out.find("t,y,integral,residual") != std::string::npos);

  auto ve = run({"verify", "--measure", measure("lebesgue_R"), "--function", function("inverse_square_tail"), "--a",
                 "-inf", "--b", "0", "--count", "64", "--spacing", "uniform"});
  REQUIRE(ve.code == 0);
  CHECK(io::parse(ve.out)["implication_verdict"] == "counterexample-to-(I)");

  for (const auto& name : demo_names()) {
    auto d = run({"demo", name});
    CHECK_MESSAGE(d.code == 0, name);
  }
}

TEST_CASE("exit codes and error objects") {
  auto missing = run({"check-m"});
  CHECK(missing.code == 2);
  CHECK(io::parse(missing.err)["error"]["kind"] == "SchemaError");

  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"demo", "remark-z"}).code == 2);
  CHECK(run({"check-m", "--measure", kData + "/nope.json"}).code == 2);
  CHECK(run({"integrate", "--measure", measure("lebesgue_R"), "--function", function("one"), "--a", "x"}).code == 2);

  auto gate = run({"verify", "--measure", measure("lebesgue_01"), "--function", function("reciprocal_01"), "--a", "0",
                   "--b", "1"});
  CHECK(gate.code == 3);
  CHECK(io::parse(gate.err)["error"]["kind"] == "NotIntegrable");

  CHECK(run({"counterexample", "--measure", measure("lebesgue_01"), "--a", "0"}).code == 3);
  CHECK(run({"solve", "--measure", measure("dense_rationals"), "--function", function("one"), "--a", "0", "--b", "1"})
            .code == 3);
}

TEST_CASE("reports are deterministic") {
  std::vector<std::string> args{"counterexample", "--measure", measure("dyadic_family"), "--a", "0", "--b", "2",
                                "--count", "48"};
  auto first = run(args);
  auto second = run(args);
  REQUIRE(first.code == 0);
  CHECK(first.out == second.out);
}
