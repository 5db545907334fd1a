#pragma once

#include <string>

#include "json.hpp"

#include "gronwall/condition.hpp"
#include "gronwall/construct.hpp"
#include "gronwall/engine.hpp"
#include "gronwall/error.hpp"
#include "gronwall/function.hpp"
#include "gronwall/integrate.hpp"
#include "gronwall/measure.hpp"

namespace gronwall::io {

using Json = nlohmann::ordered_json;

/// Numbers or the strings "-inf" / "+inf". Throws Error(Schema) otherwise.
double ext_from_json(const Json& j);
Json ext_to_json(double v);
Json ext_to_json(ExtReal v);

IntervalSpec interval_from_json(const Json& j);
Json interval_to_json(const IntervalSpec& i);

/// {"components": [{"kind": "atoms" | "atom_family" | "density" | "inf_atom" | "dense_atoms", ...}]}
StructuredMeasure measure_from_json(const Json& j);
Json measure_to_json(const StructuredMeasure& mu);

/// {"pieces": [{"interval": ..., "form": "const" | "poly" | "power" | "exp" | "sum", ...}]}
PiecewiseFunction function_from_json(const Json& j);
Json function_to_json(const PiecewiseFunction& f);

/// Parses text; malformed JSON is a schema error.
Json parse(const std::string& text);
Json read_file(const std::string& path);

Json to_json(const SingularPoint& sp);
Json to_json(const LocalCondition& c, double a);
Json to_json(const ConditionMReport& r);
Json to_json(const SigmaFiniteCertificate& c);
Json to_json(const IntegralResult& r);
Json to_json(const VerificationReport& r);
Json to_json(const ProbeReport& r);
Json to_json(const TamedMeasure& tm);
Json to_json(const CounterexampleBundle& b);

/// {"error": {"kind": ..., "message": ...}}
Json error_to_json(ErrorKind kind, const std::string& message);

}  // namespace gronwall::io
