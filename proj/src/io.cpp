#include "gronwall/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <variant>

#include "gronwall/error.hpp"

namespace gronwall::io {
namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorKind::Schema, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) schema(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double number(const Json& j, const char* key) {
  double v = ext_from_json(field(j, key));
  if (!std::isfinite(v)) schema(std::string("field \"") + key + "\" must be finite");
  return v;
}

double number_or(const Json& j, const char* key, double fallback) {
  return j.contains(key) ? number(j, key) : fallback;
}

std::string text(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) schema(std::string("field \"") + key + "\" must be a string");
  return v.get<std::string>();
}

const Json& array(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_array()) schema(std::string("field \"") + key + "\" must be an array");
  return v;
}

bool flag(const Json& j, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) schema(std::string("field \"") + key + "\" must be a boolean");
  return j.at(key).get<bool>();
}

IntervalSpec window_or_line(const Json& j) {
  return j.contains("window") ? interval_from_json(j.at("window")) : IntervalSpec::real_line();
}

Component component_from_json(const Json& c) {
  const std::string kind = text(c, "kind");
  if (kind == "atoms") {
    AtomicPart part;
    for (const Json& a : array(c, "atoms")) part.atoms.push_back({number(a, "location"), number(a, "mass")});
    return part;
  }
  if (kind == "atom_family") {
    AtomFamily fam;
    fam.point = number(c, "accumulation_point");
    const std::string side = c.contains("side") ? text(c, "side") : "right";
    if (side != "right" && side != "left") schema("side must be \"right\" or \"left\"");
    fam.side = side == "right" ? Side::Right : Side::Left;
    fam.start = number(c, "start");
    fam.ratio = number(c, "ratio");
    const std::string rule = c.contains("mass_rule") ? text(c, "mass_rule") : "constant";
    fam.kappa = number_or(c, "kappa", 1.0);
    if (rule == "constant") {
      fam.rule = AtomFamily::MassRule::Constant;
    } else if (rule == "geometric") {
      fam.rule = AtomFamily::MassRule::Geometric;
      fam.rate = number(c, "lambda");
    } else if (rule == "power") {
      fam.rule = AtomFamily::MassRule::Power;
      fam.rate = number(c, "p");
    } else {
      schema("unknown mass_rule \"" + rule + "\"");
    }
    fam.window = window_or_line(c);
    return fam;
  }
  if (kind == "density") {
    DensityPart d;
    d.interval = interval_from_json(field(c, "interval"));
    const std::string form = text(c, "form");
    if (form == "constant") {
      d.form = DensityPart::Form::Constant;
    } else if (form == "power_left") {
      d.form = DensityPart::Form::PowerLeft;
    } else if (form == "power_right") {
      d.form = DensityPart::Form::PowerRight;
    } else if (form == "reciprocal") {
      d.form = DensityPart::Form::Reciprocal;
    } else {
      schema("unknown density form \"" + form + "\"");
    }
    d.c0 = number_or(c, "c0", 1.0);
    d.exponent = number_or(c, "exponent", 0.0);
    d.window = window_or_line(c);
    return d;
  }
  if (kind == "inf_atom") {
    InfiniteAtomPart part;
    for (const Json& x : array(c, "locations")) part.locations.push_back(ext_from_json(x));
    return part;
  }
  if (kind == "dense_atoms") {
    DenseAtomicPart dense;
    dense.interval = interval_from_json(field(c, "interval"));
    dense.per_atom_mass = number_or(c, "per_atom_mass", 1.0);
    if (c.contains("enumeration")) dense.enumeration = text(c, "enumeration");
    return dense;
  }
  schema("unknown component kind \"" + kind + "\"");
}

const char* form_name(DensityPart::Form f) {
  switch (f) {
    case DensityPart::Form::Constant: return "constant";
    case DensityPart::Form::PowerLeft: return "power_left";
    case DensityPart::Form::PowerRight: return "power_right";
    case DensityPart::Form::Reciprocal: return "reciprocal";
  }
  return "constant";
}

Json component_to_json(const Component& c) {
  Json j;
  if (const auto* part = std::get_if<AtomicPart>(&c)) {
    j["kind"] = "atoms";
    j["atoms"] = Json::array();
    for (const Atom& a : part->atoms) j["atoms"].push_back({{"location", a.x}, {"mass", a.mass}});
  } else if (const auto* fam = std::get_if<AtomFamily>(&c)) {
    j["kind"] = "atom_family";
    j["accumulation_point"] = fam->point;
    j["side"] = fam->side == Side::Right ? "right" : "left";
    j["start"] = fam->start;
    j["ratio"] = fam->ratio;
    j["kappa"] = fam->kappa;
    switch (fam->rule) {
      case AtomFamily::MassRule::Constant: j["mass_rule"] = "constant"; break;
      case AtomFamily::MassRule::Geometric:
        j["mass_rule"] = "geometric";
        j["lambda"] = fam->rate;
        break;
      case AtomFamily::MassRule::Power:
        j["mass_rule"] = "power";
        j["p"] = fam->rate;
        break;
    }
    if (fam->window != IntervalSpec::real_line()) j["window"] = interval_to_json(fam->window);
  } else if (const auto* d = std::get_if<DensityPart>(&c)) {
    j["kind"] = "density";
    j["interval"] = interval_to_json(d->interval);
    j["form"] = form_name(d->form);
    j["c0"] = d->c0;
    if (d->form == DensityPart::Form::PowerLeft || d->form == DensityPart::Form::PowerRight) {
      j["exponent"] = d->exponent;
    }
    if (d->window != IntervalSpec::real_line()) j["window"] = interval_to_json(d->window);
  } else if (const auto* inf = std::get_if<InfiniteAtomPart>(&c)) {
    j["kind"] = "inf_atom";
    j["locations"] = Json::array();
    for (double x : inf->locations) j["locations"].push_back(ext_to_json(x));
  } else if (const auto* dense = std::get_if<DenseAtomicPart>(&c)) {
    j["kind"] = "dense_atoms";
    j["interval"] = interval_to_json(dense->interval);
    j["per_atom_mass"] = dense->per_atom_mass;
    j["enumeration"] = dense->enumeration;
  }
  return j;
}

Term term_from_json(const Json& t) {
  const std::string form = text(t, "form");
  if (form == "const") return Term::constant(number(t, "value"));
  if (form == "poly") {
    std::vector<double> coeffs;
    for (const Json& c : array(t, "coeffs")) coeffs.push_back(ext_from_json(c));
    if (coeffs.empty()) schema("poly needs at least one coefficient");
    return Term::poly(std::move(coeffs));
  }
  if (form == "power") return Term::power(number(t, "c0"), number_or(t, "anchor", 0.0), number(t, "exponent"));
  if (form == "exp") return Term::exp(number(t, "c0"), number(t, "rate"));
  schema("unknown function form \"" + form + "\"");
}

Json term_to_json(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Const: return {{"form", "const"}, {"value", t.coeffs.at(0)}};
    case Term::Kind::Poly: return {{"form", "poly"}, {"coeffs", t.coeffs}};
    case Term::Kind::Power:
      return {{"form", "power"}, {"c0", t.c0}, {"anchor", t.anchor}, {"exponent", t.exponent}};
    case Term::Kind::Exp: return {{"form", "exp"}, {"c0", t.c0}, {"rate", t.rate}};
  }
  return {};
}

Json ext_vector(const std::vector<ExtReal>& v) {
  Json out = Json::array();
  for (ExtReal x : v) out.push_back(ext_to_json(x));
  return out;
}

Json double_vector(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(ext_to_json(x));
  return out;
}

}  // namespace

double ext_from_json(const Json& j) {
  if (j.is_number()) {
    double v = j.get<double>();
    if (std::isnan(v)) schema("NaN is not a valid number");
    return v;
  }
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "+inf" || s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  schema("expected a number or \"-inf\" / \"+inf\", got " + j.dump());
}

Json ext_to_json(double v) {
  if (v == kInf) return "+inf";
  if (v == -kInf) return "-inf";
  return v;
}

Json ext_to_json(ExtReal v) { return ext_to_json(v.value()); }

IntervalSpec interval_from_json(const Json& j) {
  if (!j.is_object()) schema("interval must be an object");
  IntervalSpec i{ext_from_json(field(j, "lo")), ext_from_json(field(j, "hi")),
                 flag(j, "lo_closed", false), flag(j, "hi_closed", false)};
  i.validate();
  return i;
}

Json interval_to_json(const IntervalSpec& i) {
  return {{"lo", ext_to_json(i.lo)}, {"hi", ext_to_json(i.hi)}, {"lo_closed", i.lo_closed},
          {"hi_closed", i.hi_closed}};
}

StructuredMeasure measure_from_json(const Json& j) {
  std::vector<Component> comps;
  for (const Json& c : array(j, "components")) comps.push_back(component_from_json(c));
  return StructuredMeasure(std::move(comps));
}

Json measure_to_json(const StructuredMeasure& mu) {
  Json comps = Json::array();
  for (const auto& c : mu.components()) comps.push_back(component_to_json(c));
  return {{"components", comps}};
}

PiecewiseFunction function_from_json(const Json& j) {
  std::vector<Piece> pieces;
  for (const Json& p : array(j, "pieces")) {
    Piece piece;
    piece.interval = interval_from_json(field(p, "interval"));
    if (text(p, "form") == "sum") {
      for (const Json& t : array(p, "terms")) piece.terms.push_back(term_from_json(t));
    } else {
      piece.terms.push_back(term_from_json(p));
    }
    pieces.push_back(std::move(piece));
  }
  return PiecewiseFunction(std::move(pieces));
}

Json function_to_json(const PiecewiseFunction& f) {
  Json pieces = Json::array();
  for (const Piece& p : f.pieces()) {
    Json jp;
    if (p.terms.size() == 1) {
      jp = term_to_json(p.terms.front());
    } else {
      jp["form"] = "sum";
      jp["terms"] = Json::array();
      for (const Term& t : p.terms) jp["terms"].push_back(term_to_json(t));
    }
    jp["interval"] = interval_to_json(p.interval);
    pieces.push_back(jp);
  }
  return {{"pieces", pieces}};
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    schema(std::string("malformed JSON: ") + e.what());
  }
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) schema("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

Json to_json(const SingularPoint& sp) {
  Json j{{"point", ext_to_json(sp.point)}, {"kind", to_string(sp.kind)}};
  if (sp.until) j["until"] = ext_to_json(*sp.until);
  return j;
}

Json to_json(const LocalCondition& c, double a) {
  Json j{{"a", ext_to_json(a)}, {"holds", c.holds}};
  if (c.witness) j["witness"] = ext_to_json(*c.witness);
  j["causes"] = Json::array();
  for (const auto& sp : c.causes) j["causes"].push_back(to_json(sp));
  return j;
}

Json to_json(const ConditionMReport& r) {
  Json j{{"holds", r.holds}, {"singular_points", Json::array()}, {"witnesses", Json::array()}};
  for (const auto& sp : r.singular_points) j["singular_points"].push_back(to_json(sp));
  for (auto [a, t] : r.witnesses) j["witnesses"].push_back({{"a", ext_to_json(a)}, {"t", ext_to_json(t)}});
  return j;
}

Json to_json(const SigmaFiniteCertificate& c) {
  return {{"verdict", to_string(c.verdict)}, {"locally_finite", c.locally_finite}};
}

Json to_json(const IntegralResult& r) {
  return {{"value", ext_to_json(r.value)}, {"path", to_string(r.path)}, {"abs_integrable", r.abs_integrable},
          {"error_estimate", r.error}, {"tail_bound", r.tail_bound}};
}

Json to_json(const VerificationReport& r) {
  return {{"a", ext_to_json(r.a)},
          {"b", ext_to_json(r.b)},
          {"grid_count", r.points.size()},
          {"inequality_verdict", r.inequality_verdict},
          {"implication_verdict", to_string(r.implication_verdict)},
          {"max_violation", r.max_violation},
          {"tolerance", r.tolerance},
          {"positivity_mass", ext_to_json(r.positivity_mass)},
          {"positive_part_reduction", r.positive_part_reduction},
          {"worst_path", to_string(r.worst_path)},
          {"points", double_vector(r.points)},
          {"values", double_vector(r.values)},
          {"integrals", ext_vector(r.integrals)},
          {"residuals", double_vector(r.residuals)}};
}

Json to_json(const ProbeReport& r) {
  return {{"max_residual", r.max_residual}, {"tolerance", r.tolerance},
          {"residuals_ok", r.residuals_ok}, {"sign_verdict", r.sign_verdict},
          {"monotone_verdict", r.monotone_verdict}, {"theory_violation", r.theory_violation},
          {"sign", r.sign}};
}

Json to_json(const TamedMeasure& tm) {
  Json blocks = Json::array();
  for (const TamingBlock& blk : tm.blocks) {
    Json jb{{"index", blk.index},
            {"block", interval_to_json(blk.block)},
            {"infinite", blk.infinite},
            {"selection", to_string(blk.selection)},
            {"mass", ext_to_json(blk.mass)}};
    if (blk.selection == TamingBlock::Selection::Atoms) jb["atoms"] = double_vector(blk.atoms);
    if (blk.subinterval) jb["subinterval"] = interval_to_json(*blk.subinterval);
    blocks.push_back(jb);
  }
  Json intervals = Json::array();
  for (const auto& i : tm.intervals()) intervals.push_back(interval_to_json(i));
  return {{"a", ext_to_json(tm.a)},
          {"horizon", tm.horizon},
          {"tail_index", tm.tail_index},
          {"tail_window", interval_to_json(tm.tail_window)},
          {"dense_tail", tm.dense_tail},
          {"slot_count", tm.slot_families.size()},
          {"intervals", intervals},
          {"isolated_points", double_vector(tm.isolated_points())},
          {"blocks", blocks},
          {"mu_E", measure_to_json(tm.mu_E)}};
}

Json to_json(const CounterexampleBundle& b) {
  return {{"a", ext_to_json(b.a)},
          {"b", ext_to_json(b.b)},
          {"integrability_certificate", ext_to_json(b.integrability_certificate)},
          {"tamed", to_json(*b.tamed)},
          {"report", to_json(b.report)}};
}

Json error_to_json(ErrorKind kind, const std::string& message) {
  return {{"error", {{"kind", to_string(kind)}, {"message", message}}}};
}

}  // namespace gronwall::io
