#include <charconv>
#include <cmath>
#include <string>

#include "gronwall/error.hpp"
#include "gronwall/ext_real.hpp"
#include "gronwall/interval.hpp"

namespace gronwall {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Schema: return "SchemaError";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::NotIntegrable: return "NotIntegrable";
    case ErrorKind::NonIntegrable: return "NonIntegrable";
    case ErrorKind::UnsupportedDenseCombination: return "UnsupportedDenseCombination";
    case ErrorKind::LocalFinitenessViolated: return "LocalFinitenessViolated";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

ExtReal operator+(ExtReal x, ExtReal y) {
  if ((x.is_pos_inf() && y.is_neg_inf()) || (x.is_neg_inf() && y.is_pos_inf())) {
    throw Error(ErrorKind::NonIntegrable, "inf - inf is undefined");
  }
  return ExtReal(x.v_ + y.v_);
}

ExtReal operator*(ExtReal x, ExtReal y) {
  if (x.v_ == 0.0 || y.v_ == 0.0) return ExtReal(0.0);
  return ExtReal(x.v_ * y.v_);
}

std::string format_ext(double v) {
  if (v == kInf) return "+inf";
  if (v == -kInf) return "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void IntervalSpec::validate() const {
  if (std::isnan(lo) || std::isnan(hi)) {
    throw Error(ErrorKind::Schema, "interval endpoint is NaN");
  }
  if (lo > hi) throw Error(ErrorKind::Schema, "interval has lo > hi");
  if ((std::isinf(lo) && lo_closed) || (std::isinf(hi) && hi_closed)) {
    throw Error(ErrorKind::Schema, "infinite interval endpoints must be open");
  }
  if (lo == kInf || hi == -kInf) {
    throw Error(ErrorKind::Schema, "interval lies outside the real line");
  }
}

bool IntervalSpec::empty() const {
  if (lo > hi) return true;
  if (lo == hi) return !(lo_closed && hi_closed);
  return false;
}

bool IntervalSpec::contains(double x) const {
  if (empty()) return false;
  bool above = lo_closed ? x >= lo : x > lo;
  bool below = hi_closed ? x <= hi : x < hi;
  return above && below;
}

bool IntervalSpec::contains(const IntervalSpec& o) const {
  if (o.empty()) return true;
  if (empty()) return false;
  bool lo_ok = o.lo > lo || (o.lo == lo && (lo_closed || !o.lo_closed));
  bool hi_ok = o.hi < hi || (o.hi == hi && (hi_closed || !o.hi_closed));
  return lo_ok && hi_ok;
}

std::optional<IntervalSpec> intersect(const IntervalSpec& x, const IntervalSpec& y) {
  IntervalSpec r;
  if (x.lo > y.lo) {
    r.lo = x.lo;
    r.lo_closed = x.lo_closed;
  } else if (y.lo > x.lo) {
    r.lo = y.lo;
    r.lo_closed = y.lo_closed;
  } else {
    r.lo = x.lo;
    r.lo_closed = x.lo_closed && y.lo_closed;
  }
  if (x.hi < y.hi) {
    r.hi = x.hi;
    r.hi_closed = x.hi_closed;
  } else if (y.hi < x.hi) {
    r.hi = y.hi;
    r.hi_closed = y.hi_closed;
  } else {
    r.hi = x.hi;
    r.hi_closed = x.hi_closed && y.hi_closed;
  }
  if (r.empty()) return std::nullopt;
  return r;
}

}  // namespace gronwall
