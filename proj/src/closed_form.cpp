#include "gronwall/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "gronwall/error.hpp"

namespace gronwall {
namespace {

/// sum_k coef_k v^{e_k} + log_coef * log v, for v >= 0.
struct Series {
  std::map<double, double> powers;  // exponent -> coefficient
  double log_coef = 0.0;

  void add(double exponent, double coef) {
    if (coef == 0.0) return;
    double& c = powers[exponent];
    c += coef;
    if (c == 0.0) powers.erase(exponent);
  }
};

ExtReal signed_inf(double s) { return s > 0.0 ? ExtReal::infinity() : ExtReal::neg_infinity(); }

/// Antiderivative of g (given as a Series in v) evaluated at v, limits at 0 and inf.
ExtReal antiderivative_at(const Series& g, double v) {
  Series big;
  for (auto [e, c] : g.powers) {
    if (e == -1.0) {
      big.log_coef += c;
    } else {
      big.add(e + 1.0, c / (e + 1.0));
    }
  }
  if (v == 0.0) {
    for (auto [e, c] : big.powers) {
      if (e < 0.0) return signed_inf(c);  // smallest exponent dominates
      break;
    }
    if (big.log_coef != 0.0) return signed_inf(-big.log_coef);
    return ExtReal(0.0);
  }
  if (std::isinf(v)) {
    for (auto it = big.powers.rbegin(); it != big.powers.rend(); ++it) {
      if (it->first > 0.0) return signed_inf(it->second);
      break;
    }
    if (big.log_coef != 0.0) return signed_inf(big.log_coef);
    return ExtReal(0.0);
  }
  double s = big.log_coef * std::log(v);
  for (auto [e, c] : big.powers) s += c * std::pow(v, e);
  if (std::isnan(s)) throw Error(ErrorKind::NumericalFailure, "closed-form antiderivative is NaN");
  return ExtReal(s);
}

/// p(o + sigma v) as coefficients in v.
std::vector<double> shift_poly(const std::vector<double>& c, double o, double sigma) {
  std::vector<double> q{0.0};
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    std::vector<double> next(q.size() + 1, 0.0);
    for (std::size_t k = 0; k < q.size(); ++k) {
      next[k] += q[k] * o;
      next[k + 1] += q[k] * sigma;
    }
    next[0] += *it;
    q = std::move(next);
  }
  return q;
}

bool is_integer(double x) { return std::floor(x) == x; }

/// Sum of c * exp(r t) terms times constant density c0 over (s, t).
ExtReal exp_integral(const std::vector<Term>& terms, double c0, double s, double t) {
  std::map<double, double> rates;  // rate -> coefficient of antiderivative
  double linear = 0.0;
  for (const auto& term : terms) {
    if (term.rate == 0.0) {
      linear += term.c0 * c0;
    } else {
      rates[term.rate] += term.c0 * c0 / term.rate;
    }
  }
  auto at = [&](double x) -> ExtReal {
    if (x == kInf) {
      for (auto it = rates.rbegin(); it != rates.rend(); ++it) {
        if (it->first > 0.0 && it->second != 0.0) return signed_inf(it->second);
      }
      if (linear != 0.0) return signed_inf(linear);
      return ExtReal(0.0);
    }
    if (x == -kInf) {
      for (auto [r, c] : rates) {
        if (r < 0.0 && c != 0.0) return signed_inf(c);
      }
      if (linear != 0.0) return signed_inf(-linear);
      return ExtReal(0.0);
    }
    double v = linear * x;
    for (auto [r, c] : rates) v += c * std::exp(r * x);
    return ExtReal(v);
  };
  return at(t) - at(s);
}

}  // namespace

std::optional<ExtReal> closed_form_integral(const Piece& piece, const DensityPart& density,
                                            const IntervalSpec& j) {
  auto supp = density.support();
  if (!supp) return ExtReal(0.0);
  auto range = intersect(j, piece.interval);
  if (range) range = intersect(*range, *supp);
  if (!range || range->lo >= range->hi) return ExtReal(0.0);
  const double s = range->lo, t = range->hi;

  bool has_exp = false, has_poly = false;
  std::optional<double> anchor;
  for (const auto& term : piece.terms) {
    switch (term.kind) {
      case Term::Kind::Exp: has_exp = true; break;
      case Term::Kind::Const:
      case Term::Kind::Poly: has_poly = true; break;
      case Term::Kind::Power:
        if (anchor && *anchor != term.anchor) return std::nullopt;
        anchor = term.anchor;
        break;
    }
  }
  if (has_exp) {
    if (has_poly || anchor || density.form != DensityPart::Form::Constant) return std::nullopt;
    return exp_integral(piece.terms, density.c0, s, t);
  }

  // Choose the variable v = sigma (u - o) >= 0 on the range.
  double o = 0.0;
  double density_exp = 0.0;
  switch (density.form) {
    case DensityPart::Form::Constant:
      if (anchor) {
        o = *anchor;
      } else {
        o = std::isfinite(s) ? s : (std::isfinite(t) ? t : 0.0);
      }
      break;
    case DensityPart::Form::PowerLeft:
      o = density.interval.lo;
      density_exp = density.exponent;
      if (anchor && *anchor != o) return std::nullopt;
      break;
    case DensityPart::Form::PowerRight:
      o = density.interval.hi;
      density_exp = density.exponent;
      if (anchor) return std::nullopt;
      break;
    case DensityPart::Form::Reciprocal:
      o = 0.0;
      density_exp = -1.0;
      if (anchor && *anchor != 0.0) return std::nullopt;
      break;
  }

  auto integrate_side = [&](double sigma, double v_from, double v_to) -> std::optional<ExtReal> {
    Series g;
    for (const auto& term : piece.terms) {
      if (term.kind == Term::Kind::Power) {
        double coef = term.c0;
        if (sigma < 0.0) {
          if (!is_integer(term.exponent)) return std::nullopt;
          if (std::fmod(std::fabs(term.exponent), 2.0) == 1.0) coef = -coef;
        }
        g.add(term.exponent + density_exp, coef * density.c0);
      } else {
        auto q = shift_poly(term.coeffs, o, sigma);
        for (std::size_t k = 0; k < q.size(); ++k) {
          g.add(static_cast<double>(k) + density_exp, q[k] * density.c0);
        }
      }
    }
    return antiderivative_at(g, v_to) - antiderivative_at(g, v_from);
  };

  // Orientation: u in (x, y) maps to v between v(x) and v(y), taken ascending.
  if (s >= o) return integrate_side(1.0, s - o, t - o);
  if (t <= o) return integrate_side(-1.0, o - t, o - s);
  if (anchor || density.form != DensityPart::Form::Constant) return std::nullopt;
  auto left = integrate_side(-1.0, 0.0, o - s);
  auto right = integrate_side(1.0, 0.0, t - o);
  if (!left || !right) return std::nullopt;
  return *left + *right;
}

}  // namespace gronwall
