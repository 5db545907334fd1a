#include "gronwall/function.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "gronwall/error.hpp"

namespace gronwall {
namespace {

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

std::vector<double> trimmed(std::vector<double> c) {
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  return c;
}

double horner(const std::vector<double>& c, double t) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
  return v;
}

std::vector<double> derivative(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t k = 1; k < c.size(); ++k) d.push_back(c[k] * static_cast<double>(k));
  return d;
}

template <class F>
double bisect(F&& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200 && lo < hi; ++i) {
    double mid = lo + (hi - lo) / 2.0;
    if (mid <= lo || mid >= hi) break;
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if (sign_of(fm) == sign_of(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return lo + (hi - lo) / 2.0;
}

/// Finite bracket [lo, hi] of J used for root searches.
std::pair<double, double> search_range(const IntervalSpec& j, double radius) {
  double lo = std::isfinite(j.lo) ? j.lo : std::min(-radius, std::isfinite(j.hi) ? j.hi - radius : -radius);
  double hi = std::isfinite(j.hi) ? j.hi : std::max(radius, std::isfinite(j.lo) ? j.lo + radius : radius);
  return {lo, hi};
}

std::vector<double> sample_grid(double lo, double hi) {
  std::vector<double> pts;
  constexpr int kUniform = 512;
  for (int i = 0; i <= kUniform; ++i) pts.push_back(lo + (hi - lo) * i / kUniform);
  double w = (hi - lo) / kUniform;
  for (int k = 1; k < 60; ++k) {
    double d = std::ldexp(w, -k);
    pts.push_back(lo + d);
    pts.push_back(hi - d);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

/// Points in the interior of J where the piece crosses `level`.
std::vector<double> crossings(const Piece& piece, double level, const IntervalSpec& j) {
  std::vector<double> out;
  auto f = [&](double t) { return piece.eval(t) - level; };
  bool single = piece.terms.size() == 1;
  const Term* term = single ? &piece.terms[0] : nullptr;
  if (term && (term->kind == Term::Kind::Const || term->kind == Term::Kind::Poly)) {
    auto c = trimmed(term->coeffs);
    if (c.empty()) c.push_back(0.0);
    c[0] -= level;
    c = trimmed(c);
    if (c.size() <= 1) return out;
    double radius = 1.0;
    for (std::size_t k = 0; k + 1 < c.size(); ++k) radius = std::max(radius, 1.0 + std::fabs(c[k] / c.back()));
    auto [lo, hi] = search_range(j, radius);
    out = poly_roots(c, lo, hi);
  } else {
    double radius = 1e6;
    auto [lo, hi] = search_range(j, radius);
    if (!(lo < hi)) return out;
    std::vector<double> pts = sample_grid(lo, hi);
    if (!std::isfinite(j.lo)) {
      for (int k = 20; k < 64; ++k) pts.push_back(lo - std::ldexp(1.0, k));
    }
    if (!std::isfinite(j.hi)) {
      for (int k = 20; k < 64; ++k) pts.push_back(hi + std::ldexp(1.0, k));
    }
    if (term && term->kind == Term::Kind::Power && j.lo < term->anchor && term->anchor < j.hi) {
      pts.push_back(term->anchor);
    }
    std::sort(pts.begin(), pts.end());
    double prev_t = 0.0, prev_v = 0.0;
    bool have_prev = false;
    for (double t : pts) {
      if (!j.contains(t) && t != j.lo && t != j.hi) continue;
      double v = f(t);
      if (!std::isfinite(v)) {
        have_prev = false;
        continue;
      }
      if (v == 0.0) {
        out.push_back(t);
      } else if (have_prev && prev_v != 0.0 && sign_of(v) != sign_of(prev_v)) {
        out.push_back(bisect(f, prev_t, t));
      }
      prev_t = t;
      prev_v = v;
      have_prev = true;
    }
  }
  std::vector<double> inner;
  for (double r : out) {
    if (r > j.lo && r < j.hi) inner.push_back(r);
  }
  std::sort(inner.begin(), inner.end());
  inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
  return inner;
}

/// Splits J at the cut points; returns sub-intervals excluding the cuts.
std::vector<IntervalSpec> split(const IntervalSpec& j, const std::vector<double>& cuts) {
  std::vector<IntervalSpec> out;
  double lo = j.lo;
  bool lo_closed = j.lo_closed;
  for (double c : cuts) {
    IntervalSpec part{lo, c, lo_closed, false};
    if (!part.empty()) out.push_back(part);
    lo = c;
    lo_closed = false;
  }
  IntervalSpec last{lo, j.hi, lo_closed, j.hi_closed};
  if (!last.empty()) out.push_back(last);
  return out;
}

double representative(const IntervalSpec& j) {
  if (j.lo == j.hi) return j.lo;
  if (std::isfinite(j.lo) && std::isfinite(j.hi)) return j.lo + (j.hi - j.lo) / 2.0;
  if (std::isfinite(j.lo)) return j.lo + 1.0;
  if (std::isfinite(j.hi)) return j.hi - 1.0;
  return 0.0;
}

bool is_integer(double x) { return std::isfinite(x) && x == std::floor(x); }

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

VanishingBound term_bound(const Term& term, const Segment& seg, double p, double delta) {
  VanishingBound b;
  const double inf = kInf;
  if (std::isinf(p)) {
    // Tail beyond the finite edge `delta` toward p.
    double edge = delta;
    switch (term.kind) {
      case Term::Kind::Const:
      case Term::Kind::Poly: {
        auto c = trimmed(term.coeffs);
        if (c.size() <= 1) {
          double v = c.empty() ? 0.0 : std::fabs(c[0]);
          return {v, 0.0, v};
        }
        return {inf, 0.0, inf};
      }
      case Term::Kind::Power:
        if (term.exponent < 0.0) {
          return {std::fabs(term.c0) * std::pow(std::fabs(edge - term.anchor), term.exponent), 0.0, 0.0};
        }
        if (term.exponent == 0.0) return {std::fabs(term.c0), 0.0, std::fabs(term.c0)};
        return {inf, 0.0, inf};
      case Term::Kind::Exp: {
        double toward = p > 0 ? term.rate : -term.rate;
        if (toward < 0.0) return {std::fabs(term.eval(edge)), 0.0, 0.0};
        if (term.rate == 0.0) return {std::fabs(term.c0), 0.0, std::fabs(term.c0)};
        return {inf, 0.0, inf};
      }
    }
    return {inf, 0.0, inf};
  }
  bool right = seg.interval.lo >= p;
  double far = right ? p + delta : p - delta;
  switch (term.kind) {
    case Term::Kind::Const:
    case Term::Kind::Poly: {
      auto c = trimmed(term.coeffs);
      std::vector<double> d(c.size(), 0.0);
      for (std::size_t j = 0; j < c.size(); ++j) {
        for (std::size_t k = j; k < c.size(); ++k) {
          d[j] += c[k] * binomial(static_cast<int>(k), static_cast<int>(j)) *
                  std::pow(p, static_cast<double>(k - j));
        }
      }
      std::size_t r = 0;
      while (r < d.size() && d[r] == 0.0) ++r;
      if (r == d.size()) return {0.0, 0.0, 0.0};
      double coeff = 0.0;
      for (std::size_t j = r; j < d.size(); ++j) {
        coeff += std::fabs(d[j]) * std::pow(delta, static_cast<double>(j - r));
      }
      return {coeff, static_cast<double>(r), r == 0 ? std::fabs(d[0]) : 0.0};
    }
    case Term::Kind::Power:
      if (term.anchor == p) {
        if (term.exponent > 0.0) return {std::fabs(term.c0), term.exponent, 0.0};
        if (term.exponent == 0.0) return {std::fabs(term.c0), 0.0, std::fabs(term.c0)};
        return {inf, 0.0, inf};
      }
      [[fallthrough]];
    case Term::Kind::Exp: {
      double at_p = std::fabs(term.eval(p));
      double at_far = std::fabs(term.eval(far));
      return {std::max(at_p, at_far), 0.0, at_p};
    }
  }
  return {inf, 0.0, inf};
}

void validate_term(const Term& t, const IntervalSpec& interval) {
  auto bad = [](const std::string& m) { throw Error(ErrorKind::Schema, m); };
  switch (t.kind) {
    case Term::Kind::Const:
      if (t.coeffs.size() != 1 || !std::isfinite(t.coeffs[0])) bad("const term needs one finite value");
      break;
    case Term::Kind::Poly:
      if (t.coeffs.empty()) bad("poly term needs coefficients");
      for (double c : t.coeffs) {
        if (!std::isfinite(c)) bad("poly coefficient must be finite");
      }
      break;
    case Term::Kind::Power:
      if (!std::isfinite(t.c0) || !std::isfinite(t.anchor) || !std::isfinite(t.exponent)) {
        bad("power term parameters must be finite");
      }
      if (t.exponent < 0.0 && interval.contains(t.anchor)) {
        bad("power term with negative exponent is unbounded at its anchor inside the piece");
      }
      if (!is_integer(t.exponent) && interval.lo < t.anchor) {
        bad("power term with non-integer exponent must stay right of its anchor");
      }
      break;
    case Term::Kind::Exp:
      if (!std::isfinite(t.c0) || !std::isfinite(t.rate)) bad("exp term parameters must be finite");
      break;
  }
}

/// Merges polynomial/constant terms and like powers/exponentials.
std::vector<Term> simplify(const std::vector<Term>& terms) {
  std::vector<double> poly;
  std::map<std::pair<double, double>, double> powers;
  std::map<double, double> exps;
  bool any_poly = false, const_only = true;
  for (const auto& t : terms) {
    switch (t.kind) {
      case Term::Kind::Const:
      case Term::Kind::Poly:
        any_poly = true;
        if (t.kind == Term::Kind::Poly) const_only = false;
        if (poly.size() < t.coeffs.size()) poly.resize(t.coeffs.size(), 0.0);
        for (std::size_t k = 0; k < t.coeffs.size(); ++k) poly[k] += t.coeffs[k];
        break;
      case Term::Kind::Power:
        powers[{t.anchor, t.exponent}] += t.c0;
        break;
      case Term::Kind::Exp:
        exps[t.rate] += t.c0;
        break;
    }
  }
  std::vector<Term> out;
  if (any_poly) {
    auto c = trimmed(poly);
    if (!c.empty()) {
      if (const_only || c.size() == 1) {
        out.push_back(c.size() == 1 ? Term::constant(c[0]) : Term::poly(c));
      } else {
        out.push_back(Term::poly(c));
      }
    }
  }
  for (const auto& [key, c0] : powers) {
    if (c0 != 0.0) out.push_back(Term::power(c0, key.first, key.second));
  }
  for (const auto& [rate, c0] : exps) {
    if (c0 != 0.0) out.push_back(Term::exp(c0, rate));
  }
  return out;
}

}  // namespace

double Term::eval(double t) const {
  switch (kind) {
    case Kind::Const: return coeffs.empty() ? 0.0 : coeffs[0];
    case Kind::Poly: return horner(coeffs, t);
    case Kind::Power: return c0 * std::pow(t - anchor, exponent);
    case Kind::Exp: return c0 * std::exp(rate * t);
  }
  return 0.0;
}

Term Term::scaled(double k) const {
  Term out = *this;
  for (double& c : out.coeffs) c *= k;
  out.c0 *= k;
  return out;
}

double Piece::eval(double t) const {
  double v = 0.0;
  for (const auto& term : terms) v += term.eval(t);
  return v;
}

std::vector<double> poly_roots(const std::vector<double>& coeffs, double lo, double hi) {
  auto c = trimmed(coeffs);
  std::vector<double> out;
  if (c.size() <= 1 || !(lo <= hi)) return out;
  if (c.size() == 2) {
    double r = -c[0] / c[1];
    if (r >= lo && r <= hi) out.push_back(r);
    return out;
  }
  std::vector<double> knots{lo};
  for (double r : poly_roots(derivative(c), lo, hi)) knots.push_back(r);
  knots.push_back(hi);
  auto f = [&](double t) { return horner(c, t); };
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    double a = knots[i], b = knots[i + 1];
    double fa = f(a), fb = f(b);
    if (fa == 0.0) out.push_back(a);
    if (fb == 0.0) out.push_back(b);
    if (fa != 0.0 && fb != 0.0 && sign_of(fa) != sign_of(fb)) out.push_back(bisect(f, a, b));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

VanishingBound Integrand::vanishing_bound(const Segment&, double, double) const {
  return {kInf, 0.0, kInf};
}

PiecewiseFunction::PiecewiseFunction(std::vector<Piece> pieces) {
  for (auto& p : pieces) {
    p.interval.validate();
    if (p.interval.empty()) throw Error(ErrorKind::Schema, "function piece interval is empty");
    for (const auto& t : p.terms) validate_term(t, p.interval);
  }
  std::sort(pieces.begin(), pieces.end(), [](const Piece& x, const Piece& y) {
    return std::make_tuple(x.interval.lo, !x.interval.lo_closed) <
           std::make_tuple(y.interval.lo, !y.interval.lo_closed);
  });
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    if (intersect(pieces[i].interval, pieces[i + 1].interval)) {
      throw Error(ErrorKind::Schema, "function pieces overlap");
    }
  }
  pieces_ = std::move(pieces);
}

double PiecewiseFunction::value(double t) const {
  for (const auto& p : pieces_) {
    if (p.interval.contains(t)) return p.eval(t);
  }
  return 0.0;
}

std::vector<Segment> PiecewiseFunction::segments(const IntervalSpec& interval) const {
  std::vector<Segment> out;
  for (const auto& piece : pieces_) {
    auto j = intersect(piece.interval, interval);
    if (!j) continue;
    if (j->is_point()) {
      int s = sign_of(piece.eval(j->lo));
      if (s != 0) out.push_back({*j, s, &piece});
      continue;
    }
    auto cuts = crossings(piece, 0.0, *j);
    for (const auto& t : piece.terms) {
      if (t.kind == Term::Kind::Power && t.anchor > j->lo && t.anchor < j->hi) cuts.push_back(t.anchor);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (const auto& part : split(*j, cuts)) {
      int s = sign_of(piece.eval(representative(part)));
      if (s != 0) out.push_back({part, s, &piece});
    }
  }
  return out;
}

VanishingBound PiecewiseFunction::vanishing_bound(const Segment& seg, double p, double delta) const {
  if (!seg.piece) return Integrand::vanishing_bound(seg, p, delta);
  std::vector<VanishingBound> parts;
  for (const auto& t : seg.piece->terms) parts.push_back(term_bound(t, seg, p, delta));
  if (parts.empty()) return {0.0, 0.0, 0.0};
  double order = kInf;
  for (const auto& b : parts) {
    if (b.coeff != 0.0) order = std::min(order, b.order);
  }
  if (std::isinf(order)) return {0.0, 0.0, 0.0};
  VanishingBound out{0.0, order, 0.0};
  for (const auto& b : parts) {
    if (b.coeff == 0.0) continue;
    double scale = std::isinf(p) ? 1.0 : std::pow(delta, b.order - order);
    out.coeff += b.coeff * scale;
  }
  if (order == 0.0) {
    if (std::isinf(p)) {
      for (const auto& b : parts) out.limit += b.limit;
    } else {
      out.limit = std::fabs(seg.piece->eval(p));
      for (const auto& b : parts) {
        if (std::isinf(b.limit)) out.limit = kInf;
      }
    }
  }
  return out;
}

PiecewiseFunction PiecewiseFunction::scaled(double k) const {
  if (k == 0.0) return PiecewiseFunction();
  std::vector<Piece> out = pieces_;
  for (auto& p : out) {
    for (auto& t : p.terms) t = t.scaled(k);
  }
  return PiecewiseFunction(std::move(out));
}

PiecewiseFunction PiecewiseFunction::plus(const PiecewiseFunction& other) const {
  std::vector<double> cuts;
  for (const auto* f : {this, &other}) {
    for (const auto& p : f->pieces_) {
      if (std::isfinite(p.interval.lo)) cuts.push_back(p.interval.lo);
      if (std::isfinite(p.interval.hi)) cuts.push_back(p.interval.hi);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<IntervalSpec> cells;
  double lo = -kInf;
  for (double c : cuts) {
    cells.push_back(IntervalSpec::open(lo, c));
    cells.push_back(IntervalSpec::point(c));
    lo = c;
  }
  cells.push_back(IntervalSpec::open(lo, kInf));

  auto terms_on = [](const PiecewiseFunction& f, double x) {
    for (const auto& p : f.pieces_) {
      if (p.interval.contains(x)) return p.terms;
    }
    return std::vector<Term>{};
  };
  std::vector<Piece> merged;
  for (const auto& cell : cells) {
    if (cell.empty()) continue;
    double x = representative(cell);
    auto terms = terms_on(*this, x);
    auto more = terms_on(other, x);
    bool covered = false;
    for (const auto* f : {this, &other}) {
      for (const auto& p : f->pieces_) covered = covered || p.interval.contains(x);
    }
    if (!covered) continue;
    terms.insert(terms.end(), more.begin(), more.end());
    terms = simplify(terms);
    if (!merged.empty() && merged.back().terms == terms && merged.back().interval.hi == cell.lo &&
        (merged.back().interval.hi_closed || cell.lo_closed)) {
      merged.back().interval.hi = cell.hi;
      merged.back().interval.hi_closed = cell.hi_closed;
      continue;
    }
    merged.push_back(Piece{cell, std::move(terms)});
  }
  std::vector<Piece> nonzero;
  for (auto& p : merged) {
    if (!p.terms.empty()) nonzero.push_back(std::move(p));
  }
  return PiecewiseFunction(std::move(nonzero));
}

bool PiecewiseFunction::has_negative_part() const {
  for (const auto& s : segments(IntervalSpec::real_line())) {
    if (s.sign < 0) return true;
  }
  return false;
}

double PositivePart::value(double t) const { return std::max(f_.value(t), 0.0); }

std::vector<Segment> PositivePart::segments(const IntervalSpec& interval) const {
  std::vector<Segment> out;
  for (const auto& s : f_.segments(interval)) {
    if (s.sign > 0) out.push_back(s);
  }
  return out;
}

std::vector<double> PositivePart::support_points(const IntervalSpec& interval) const {
  std::vector<double> out;
  for (double x : f_.support_points(interval)) {
    if (f_.value(x) > 0.0) out.push_back(x);
  }
  return out;
}

OutsideSetPart::OutsideSetPart(const PiecewiseFunction& f, std::vector<IntervalSpec> set)
    : f_(f), set_(std::move(set)) {
  for (const auto& b : set_) b.validate();
  if (!in_set(0.0)) throw Error(ErrorKind::Schema, "the set B must contain 0");
}

bool OutsideSetPart::in_set(double v) const {
  return std::any_of(set_.begin(), set_.end(), [v](const IntervalSpec& b) { return b.contains(v); });
}

double OutsideSetPart::value(double t) const {
  double v = f_.value(t);
  return in_set(v) ? 0.0 : v;
}

std::vector<Segment> OutsideSetPart::segments(const IntervalSpec& interval) const {
  std::vector<Segment> out;
  for (const auto& seg : f_.segments(interval)) {
    std::vector<double> cuts;
    if (!seg.interval.is_point()) {
      for (const auto& b : set_) {
        for (double level : {b.lo, b.hi}) {
          if (!std::isfinite(level)) continue;
          auto c = crossings(*seg.piece, level, seg.interval);
          cuts.insert(cuts.end(), c.begin(), c.end());
        }
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (const auto& part : split(seg.interval, cuts)) {
      if (!in_set(f_.value(representative(part)))) out.push_back({part, seg.sign, seg.piece});
    }
  }
  return out;
}

}  // namespace gronwall
