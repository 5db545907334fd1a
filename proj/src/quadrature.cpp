#include "gronwall/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "gronwall/error.hpp"
#include "gronwall/ext_real.hpp"

namespace gronwall {
namespace {

constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo, hi, value, error;
  bool infinite;
};

double checked(double v) {
  if (std::isnan(v)) throw Error(ErrorKind::NumericalFailure, "integrand returned NaN");
  return v;
}

Panel gk15(const std::function<double(double)>& f, double lo, double hi) {
  double c = 0.5 * (lo + hi);
  double h = 0.5 * (hi - lo);
  double fc = checked(f(c));
  double kronrod = fc * kKronrod[7];
  double gauss = fc * kGauss[3];
  for (int i = 0; i < 7; ++i) {
    double dx = h * kNodes[i];
    double s = checked(f(c - dx)) + checked(f(c + dx));
    kronrod += kKronrod[i] * s;
    if (i % 2 == 1) gauss += kGauss[i / 2] * s;
  }
  kronrod *= h;
  gauss *= h;
  bool inf = std::isinf(kronrod);
  return {lo, hi, kronrod, inf ? kInf : std::fabs(kronrod - gauss), inf};
}

double pairwise_sum(std::vector<double>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 8) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

QuadratureResult finalize(std::vector<Panel>& panels) {
  std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.lo < y.lo; });
  std::vector<double> values, errors;
  bool divergent = false;
  for (const auto& p : panels) {
    values.push_back(p.value);
    errors.push_back(p.error);
    divergent = divergent || p.infinite;
  }
  QuadratureResult r;
  r.value = pairwise_sum(values, 0, values.size());
  r.error = pairwise_sum(errors, 0, errors.size());
  r.divergent = divergent;
  return r;
}

struct Shells {
  double sum = 0.0;
  double error = 0.0;
  bool divergent = false;
};

/// Integrates from the finite point m toward the end e through shells.
Shells shells_toward(const std::function<double(double)>& f, double m, double e,
                     const ShellOptions& opt) {
  Shells out;
  constexpr int kMaxShells = 2200;
  const bool infinite = std::isinf(e);
  const double dir = e > m ? 1.0 : -1.0;
  const double width = infinite ? std::max(1.0, std::fabs(m)) : std::fabs(e - m);
  auto boundary = [&](int k) {
    if (infinite) return m + dir * width * (std::ldexp(1.0, k) - 1.0);
    return e - dir * std::ldexp(width, -k);
  };
  double prev = -1.0;
  int zero_run = 0;
  for (int k = 0; k < kMaxShells; ++k) {
    double u0 = boundary(k), u1 = boundary(k + 1);
    bool resolved = std::isfinite(u1) && u1 != u0 && u1 != e;
    if (!resolved) break;
    auto panel = gauss_kronrod(f, std::min(u0, u1), std::max(u0, u1), opt.rel_tol);
    if (panel.divergent) {
      out.divergent = true;
      return out;
    }
    double c = std::fabs(panel.value);
    out.sum += panel.value;
    out.error += panel.error;
    if (opt.tail_bound) {
      auto b = opt.tail_bound(e, u1);
      if (b && *b <= opt.rel_tol * std::max(1.0, std::fabs(out.sum))) {
        out.error += *b;
        return out;
      }
    }
    if (c == 0.0) {
      if (++zero_run >= 8) return out;
    } else {
      zero_run = 0;
    }
    if (k >= 3 && prev > 0.0 && c > 0.0) {
      double r = c / prev;
      if (r < 0.95) {
        double est = c * r / (1.0 - r);
        if (est <= opt.rel_tol * std::fabs(out.sum)) {
          out.error += est;
          return out;
        }
      }
    }
    prev = c;
  }
  // Either resolution ran out or the shells stopped decaying.
  if (opt.tail_bound) {
    double last = boundary(0);
    for (int k = 0; k < kMaxShells; ++k) {
      double u = boundary(k + 1);
      if (!std::isfinite(u) || u == e) break;
      last = u;
    }
    auto b = opt.tail_bound(e, last);
    if (b && std::isfinite(*b)) {
      out.error += *b;
      return out;
    }
  }
  out.divergent = true;
  return out;
}

}  // namespace

QuadratureResult gauss_kronrod(const std::function<double(double)>& f, double lo, double hi,
                               double rel_tol, double abs_tol) {
  if (!(lo < hi)) return {};
  // Max-heap on error; running totals avoid rescanning every panel per split.
  auto by_error = [](const Panel& x, const Panel& y) { return x.error < y.error; };
  std::vector<Panel> panels{gk15(f, lo, hi)};
  double total = panels[0].value, err = panels[0].error;
  constexpr int kMaxPanels = 4000;
  while (static_cast<int>(panels.size()) < kMaxPanels) {
    if (std::isinf(total) || std::isnan(total)) break;
    if (err <= std::max(abs_tol, rel_tol * std::fabs(total))) break;
    std::pop_heap(panels.begin(), panels.end(), by_error);
    Panel p = panels.back();
    double mid = 0.5 * (p.lo + p.hi);
    // Below a few hundred ulps the error estimate is roundoff, not truncation.
    if (!(mid > p.lo && mid < p.hi) || p.hi - p.lo < 256.0 * std::numeric_limits<double>::epsilon() * std::fabs(mid)) {
      std::push_heap(panels.begin(), panels.end(), by_error);
      break;
    }
    Panel left = gk15(f, p.lo, mid), right = gk15(f, mid, p.hi);
    total += left.value + right.value - p.value;
    err += left.error + right.error - p.error;
    panels.back() = left;
    std::push_heap(panels.begin(), panels.end(), by_error);
    panels.push_back(right);
    std::push_heap(panels.begin(), panels.end(), by_error);
  }
  return finalize(panels);
}

QuadratureResult integrate_sign_constant(const std::function<double(double)>& f, double lo,
                                         double hi, const ShellOptions& options) {
  if (!(lo < hi)) return {};
  double m;
  if (std::isfinite(lo) && std::isfinite(hi)) {
    m = lo + 0.5 * (hi - lo);
  } else if (std::isfinite(lo)) {
    m = lo + std::max(1.0, std::fabs(lo));
  } else if (std::isfinite(hi)) {
    m = hi - std::max(1.0, std::fabs(hi));
  } else {
    m = 0.0;
  }
  QuadratureResult out;
  auto side = [&](double end, bool singular) {
    if (std::isinf(end) || singular) {
      auto s = shells_toward(f, m, end, options);
      out.value += s.sum;
      out.error += s.error;
      out.divergent = out.divergent || s.divergent;
    } else {
      auto q = gauss_kronrod(f, std::min(m, end), std::max(m, end), options.rel_tol);
      out.value += q.value;
      out.error += q.error;
      out.divergent = out.divergent || q.divergent;
    }
  };
  side(lo, options.singular_lo);
  side(hi, options.singular_hi);
  return out;
}

}  // namespace gronwall
