#include <algorithm>
#include <cmath>
#include <variant>

#include "gronwall/condition.hpp"
#include "gronwall/construct.hpp"
#include "gronwall/error.hpp"

namespace gronwall {
namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::NumericalFailure, what); }

/// Component c restricted to w; nullopt when nothing is left.
std::optional<Component> window_component(const Component& c, const IntervalSpec& w) {
  if (const auto* part = std::get_if<AtomicPart>(&c)) {
    AtomicPart out;
    for (const Atom& at : part->atoms) {
      if (w.contains(at.x)) out.atoms.push_back(at);
    }
    if (out.atoms.empty()) return std::nullopt;
    return out;
  }
  if (const auto* fam = std::get_if<AtomFamily>(&c)) {
    auto k = intersect(fam->window, w);
    if (!k) return std::nullopt;
    AtomFamily out = *fam;
    out.window = *k;
    if (!family_index_range(out, out.window)) return std::nullopt;
    return out;
  }
  if (const auto* d = std::get_if<DensityPart>(&c)) {
    auto k = intersect(d->window, w);
    if (!k) return std::nullopt;
    DensityPart out = *d;
    out.window = *k;
    auto supp = out.support();
    if (!supp || supp->lo >= supp->hi) return std::nullopt;
    return out;
  }
  if (const auto* dense = std::get_if<DenseAtomicPart>(&c)) {
    auto k = intersect(dense->interval, w);
    if (!k) return std::nullopt;
    if (k->lo < k->hi) fail("dense atomic part inside a finite block");
    return AtomicPart{{Atom{k->lo, dense->per_atom_mass}}};
  }
  fail("infinite atoms in a semi-finite part");
}

void append_windowed(const StructuredMeasure& mu, const IntervalSpec& w, std::vector<Component>& out) {
  for (const auto& c : mu.components()) {
    if (auto r = window_component(c, w)) out.push_back(std::move(*r));
  }
}

AtomicPart atoms_at(const StructuredMeasure& mu, const std::vector<double>& xs) {
  AtomicPart out;
  for (double x : xs) {
    ExtReal m = measure_eval(mu, IntervalSpec::point(x));
    if (!m.is_finite()) fail("selected atom carries infinite mass");
    out.atoms.push_back({x, m.value()});
  }
  return out;
}

/// F_n inside an infinite block: atoms or a subinterval of mass above 1.
void select_in_block(const StructuredMeasure& mu, TamingBlock& blk) {
  const IntervalSpec& g = blk.block;
  for (const auto& c : mu.components()) {
    if (const auto* dense = std::get_if<DenseAtomicPart>(&c)) {
      auto k = intersect(g, dense->interval);
      if (!k || k->lo >= k->hi) continue;
      int count = static_cast<int>(std::floor(1.0 / dense->per_atom_mass)) + 1;
      blk.selection = TamingBlock::Selection::Atoms;
      double total = 0.0;
      for (int j = 0; j < count || total <= 1.0; ++j) {
        blk.atoms.clear();
        total = 0.0;
        int n = std::max(count, j + 1);
        for (int i = 0; i < n; ++i) {
          double x = k->lo + (k->hi - k->lo) * (i + 1) / (n + 1);
          blk.atoms.push_back(x);
          total += measure_eval(mu, IntervalSpec::point(x)).value();
        }
        if (total > 1.0) break;
      }
      blk.mass = ExtReal(total);
      return;
    }
  }
  for (const auto& c : mu.components()) {
    const auto* fam = std::get_if<AtomFamily>(&c);
    if (!fam || !fam->total_mass_diverges()) continue;
    auto range = family_index_range(*fam, g);
    if (!range || range->second >= 0) continue;
    blk.selection = TamingBlock::Selection::Atoms;
    double total = 0.0;
    for (std::int64_t n = range->first; total <= 1.0; ++n) {
      double x = fam->location(n);
      blk.atoms.push_back(x);
      total += measure_eval(mu, IntervalSpec::point(x)).value();
    }
    std::sort(blk.atoms.begin(), blk.atoms.end());
    blk.mass = ExtReal(total);
    return;
  }
  for (const auto& c : mu.components()) {
    const auto* d = std::get_if<DensityPart>(&c);
    if (!d) continue;
    auto supp = d->support();
    auto k = supp ? intersect(g, *supp) : std::nullopt;
    if (!k || k->lo >= k->hi) continue;
    const bool left = d->singular_left() && k->lo == d->interval.lo;
    const bool right = d->singular_right() && k->hi == d->interval.hi;
    if (!left && !right) continue;
    const double s = left ? k->lo : k->hi;
    const double mid = k->lo + 0.5 * (k->hi - k->lo);
    // x(u) moves from mid (u = 0) toward the singular end s.
    auto piece = [&](double u) {
      double x = s + (mid - s) * std::exp2(-u);
      return left ? IntervalSpec::open(x, mid) : IntervalSpec::open(mid, x);
    };
    auto mass = [&](double u) { return measure_eval(mu, piece(u)); };
    double lo = 0.0, hi = 1.0;
    while (!(mass(hi) > ExtReal(1.0))) {
      lo = hi;
      hi *= 2.0;
      if (hi > 2048.0) fail("no finite subinterval of mass above 1");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
      double u = 0.5 * (lo + hi);
      ExtReal m = mass(u);
      if (m > ExtReal(1.0) && m <= ExtReal(2.0)) {
        hi = u;
        break;
      }
      (m > ExtReal(1.0) ? hi : lo) = u;
    }
    blk.selection = TamingBlock::Selection::Interval;
    blk.subinterval = piece(hi);
    blk.mass = mass(hi);
    if (!blk.mass.is_finite()) fail("selected subinterval carries infinite mass");
    return;
  }
  fail("cannot select a finite part of block " + std::to_string(blk.index));
}

}  // namespace

const char* to_string(TamingBlock::Selection s) {
  switch (s) {
    case TamingBlock::Selection::Whole: return "whole";
    case TamingBlock::Selection::Atoms: return "atoms";
    case TamingBlock::Selection::Interval: return "interval";
  }
  return "unknown";
}

double TamedMeasure::grid(int n) const {
  if (std::isfinite(a)) return a + std::ldexp(1.0, n);
  return n <= 0 ? -std::ldexp(1.0, -n) : std::ldexp(1.0, n) - 2.0;
}

bool TamedMeasure::contains(double t) const {
  if (!(t > a)) return false;
  if (t <= grid(tail_index)) {
    if (!dense_tail) return tail_window.contains(t);
    return std::any_of(slot_families.begin(), slot_families.end(), [&](const AtomFamily& f) {
      return family_index_range(f, IntervalSpec::point(t)).has_value();
    });
  }
  for (const TamingBlock& blk : blocks) {
    if (!blk.block.contains(t)) continue;
    switch (blk.selection) {
      case TamingBlock::Selection::Whole: return true;
      case TamingBlock::Selection::Atoms:
        return std::find(blk.atoms.begin(), blk.atoms.end(), t) != blk.atoms.end();
      case TamingBlock::Selection::Interval: return blk.subinterval->contains(t);
    }
  }
  return false;
}

std::vector<IntervalSpec> TamedMeasure::intervals() const {
  std::vector<IntervalSpec> out;
  auto push = [&](const IntervalSpec& i) {
    // Adjacent (x, y] and (y, z] merge into (x, z].
    if (!out.empty() && out.back().hi == i.lo && (out.back().hi_closed || i.lo_closed)) {
      out.back().hi = i.hi;
      out.back().hi_closed = i.hi_closed;
    } else {
      out.push_back(i);
    }
  };
  if (!dense_tail) push(tail_window);
  for (const TamingBlock& blk : blocks) {
    if (blk.selection == TamingBlock::Selection::Whole) push(blk.block);
    if (blk.selection == TamingBlock::Selection::Interval) push(*blk.subinterval);
  }
  return out;
}

std::vector<double> TamedMeasure::isolated_points() const {
  std::vector<double> out;
  for (const TamingBlock& blk : blocks) {
    if (blk.selection == TamingBlock::Selection::Atoms) {
      out.insert(out.end(), blk.atoms.begin(), blk.atoms.end());
    }
  }
  return out;
}

TamedMeasure extract_taming_subset(const StructuredMeasure& mu_sf, double a,
                                   std::optional<double> horizon) {
  if (mu_sf.has_infinite_atoms()) {
    throw Error(ErrorKind::Schema, "taming expects a semi-finite measure");
  }
  if (std::isnan(a) || a == kInf) throw Error(ErrorKind::Schema, "a must be finite or -inf");
  if (check_condition_M_a(mu_sf, a).holds) {
    throw Error(ErrorKind::HypothesisViolated, "(M_a) holds at " + format_ext(a) + "; nothing to tame");
  }

  TamedMeasure tm;
  tm.a = a;
  const std::vector<double> pts = mu_sf.structure_points();
  double top = std::isfinite(a) ? a + 2.0 : 1.0;
  double next = kInf;  // nearest structure point above a
  for (double p : pts) {
    top = std::max(top, p + 1.0);
    if (p > a) next = std::min(next, p);
  }
  tm.horizon = std::max(top, horizon.value_or(top));
  next = std::min(next, tm.horizon);

  if (std::isfinite(a)) {
    tm.tail_index = static_cast<int>(std::floor(std::log2(next - a))) - 1;
  } else {
    double k = std::max(0.0, std::ceil(std::log2(std::max(1.0, 1.0 - next)))) + 1.0;
    tm.tail_index = -static_cast<int>(k);
  }
  const double t_tail = tm.grid(tm.tail_index);

  const DenseAtomicPart* tail_dense = nullptr;
  for (const auto& c : mu_sf.components()) {
    const auto* dense = std::get_if<DenseAtomicPart>(&c);
    if (!dense) continue;
    bool at_a = std::isfinite(a) ? (dense->interval.lo <= a && a < dense->interval.hi)
                                 : dense->interval.lo == -kInf;
    if (at_a) tail_dense = dense;
  }

  std::vector<Component> comps;
  tm.tail_window = IntervalSpec::right_closed(a, t_tail);
  if (tail_dense) {
    tm.dense_tail = true;
    const double m = tail_dense->per_atom_mass;
    const int slots = static_cast<int>(std::floor(1.0 / m)) + 1;
    for (int j = 0; j < slots; ++j) {
      AtomFamily fam;
      fam.rule = AtomFamily::MassRule::Constant;
      fam.kappa = m;
      fam.window = tm.tail_window;
      if (std::isfinite(a)) {
        fam.point = a;
        fam.side = Side::Right;
        fam.ratio = 0.5;
        fam.start = (t_tail - a) * (1.0 - j / (2.0 * slots));
      } else {
        fam.point = 0.0;
        fam.side = Side::Left;
        fam.ratio = 2.0;
        fam.start = -t_tail * (1.0 + static_cast<double>(j) / slots);
      }
      tm.slot_families.push_back(fam);
      comps.push_back(fam);
    }
  } else {
    append_windowed(mu_sf, tm.tail_window, comps);
  }

  for (int n = tm.tail_index + 1; tm.grid(n - 1) < tm.horizon; ++n) {
    TamingBlock blk;
    blk.index = n;
    blk.block = IntervalSpec::right_closed(tm.grid(n - 1), tm.grid(n));
    blk.mass = measure_eval(mu_sf, blk.block);
    blk.infinite = !blk.mass.is_finite();
    if (!blk.infinite) {
      append_windowed(mu_sf, blk.block, comps);
    } else {
      select_in_block(mu_sf, blk);
      if (blk.selection == TamingBlock::Selection::Atoms) {
        comps.push_back(atoms_at(mu_sf, blk.atoms));
      } else {
        append_windowed(mu_sf, *blk.subinterval, comps);
      }
    }
    tm.blocks.push_back(std::move(blk));
  }
  tm.mu_E = StructuredMeasure(std::move(comps));
  if (measure_eval(tm.mu_E, IntervalSpec::open(a, t_tail)).is_finite()) {
    fail("tamed measure lost the singularity at " + format_ext(a));
  }
  return tm;
}

}  // namespace gronwall
