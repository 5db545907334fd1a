// Shared measure corpus for property tests and the acceptance runner.
#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "gronwall/measure.hpp"

namespace gronwall::corpus {

struct Entry {
  std::string name;
  StructuredMeasure mu;
  /// Points a at which (M_a) is probed.
  std::vector<double> probes;
};

inline DensityPart density(double lo, double hi, DensityPart::Form form = DensityPart::Form::Constant,
                           double c0 = 1.0, double exponent = 0.0) {
  DensityPart d;
  d.interval = IntervalSpec::open(lo, hi);
  d.form = form;
  d.c0 = c0;
  d.exponent = exponent;
  return d;
}

inline AtomFamily family(double point, Side side, AtomFamily::MassRule rule, double kappa = 1.0, double rate = 0.0,
                         double start = 1.0, double ratio = 0.5) {
  AtomFamily f;
  f.point = point;
  f.side = side;
  f.rule = rule;
  f.kappa = kappa;
  f.rate = rate;
  f.start = start;
  f.ratio = ratio;
  return f;
}

inline std::vector<Entry> measures() {
  using F = DensityPart::Form;
  using R = AtomFamily::MassRule;
  return {
      {"lebesgue-line", StructuredMeasure({density(-kInf, kInf)}), {-kInf, 0.0, 5.0}},
      {"lebesgue-unit", StructuredMeasure({density(0, 1)}), {-kInf, 0.0, 0.5}},
      {"lebesgue-left-half", StructuredMeasure({density(-kInf, 0)}), {-kInf, -3.0}},
      {"reciprocal-unit", StructuredMeasure({density(0, 1, F::Reciprocal)}), {0.0, 0.5, -kInf}},
      {"reciprocal-half-line", StructuredMeasure({density(0, kInf, F::Reciprocal, 0.5)}), {0.0, 2.0}},
      {"inverse-square-left", StructuredMeasure({density(0, 2, F::PowerLeft, 1.0, -2.0)}), {0.0, 1.0}},
      {"integrable-power-left", StructuredMeasure({density(0, 1, F::PowerLeft, 1.0, -0.5)}), {0.0, -kInf}},
      {"singular-from-left", StructuredMeasure({density(0, 1, F::PowerRight, 1.0, -1.0)}), {0.0, 0.5, 1.0}},
      {"dyadic-family", StructuredMeasure({family(0, Side::Right, R::Constant)}), {0.0, 1.0, -kInf}},
      // Heavy harmonic masses keep the solution negligible below double resolution.
      {"harmonic-family", StructuredMeasure({family(0, Side::Right, R::Power, 5.0, 1.0)}), {0.0, 1.0}},
      {"geometric-family", StructuredMeasure({family(0, Side::Right, R::Geometric, 1.0, 0.5)}), {0.0, -kInf}},
      {"left-accumulating-family", StructuredMeasure({family(1, Side::Left, R::Constant)}), {0.0, 1.0}},
      {"three-atoms", StructuredMeasure({AtomicPart{{{1, 1}, {2, 0.5}, {3, 2}}}}), {-kInf, 1.0, 2.5}},
      {"dense-rationals", StructuredMeasure({DenseAtomicPart{IntervalSpec::open(0, kInf), 1.0}}),
       {0.0, 1.0, 3.5, -1.0}},
      {"dense-unit-light", StructuredMeasure({DenseAtomicPart{IntervalSpec::open(0, 1), 0.3}, density(-1, 2)}),
       {0.0, 0.5, 1.0, -0.5}},
      {"infinite-atom-lebesgue", StructuredMeasure({density(0, 1), InfiniteAtomPart{{0.5}}}), {0.0, 0.5, -kInf}},
      {"infinite-atom-reciprocal", StructuredMeasure({density(0, 1, F::Reciprocal), InfiniteAtomPart{{0.5, 3}}}),
       {0.0, 0.25}},
      {"mixed", StructuredMeasure({density(0, 1, F::Reciprocal, 2.0), AtomicPart{{{0.5, 1.0}, {1.5, 2.0}}},
                                   family(0, Side::Right, R::Geometric, 0.5, 0.5, 0.75)}),
       {0.0, 0.75, 2.0}},
  };
}

/// A finite random measure on (-4, 4): densities, atoms, a convergent family.
inline StructuredMeasure random_finite(std::mt19937_64& rng, bool with_infinite_atoms) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Component> comps;
  double lo = -4.0 + 3.0 * u(rng);
  comps.push_back(density(lo, lo + 0.5 + 3.0 * u(rng), DensityPart::Form::Constant, 0.1 + 2.0 * u(rng)));
  if (u(rng) < 0.5) {
    comps.push_back(density(0.5, 4.0, DensityPart::Form::PowerLeft, 0.5 + u(rng), -0.5 * u(rng)));
  }
  std::vector<Atom> atoms;
  for (double x = -3.5; x < 4.0; x += 0.5 + u(rng)) atoms.push_back({x, 0.05 + u(rng)});
  comps.push_back(AtomicPart{atoms});
  if (u(rng) < 0.5) {
    comps.push_back(family(-1.0 + 2.0 * u(rng), Side::Right, AtomFamily::MassRule::Geometric, 0.5 + u(rng),
                           0.2 + 0.6 * u(rng), 0.5 + u(rng)));
  }
  if (with_infinite_atoms) {
    std::vector<double> locs;
    for (int i = 0; i < 1 + static_cast<int>(3 * u(rng)); ++i) locs.push_back(-3.0 + 6.0 * u(rng));
    std::sort(locs.begin(), locs.end());
    locs.erase(std::unique(locs.begin(), locs.end()), locs.end());
    comps.push_back(InfiniteAtomPart{locs});
  }
  return StructuredMeasure(std::move(comps));
}

}  // namespace gronwall::corpus

namespace gronwall::corpus {

/// Randomized lower approximation of sup{mu(I n F) : mu(F) < inf} for bounded I:
/// F runs over unions of finite-mass cells of random partitions of I.
inline double sup_oracle(const StructuredMeasure& mu, const IntervalSpec& I, std::mt19937_64& rng, int trials = 6) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double best = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const int cells = 16 << (2 * trial % 10);
    std::vector<double> cuts{I.lo, I.hi};
    for (int i = 1; i < cells; ++i) cuts.push_back(I.lo + (I.hi - I.lo) * u(rng));
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      IntervalSpec cell{cuts[i], cuts[i + 1], i == 0 ? I.lo_closed : false,
                        i + 2 == cuts.size() ? I.hi_closed : true};
      if (cell.empty()) continue;
      ExtReal m = measure_eval(mu, cell);
      if (m.is_finite()) total += m.value();
    }
    best = std::max(best, total);
  }
  return best;
}

}  // namespace gronwall::corpus
