#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gronwall/ext_real.hpp"
#include "gronwall/interval.hpp"

namespace gronwall {

struct Atom {
  double x = 0.0;
  double mass = 0.0;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Finitely many point masses, locations strictly increasing.
struct AtomicPart {
  std::vector<Atom> atoms;

  friend bool operator==(const AtomicPart&, const AtomicPart&) = default;
};

enum class Side { Right, Left };

/// Countable family of atoms at point +/- start * ratio^n, n >= 0.
///
/// With ratio < 1 the atoms accumulate at `point` from the given side. A ratio
/// greater than 1 walks outward instead (toward +inf for Side::Right, toward
/// -inf for Side::Left); this variant only appears in tamed measures built
/// around a = -inf.
struct AtomFamily {
  enum class MassRule { Constant, Geometric, Power };

  double point = 0.0;
  Side side = Side::Right;
  double start = 1.0;
  double ratio = 0.5;
  MassRule rule = MassRule::Constant;
  double kappa = 1.0;
  /// Geometric: lambda in (0,1). Power: exponent p > 0.
  double rate = 0.0;
  /// Restriction window; atoms outside it carry no mass.
  IntervalSpec window = IntervalSpec::real_line();

  bool outward() const { return ratio > 1.0; }
  double location(std::int64_t n) const;
  double mass(std::int64_t n) const;
  /// Whether the sum of all masses diverges.
  bool total_mass_diverges() const;
  /// Sum of masses with index in [first, last]; last < 0 means unbounded.
  double mass_sum(std::int64_t first, std::int64_t last) const;
  /// Limit point of the locations (+/-inf for outward families).
  double accumulation() const;

  friend bool operator==(const AtomFamily&, const AtomFamily&) = default;
};

/// Absolutely continuous part with a closed-form mass function.
struct DensityPart {
  enum class Form { Constant, PowerLeft, PowerRight, Reciprocal };

  IntervalSpec interval = IntervalSpec::real_line();  // open, anchors the form
  Form form = Form::Constant;
  double c0 = 1.0;
  double exponent = 0.0;
  IntervalSpec window = IntervalSpec::real_line();

  double density(double t) const;
  /// Antiderivative of the density on the interval, with limits at the ends.
  double antiderivative(double t) const;
  /// Non-integrable singularity at the lower / upper end (finite ends only).
  bool singular_left() const;
  bool singular_right() const;
  /// Mass of (-inf, t) diverges, i.e. infinite left tail.
  bool divergent_left_tail() const;
  /// Effective support: interval intersected with window.
  std::optional<IntervalSpec> support() const;

  friend bool operator==(const DensityPart&, const DensityPart&) = default;
};

/// Points of infinite mass.
struct InfiniteAtomPart {
  std::vector<double> locations;

  friend bool operator==(const InfiniteAtomPart&, const InfiniteAtomPart&) = default;
};

/// Equal-mass atoms on a countable dense subset of an interval.
///
/// The enumeration is the Calkin-Wilf sequence q_1, q_2, ... of positive
/// rationals: for a finite interval the atoms sit at lo + (hi - lo) * q / (1 + q),
/// for (lo, inf) at lo + q, for (-inf, hi) at hi - q and for the whole line at
/// 0 and +/-q. Every double inside the interval is one of these points (doubles
/// are dyadic rationals), so singleton masses are exact.
struct DenseAtomicPart {
  IntervalSpec interval;
  double per_atom_mass = 1.0;
  std::string enumeration = "calkin-wilf";

  /// First n atoms of the enumeration, in enumeration order.
  std::vector<double> first_atoms(std::size_t n) const;

  friend bool operator==(const DenseAtomicPart&, const DenseAtomicPart&) = default;
};

using Component = std::variant<AtomicPart, AtomFamily, DensityPart, InfiniteAtomPart,
                               DenseAtomicPart>;

/// Borel measure on the real line as a finite sum of catalog components.
class StructuredMeasure {
 public:
  StructuredMeasure() = default;
  /// Validates each component; merges all AtomicPart entries into one
  /// (coinciding locations have their masses summed).
  explicit StructuredMeasure(std::vector<Component> components);

  const std::vector<Component>& components() const { return components_; }
  bool has_infinite_atoms() const;
  /// Every finite location where the structure of some component changes:
  /// interval endpoints, accumulation points, atoms.
  std::vector<double> structure_points() const;

  friend bool operator==(const StructuredMeasure&, const StructuredMeasure&) = default;

 private:
  std::vector<Component> components_;
};

/// Mass of an interval. Exact for every catalog component.
ExtReal measure_eval(const StructuredMeasure& mu, const IntervalSpec& interval);

/// Mass of a single component on an interval.
ExtReal component_mass(const Component& c, const IntervalSpec& interval);

/// Indices n of family atoms lying in the interval: [first, last], last = -1
/// meaning unbounded. std::nullopt when no atom lies in the interval.
std::optional<std::pair<std::int64_t, std::int64_t>> family_index_range(
    const AtomFamily& family, const IntervalSpec& interval);

/// The measure with all infinite atoms removed.
StructuredMeasure semi_finite_part(const StructuredMeasure& mu);

/// Sum_{k=first}^{last} k^{-p} for 1 <= first <= last (last may be -1 = inf).
double power_sum(double p, std::int64_t first, std::int64_t last);

}  // namespace gronwall
