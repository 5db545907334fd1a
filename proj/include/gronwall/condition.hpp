#pragma once

#include <map>
#include <optional>
#include <vector>

#include "gronwall/measure.hpp"

namespace gronwall {

enum class SingularKind {
  DensitySingularity,
  DivergentAtomFamily,
  DenseAtomicInterval,
  InfiniteTailAtMinusInf,
};

const char* to_string(SingularKind kind);

/// A point a where every right neighbourhood (a, t) has infinite mass. For
/// dense atomic intervals the whole range [point, until) fails.
struct SingularPoint {
  double point = 0.0;  // may be -inf
  SingularKind kind = SingularKind::DensitySingularity;
  std::optional<double> until;

  friend bool operator==(const SingularPoint&, const SingularPoint&) = default;
};

struct ConditionMReport {
  bool holds = false;
  std::vector<SingularPoint> singular_points;
  /// Tested point a -> witness t > a with finite semi-finite mass on (a, t).
  std::map<double, double> witnesses;
};

/// Result of testing (M_a) at one point.
struct LocalCondition {
  bool holds = false;
  std::optional<double> witness;
  std::vector<SingularPoint> causes;
};

/// Right-singular structure of each component of the semi-finite part.
std::vector<SingularPoint> right_singular_points(const StructuredMeasure& mu);

/// Points q where every left neighbourhood (t, q) has infinite mass.
std::vector<double> left_singular_points(const StructuredMeasure& mu);

LocalCondition check_condition_M_a(const StructuredMeasure& mu, double a);

ConditionMReport check_condition_M(const StructuredMeasure& mu);

struct SigmaFiniteCertificate {
  enum class Verdict { Proven, NotSigmaFinite, Unknown };
  Verdict verdict = Verdict::Unknown;
  /// Every real a has some eps with mu([a, a + eps)) < inf.
  bool locally_finite = false;
};

const char* to_string(SigmaFiniteCertificate::Verdict v);

SigmaFiniteCertificate sigma_finite_certificate(const StructuredMeasure& mu);

}  // namespace gronwall
