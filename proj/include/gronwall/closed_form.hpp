#pragma once

#include <optional>

#include "gronwall/ext_real.hpp"
#include "gronwall/function.hpp"
#include "gronwall/measure.hpp"

namespace gronwall {

/// Exact value of the integral of piece * density over J, when the pair of
/// forms is in the antiderivative table:
///
///   const/poly  x  constant, power-left, power-right, reciprocal
///   power       x  constant, power-left (same anchor), reciprocal (anchor 0)
///   exp         x  constant
///
/// Returns std::nullopt for every other pair. Divergent integrals come back as
/// +/-inf; throws Error(NonIntegrable) when both signs diverge.
std::optional<ExtReal> closed_form_integral(const Piece& piece, const DensityPart& density,
                                            const IntervalSpec& j);

}  // namespace gronwall
