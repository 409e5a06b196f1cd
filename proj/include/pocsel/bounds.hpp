#pragma once

#include "pocsel/moments.hpp"

namespace pocsel {

/// alpha = P[S=1|D=0] / P[S=1|D=1]. Under monotone selection this is the
/// share of always-observed units among treated selected units.
double trim_ratio(const ObservedMoments& m);

/// Sharp bounds under random assignment, positive mass and monotone selection.
BoundsInterval bounds_a13(const ObservedMoments& m);

/// Adds monotone treatment response: same lower bound, tighter upper bound.
BoundsInterval bounds_a14(const ObservedMoments& m);

/// Adds stochastic dominance: tighter lower bound, upper bound as bounds_a14.
BoundsInterval bounds_a15(const ObservedMoments& m);

BoundsInterval compute_bounds(const ObservedMoments& m, AssumptionSet a);

/// P[S=1|D=1] >= P[S=1|D=0].
bool selection_restriction_holds(const ObservedMoments& m) noexcept;

/// P[Y=1|D=1] >= P[Y=1|D=0] with Y = Y* S, i.e.
/// p_y1_s1d1 * p_s1_d1 >= (1 - p_y0_s1d0) * p_s1_d0.
bool outcome_restriction_holds(const ObservedMoments& m) noexcept;

}  // namespace pocsel
