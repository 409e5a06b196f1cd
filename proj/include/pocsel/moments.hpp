#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace pocsel {

/// The identified conditional probabilities the bounds are built from.
///
/// `p_d1` is carried along for data checks and latent constructions; none of
/// the bound formulas use it.
struct ObservedMoments {
  double p_y1_s1d1 = 0.0;  // P[Y=1 | S=1, D=1]
  double p_y0_s1d0 = 0.0;  // P[Y=0 | S=1, D=0]
  double p_s1_d1 = 0.0;    // P[S=1 | D=1]
  double p_s1_d0 = 0.0;    // P[S=1 | D=0]
  double p_d1 = 0.5;       // P[D=1]

  bool operator==(const ObservedMoments&) const = default;
};

/// Nested identifying assumption sets. A1_3 = random assignment, positive
/// mass and monotone selection; A1_4 adds monotone treatment response; A1_5
/// adds stochastic dominance of the always-observed over the
/// observed-only-when-treated.
enum class AssumptionSet { A1_3, A1_4, A1_5 };

inline constexpr std::array<AssumptionSet, 3> kAllAssumptionSets{
    AssumptionSet::A1_3, AssumptionSet::A1_4, AssumptionSet::A1_5};

std::string_view to_string(AssumptionSet a) noexcept;
std::optional<AssumptionSet> parse_assumption_set(std::string_view text) noexcept;

/// [lb, ub] for one assumption set.
///
/// `lb`/`ub` are the clipped values; `lb_raw`/`ub_raw` are the formula values
/// before the outer max{., 0} / min{., 1}. `restriction_violated` is set when
/// the moments fail an observable implication of the assumption set (trim
/// ratio above one, or for A1_4/A1_5 a treated outcome rate below the
/// untreated one). `crossed` is set when lb > ub after clipping; the interval
/// is reported as-is, never swapped.
struct BoundsInterval {
  double lb = 0.0;
  double ub = 1.0;
  AssumptionSet assumption_set = AssumptionSet::A1_3;
  bool lb_clipped = false;
  bool ub_clipped = false;
  double lb_raw = 0.0;
  double ub_raw = 1.0;
  bool restriction_violated = false;
  bool crossed = false;

  bool operator==(const BoundsInterval&) const = default;
};

}  // namespace pocsel
