#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "pocsel/moments.hpp"
#include "pocsel/random.hpp"

namespace pocsel {

/// One latent cell (y0, y1, s0, s1) of potential outcomes and potential
/// selection indicators.
struct Cell {
  int y0 = 0;
  int y1 = 0;
  int s0 = 0;
  int s1 = 0;
};

/// Canonical cell order: index = y0*8 + y1*4 + s0*2 + s1. Fixtures and every
/// serialization of a LatentJoint use this order.
constexpr std::size_t cell_index(int y0, int y1, int s0, int s1) noexcept {
  return static_cast<std::size_t>(y0 * 8 + y1 * 4 + s0 * 2 + s1);
}
constexpr std::size_t cell_index(const Cell& c) noexcept { return cell_index(c.y0, c.y1, c.s0, c.s1); }
constexpr Cell cell_at(std::size_t i) noexcept {
  return Cell{static_cast<int>((i >> 3) & 1U), static_cast<int>((i >> 2) & 1U),
              static_cast<int>((i >> 1) & 1U), static_cast<int>(i & 1U)};
}

/// Principal strata by (s0, s1).
enum class Stratum { NN, NO, ON, OO };
constexpr Stratum stratum_of(const Cell& c) noexcept {
  if (c.s0 == 1 && c.s1 == 1) return Stratum::OO;
  if (c.s0 == 0 && c.s1 == 1) return Stratum::NO;
  if (c.s0 == 1 && c.s1 == 0) return Stratum::ON;
  return Stratum::NN;
}

/// Full joint pmf of (Y0*, Y1*, S0, S1) plus P[D=1]; D is independent of the
/// latent vector.
struct LatentJoint {
  std::array<double, 16> pi{};
  double p_d1 = 0.5;

  double& at(int y0, int y1, int s0, int s1) { return pi[cell_index(y0, y1, s0, s1)]; }
  double at(int y0, int y1, int s0, int s1) const { return pi[cell_index(y0, y1, s0, s1)]; }

  /// Total mass of a principal stratum.
  double stratum_mass(Stratum s) const;

  /// Throws unless masses are nonnegative, sum to one within 1e-12 and
  /// p_d1 lies in (0,1).
  void validate() const;

  bool operator==(const LatentJoint&) const = default;
};

struct AssumptionReport {
  bool holds_a1 = true;  // random assignment holds by construction
  bool holds_a2 = false;
  bool holds_a3 = false;
  bool holds_a4 = false;
  bool holds_a5 = false;
  std::vector<std::string> details;

  bool satisfies(AssumptionSet a) const noexcept;
};

/// Slack used only by the stochastic-dominance comparison, whose two sides
/// are ratios that can tie up to rounding.
inline constexpr double kDominanceSlack = 1e-12;

AssumptionReport check_assumptions(const LatentJoint& joint);

/// P[Y1*=1 | Y0*=0, S0=1, S1=1].
double theta_oo(const LatentJoint& joint);

ObservedMoments observed_from_latent(const LatentJoint& joint);

enum class Endpoint { Lower, Upper };

/// A latent joint satisfying assumption set `a`, reproducing `m`, whose
/// probability of causation equals the lower or upper bound.
LatentJoint construct_bound_distribution(const ObservedMoments& m, AssumptionSet a, Endpoint which);

/// Cell-wise mixture omega * lower + (1 - omega) * upper, omega in (0,1).
LatentJoint construct_interior_distribution(const ObservedMoments& m, AssumptionSet a, double omega);

/// Draws a latent joint uniformly (Dirichlet(1,...,1)) over the cells the
/// assumption set allows; A1_5 draws are rejection-sampled on dominance.
LatentJoint random_latent_joint(AssumptionSet a, Rng& rng);

/// Flat fixture record: 16 masses in canonical order, then p_d1,
/// space-separated with 17 significant digits.
std::string to_fixture(const LatentJoint& joint);
LatentJoint from_fixture(const std::string& text);

}  // namespace pocsel
