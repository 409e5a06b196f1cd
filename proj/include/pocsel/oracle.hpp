#pragma once

#include <cstddef>
#include <cstdint>

#include "pocsel/latent.hpp"
#include "pocsel/moments.hpp"

namespace pocsel {

enum class OracleMode { LinearProgram, Grid };

struct OracleResolution {
  OracleMode mode = OracleMode::LinearProgram;
  // Grid mode only.
  std::size_t samples = 20000;
  std::uint64_t seed = 1;
};

struct Envelope {
  double theta_min = 0.0;
  double theta_max = 0.0;
  // Latent joints attaining the extremes (LP mode) or the best points found
  // (grid mode).
  LatentJoint argmin;
  LatentJoint argmax;
};

/// Optimizes the probability of causation over every latent joint that
/// satisfies the assumption set and reproduces the four identified
/// probabilities. Independent of the closed-form bounds: LP mode solves the
/// linear-fractional program over the 16 cell masses exactly; grid mode
/// searches the always-observed outcome table by random sampling plus hill
/// climbing.
Envelope sharp_envelope_oracle(const ObservedMoments& m, AssumptionSet a,
                               const OracleResolution& resolution = {});

}  // namespace pocsel
