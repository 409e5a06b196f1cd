#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pocsel/data.hpp"
#include "pocsel/moments.hpp"

namespace pocsel {

/// Sufficient statistics for the moment estimator.
struct ArmCounts {
  std::size_t n_d1 = 0;
  std::size_t n_d0 = 0;
  std::size_t s1_d1 = 0;
  std::size_t s1_d0 = 0;
  std::size_t y1_s1_d1 = 0;
  std::size_t y0_s1_d0 = 0;

  void add(const MicroRecord& r) noexcept;
  std::size_t total() const noexcept { return n_d1 + n_d0; }
};

ArmCounts tally(const Dataset& data);

/// Sample proportions. Throws pocsel::Error naming the empty conditioning
/// cell when a probability is undefined or the q0 = 0 degeneracy occurs.
ObservedMoments moments_from_counts(const ArmCounts& counts);

ObservedMoments estimate_moments(const Dataset& data);

struct StratumEstimate {
  ObservedMoments moments;
  BoundsInterval bounds;
  double weight = 0.0;
  std::size_t n = 0;
};

/// Bounds on the summary measure: the average of stratum-conditional
/// probabilities of causation over the stratum distribution.
///
/// The aggregate's lb/ub are the weighted means of the per-stratum clipped
/// endpoints; its raw values equal the clipped ones and its clipping flags
/// stay false. `restriction_violated` is set if any retained stratum is
/// flagged.
struct StratifiedBounds {
  std::map<std::string, StratumEstimate> per_stratum;
  std::vector<std::pair<std::string, std::string>> dropped;  // (stratum, reason)
  BoundsInterval aggregate;
  std::size_t n_used = 0;
};

/// Within-stratum sample means, bounds per stratum, share-weighted average.
/// Strata whose moments or bounds cannot be formed are dropped with a reason
/// and the remaining weights renormalized. Throws when no stratum survives
/// or a record lacks a stratum id.
StratifiedBounds estimate_stratified(const Dataset& data, AssumptionSet a);

/// Per-stratum counts in stratum-id order. Throws if a record lacks an id.
std::vector<std::pair<std::string, ArmCounts>> tally_strata(const Dataset& data);

/// The aggregation step of estimate_stratified, starting from counts.
StratifiedBounds stratified_from_counts(const std::vector<std::pair<std::string, ArmCounts>>& strata,
                                        AssumptionSet a);

}  // namespace pocsel
