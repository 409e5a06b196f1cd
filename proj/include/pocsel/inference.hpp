#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pocsel/data.hpp"
#include "pocsel/moments.hpp"

namespace pocsel {

/// One-sided test of H0: treated rate - control rate >= 0.
///
/// `stat` is the unpooled z statistic of (treated - control) and `p_value` is
/// Phi(stat), the lower-tail probability, so small values are evidence of a
/// negative difference. With zero standard error the p-value is exactly 1
/// (difference >= 0) or 0 and `degenerate` is set.
struct ProportionTest {
  double diff = 0.0;
  double stat = 0.0;
  double p_value = 0.5;
  bool degenerate = false;

  bool operator==(const ProportionTest&) const = default;
};

struct RestrictionTestResult {
  ProportionTest selection_test;               // P[S=1|D=1] - P[S=1|D=0]
  std::optional<ProportionTest> outcome_test;  // P[Y=1|D=1] - P[Y=1|D=0], Y = Y* S
  AssumptionSet assumption_set = AssumptionSet::A1_3;

  bool operator==(const RestrictionTestResult&) const = default;
};

/// Standard normal cdf.
double normal_cdf(double x) noexcept;

ProportionTest one_sided_proportion_test(std::size_t k1, std::size_t n1, std::size_t k0,
                                         std::size_t n0);

RestrictionTestResult test_restrictions(const Dataset& data, AssumptionSet a);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  bool operator==(const Interval&) const = default;
};

struct BootstrapResult {
  Interval ci_lb;
  Interval ci_ub;
  BoundsInterval point;
  std::size_t replications = 0;
  double level = 0.9;
  std::uint64_t seed = 0;
  std::size_t failed_replicates = 0;

  bool operator==(const BootstrapResult&) const = default;
};

struct BootstrapOptions {
  std::size_t reps = 1000;
  double level = 0.9;
  std::uint64_t seed = 1;
  bool stratified = false;
  /// With stratified resampling, estimate the pooled bounds instead of the
  /// stratum-weighted summary.
  bool pool_strata = false;
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// Type-7 sample quantile of already sorted values.
double quantile_sorted(std::span<const double> sorted, double prob);

/// Percentile bootstrap for the bound endpoints. Replicate r draws from
/// substream r of `seed`, so the output does not depend on `threads`.
/// Replicates whose estimate fails are excluded and counted; more than half
/// failing raises "bootstrap unstable: data too sparse".
BootstrapResult bootstrap_bounds(const Dataset& data, AssumptionSet a, const BootstrapOptions& opt);

/// As bootstrap_bounds for several assumption sets sharing one set of
/// resamples. Results are in the order of `sets`.
std::vector<BootstrapResult> bootstrap_bounds(const Dataset& data, std::span<const AssumptionSet> sets,
                                              const BootstrapOptions& opt);

}  // namespace pocsel
