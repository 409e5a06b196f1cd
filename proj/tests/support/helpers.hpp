#pragma once

#include <cmath>

#include "pocsel/bounds.hpp"
#include "pocsel/latent.hpp"
#include "pocsel/moments.hpp"
#include "pocsel/random.hpp"

namespace testing {

// Published endpoints used to back out the moments.
inline constexpr double kTableUB1 = 0.609;
inline constexpr double kTableUB3 = 0.163;
inline constexpr double kTableLB3 = 0.106;
inline constexpr double kTableLB1 = 0.014;

struct Table1Inputs {
  double p1;
  double q0;
  double alpha;
};

// Solves UB1 = p1/(a q0), UB3 = (p1/a + q0 - 1)/q0, LB3 = (p1 + q0 - 1)/q0
// for (q0, p1, a), assuming no endpoint is clipped.
inline Table1Inputs invert_table1() {
  const double q0 = 1.0 / (kTableUB1 - kTableUB3 + 1.0);
  const double p1 = kTableLB3 * q0 + 1.0 - q0;
  const double alpha = p1 / (kTableUB1 * q0);
  return {p1, q0, alpha};
}

inline pocsel::ObservedMoments moments_of(double p1, double q0, double alpha, double p_s1_d0 = 0.55) {
  pocsel::ObservedMoments m;
  m.p_y1_s1d1 = p1;
  m.p_y0_s1d0 = q0;
  m.p_s1_d0 = p_s1_d0;
  m.p_s1_d1 = p_s1_d0 / alpha;
  m.p_d1 = 0.5;
  return m;
}

inline pocsel::ObservedMoments table1_moments() {
  const auto t = invert_table1();
  return moments_of(t.p1, t.q0, t.alpha);
}

inline double draw(pocsel::Rng& rng, double lo, double hi) { return lo + (hi - lo) * pocsel::uniform01(rng); }

// Moments with alpha <= 1 and q0 > 0; for A1_4 / A1_5 also the outcome
// restriction. Rejection sampling from independent uniforms.
inline pocsel::ObservedMoments random_restricted_moments(pocsel::Rng& rng, pocsel::AssumptionSet a) {
  while (true) {
    pocsel::ObservedMoments m;
    m.p_y1_s1d1 = pocsel::uniform01(rng);
    m.p_y0_s1d0 = draw(rng, 0.02, 1.0);
    m.p_s1_d1 = draw(rng, 0.05, 1.0);
    m.p_s1_d0 = draw(rng, 0.05, 1.0);
    m.p_d1 = draw(rng, 0.1, 0.9);
    if (m.p_s1_d0 > m.p_s1_d1) continue;
    if (a != pocsel::AssumptionSet::A1_3 && !pocsel::outcome_restriction_holds(m)) continue;
    return m;
  }
}

inline double max_moment_gap(const pocsel::ObservedMoments& a, const pocsel::ObservedMoments& b) {
  return std::fmax(std::fmax(std::fabs(a.p_y1_s1d1 - b.p_y1_s1d1), std::fabs(a.p_y0_s1d0 - b.p_y0_s1d0)),
                   std::fmax(std::fabs(a.p_s1_d1 - b.p_s1_d1), std::fabs(a.p_s1_d0 - b.p_s1_d0)));
}

}  // namespace testing

#include <array>
#include <string>
#include <vector>

#include "pocsel/data.hpp"

namespace testing {

// Mixture of a random A1_4 joint (weight `random_share`) and an interior
// point of the table construction, which keeps q0 and alpha away from zero.
inline pocsel::LatentJoint tame_joint(pocsel::Rng& rng, double random_share = 0.5) {
  const auto r = pocsel::random_latent_joint(pocsel::AssumptionSet::A1_4, rng);
  const auto t = pocsel::construct_interior_distribution(table1_moments(), pocsel::AssumptionSet::A1_4, 0.5);
  pocsel::LatentJoint j;
  for (std::size_t i = 0; i < 16; ++i) j.pi[i] = random_share * r.pi[i] + (1.0 - random_share) * t.pi[i];
  j.p_d1 = 0.5;
  return j;
}

struct StratifiedFixture {
  std::vector<pocsel::MicroRecord> records;
  std::vector<pocsel::LatentJoint> joints;
  // Share-weighted bounds of the true per-stratum moments, per assumption set.
  std::array<pocsel::BoundsInterval, 3> truth{};
};

inline StratifiedFixture stratified_fixture(pocsel::Rng& rng, int strata, std::size_t total,
                                            double random_share = 0.5) {
  StratifiedFixture f;
  std::vector<std::size_t> sizes(static_cast<std::size_t>(strata));
  std::size_t used = 0;
  for (int x = 0; x < strata; ++x) {
    // Unequal sizes: stratum x gets weight proportional to x + 5.
    sizes[static_cast<std::size_t>(x)] = total * static_cast<std::size_t>(x + 5) /
                                         static_cast<std::size_t>(strata * (strata + 9) / 2);
    used += sizes[static_cast<std::size_t>(x)];
  }
  sizes.back() += total - used;
  for (std::size_t a = 0; a < 3; ++a) {
    f.truth[a].assumption_set = pocsel::kAllAssumptionSets[a];
    f.truth[a].lb = 0.0;
    f.truth[a].ub = 0.0;
  }
  for (int x = 0; x < strata; ++x) {
    const auto j = tame_joint(rng, random_share);
    f.joints.push_back(j);
    const std::size_t n = sizes[static_cast<std::size_t>(x)];
    const auto rec = pocsel::sample_records(j, n, rng, "s" + std::to_string(x));
    f.records.insert(f.records.end(), rec.begin(), rec.end());
    const double w = static_cast<double>(n) / static_cast<double>(total);
    const auto m = pocsel::observed_from_latent(j);
    for (std::size_t a = 0; a < 3; ++a) {
      const auto b = pocsel::compute_bounds(m, pocsel::kAllAssumptionSets[a]);
      f.truth[a].lb += w * b.lb;
      f.truth[a].ub += w * b.ub;
    }
  }
  return f;
}

}  // namespace testing

namespace testing {

// Every restriction holds with equality: only OO units with Y1* = Y0*, plus NN.
inline pocsel::LatentJoint null_boundary_joint() {
  pocsel::LatentJoint j;
  j.at(0, 0, 1, 1) = 0.3;
  j.at(1, 1, 1, 1) = 0.3;
  j.at(0, 0, 0, 0) = 0.4;
  return j;
}

// P[S1=1] - P[S0=1] = -gap through an observed-only-when-untreated stratum.
inline pocsel::LatentJoint selection_violation_joint(double gap) {
  pocsel::LatentJoint j;
  j.at(0, 0, 1, 1) = 0.3;
  j.at(1, 1, 1, 1) = 0.2;
  j.at(0, 0, 1, 0) = gap;
  j.at(0, 0, 0, 0) = 0.5 - gap;
  return j;
}

// P[Y=1|D=1] - P[Y=1|D=0] = -gap through (1,0) outcome cells, selection
// balanced.
inline pocsel::LatentJoint outcome_violation_joint(double gap) {
  pocsel::LatentJoint j;
  j.at(0, 0, 1, 1) = 0.3;
  j.at(1, 1, 1, 1) = 0.3 - gap;
  j.at(1, 0, 1, 1) = gap;
  j.at(0, 0, 0, 0) = 0.4;
  return j;
}

}  // namespace testing
