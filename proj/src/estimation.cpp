#include "pocsel/estimation.hpp"

#include "pocsel/bounds.hpp"
#include "pocsel/error.hpp"

namespace pocsel {

namespace {

double ratio(std::size_t k, std::size_t n) { return static_cast<double>(k) / static_cast<double>(n); }

}  // namespace

void ArmCounts::add(const MicroRecord& r) noexcept {
  if (r.d == 1) {
    ++n_d1;
    if (r.s == 1) {
      ++s1_d1;
      if (r.y.value_or(0) == 1) ++y1_s1_d1;
    }
  } else {
    ++n_d0;
    if (r.s == 1) {
      ++s1_d0;
      if (r.y.value_or(1) == 0) ++y0_s1_d0;
    }
  }
}

ArmCounts tally(const Dataset& data) {
  ArmCounts c;
  for (const auto& r : data.records()) c.add(r);
  return c;
}

ObservedMoments moments_from_counts(const ArmCounts& c) {
  if (c.n_d1 == 0) throw Error("estimation", "no units with D=1");
  if (c.n_d0 == 0) throw Error("estimation", "no units with D=0");
  if (c.s1_d1 == 0) throw Error("estimation", "no S=1 units with D=1");
  if (c.s1_d0 == 0) throw Error("estimation", "no S=1 units with D=0");
  if (c.y0_s1_d0 == 0) throw Error("estimation", "no Y=0 among S=1 units with D=0");
  ObservedMoments m;
  m.p_y1_s1d1 = ratio(c.y1_s1_d1, c.s1_d1);
  m.p_y0_s1d0 = ratio(c.y0_s1_d0, c.s1_d0);
  m.p_s1_d1 = ratio(c.s1_d1, c.n_d1);
  m.p_s1_d0 = ratio(c.s1_d0, c.n_d0);
  m.p_d1 = ratio(c.n_d1, c.total());
  return m;
}

ObservedMoments estimate_moments(const Dataset& data) { return moments_from_counts(tally(data)); }

StratifiedBounds stratified_from_counts(const std::vector<std::pair<std::string, ArmCounts>>& strata,
                                        AssumptionSet a) {
  StratifiedBounds out;
  for (const auto& [id, counts] : strata) {
    try {
      StratumEstimate est;
      est.moments = moments_from_counts(counts);
      est.bounds = compute_bounds(est.moments, a);
      est.n = counts.total();
      out.per_stratum.emplace(id, est);
      out.n_used += est.n;
    } catch (const Error& e) {
      out.dropped.emplace_back(id, e.what());
    }
  }
  if (out.per_stratum.empty()) {
    throw Error("estimation", "every stratum was dropped");
  }

  BoundsInterval agg;
  agg.assumption_set = a;
  agg.lb = 0.0;
  agg.ub = 0.0;
  for (auto& [id, est] : out.per_stratum) {
    est.weight = ratio(est.n, out.n_used);
    agg.lb += est.weight * est.bounds.lb;
    agg.ub += est.weight * est.bounds.ub;
    agg.restriction_violated = agg.restriction_violated || est.bounds.restriction_violated;
  }
  agg.lb_raw = agg.lb;
  agg.ub_raw = agg.ub;
  agg.crossed = agg.lb > agg.ub;
  out.aggregate = agg;
  return out;
}

std::vector<std::pair<std::string, ArmCounts>> tally_strata(const Dataset& data) {
  if (!data.fully_stratified()) {
    throw Error("estimation", "stratified estimation needs a stratum id on every record");
  }
  std::vector<std::pair<std::string, ArmCounts>> strata;
  strata.reserve(data.stratum_index().size());
  for (const auto& [id, positions] : data.stratum_index()) {
    ArmCounts counts;
    for (std::size_t p : positions) counts.add(data.records()[p]);
    strata.emplace_back(id, counts);
  }
  return strata;
}

StratifiedBounds estimate_stratified(const Dataset& data, AssumptionSet a) {
  return stratified_from_counts(tally_strata(data), a);
}

}  // namespace pocsel
