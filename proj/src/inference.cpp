#include "pocsel/inference.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "pocsel/bounds.hpp"
#include "pocsel/error.hpp"
#include "pocsel/estimation.hpp"
#include "pocsel/random.hpp"

namespace pocsel {

namespace {

// d*4 + s*2 + y, the only part of a record the counts depend on.
std::uint8_t encode(const MicroRecord& r) {
  return static_cast<std::uint8_t>(r.d * 4 + r.s * 2 + r.y.value_or(0));
}

void add_code(ArmCounts& c, std::uint8_t code) {
  switch (code) {
    case 0: ++c.n_d0; break;
    case 2: ++c.n_d0; ++c.s1_d0; ++c.y0_s1_d0; break;
    case 3: ++c.n_d0; ++c.s1_d0; break;
    case 4: ++c.n_d1; break;
    case 6: ++c.n_d1; ++c.s1_d1; break;
    case 7: ++c.n_d1; ++c.s1_d1; ++c.y1_s1_d1; break;
    default: break;
  }
}

struct Layout {
  std::vector<std::string> ids;
  std::vector<std::vector<std::uint8_t>> groups;
};

Layout make_layout(const Dataset& data, bool stratified) {
  Layout out;
  if (!stratified) {
    out.ids.emplace_back();
    auto& g = out.groups.emplace_back();
    g.reserve(data.size());
    for (const auto& r : data.records()) g.push_back(encode(r));
    return out;
  }
  if (!data.fully_stratified()) {
    throw Error("inference", "stratified bootstrap needs a stratum id on every record");
  }
  for (const auto& [id, positions] : data.stratum_index()) {
    out.ids.push_back(id);
    auto& g = out.groups.emplace_back();
    g.reserve(positions.size());
    for (std::size_t p : positions) g.push_back(encode(data.records()[p]));
  }
  return out;
}

// Throws pocsel::Error when the resample cannot be estimated.
std::vector<BoundsInterval> bounds_for(const Layout& layout, std::span<const ArmCounts> counts,
                                       std::span<const AssumptionSet> sets, bool stratified) {
  std::vector<BoundsInterval> out;
  out.reserve(sets.size());
  if (!stratified) {
    ArmCounts pooled;
    for (const ArmCounts& c : counts) {
      pooled.n_d1 += c.n_d1;
      pooled.n_d0 += c.n_d0;
      pooled.s1_d1 += c.s1_d1;
      pooled.s1_d0 += c.s1_d0;
      pooled.y1_s1_d1 += c.y1_s1_d1;
      pooled.y0_s1_d0 += c.y0_s1_d0;
    }
    const ObservedMoments m = moments_from_counts(pooled);
    for (AssumptionSet a : sets) out.push_back(compute_bounds(m, a));
    return out;
  }
  std::vector<std::pair<std::string, ArmCounts>> strata;
  strata.reserve(counts.size());
  for (std::size_t g = 0; g < counts.size(); ++g) strata.emplace_back(layout.ids[g], counts[g]);
  for (AssumptionSet a : sets) out.push_back(stratified_from_counts(strata, a).aggregate);
  return out;
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

ProportionTest one_sided_proportion_test(std::size_t k1, std::size_t n1, std::size_t k0,
                                         std::size_t n0) {
  if (n1 == 0) throw Error("inference", "no units with D=1");
  if (n0 == 0) throw Error("inference", "no units with D=0");
  const double p1 = static_cast<double>(k1) / static_cast<double>(n1);
  const double p0 = static_cast<double>(k0) / static_cast<double>(n0);
  ProportionTest t;
  t.diff = p1 - p0;
  const double var = p1 * (1.0 - p1) / static_cast<double>(n1) + p0 * (1.0 - p0) / static_cast<double>(n0);
  if (!(var > 0.0)) {
    t.degenerate = true;
    t.stat = 0.0;
    t.p_value = t.diff >= 0.0 ? 1.0 : 0.0;
    return t;
  }
  t.stat = t.diff / std::sqrt(var);
  t.p_value = normal_cdf(t.stat);
  return t;
}

RestrictionTestResult test_restrictions(const Dataset& data, AssumptionSet a) {
  const ArmCounts c = tally(data);
  RestrictionTestResult out;
  out.assumption_set = a;
  out.selection_test = one_sided_proportion_test(c.s1_d1, c.n_d1, c.s1_d0, c.n_d0);
  if (a != AssumptionSet::A1_3) {
    out.outcome_test = one_sided_proportion_test(c.y1_s1_d1, c.n_d1, c.s1_d0 - c.y0_s1_d0, c.n_d0);
  }
  return out;
}

double quantile_sorted(std::span<const double> sorted, double prob) {
  if (sorted.empty()) throw Error("inference", "quantile of an empty sample");
  const double h = static_cast<double>(sorted.size() - 1) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<BootstrapResult> bootstrap_bounds(const Dataset& data, std::span<const AssumptionSet> sets,
                                              const BootstrapOptions& opt) {
  if (opt.reps < 2) throw Error("inference", "reps must be at least 2");
  if (!(opt.level > 0.0 && opt.level < 1.0)) throw Error("inference", "level must lie in (0,1)");
  if (sets.empty()) throw Error("inference", "no assumption set requested");

  const Layout layout = make_layout(data, opt.stratified);
  std::vector<ArmCounts> full(layout.groups.size());
  for (std::size_t g = 0; g < layout.groups.size(); ++g) {
    for (std::uint8_t code : layout.groups[g]) add_code(full[g], code);
  }
  const std::vector<BoundsInterval> point = bounds_for(layout, full, sets, opt.stratified && !opt.pool_strata);

  const std::size_t k = sets.size();
  std::vector<double> lbs(opt.reps * k), ubs(opt.reps * k);
  std::vector<char> ok(opt.reps, 0);

  auto run = [&](std::size_t first, std::size_t stride) {
    std::vector<ArmCounts> counts(layout.groups.size());
    for (std::size_t r = first; r < opt.reps; r += stride) {
      Rng rng = make_substream(opt.seed, r);
      for (std::size_t g = 0; g < layout.groups.size(); ++g) {
        const auto& group = layout.groups[g];
        counts[g] = ArmCounts{};
        for (std::size_t i = 0; i < group.size(); ++i) add_code(counts[g], group[uniform_index(rng, group.size())]);
      }
      try {
        const auto b = bounds_for(layout, counts, sets, opt.stratified && !opt.pool_strata);
        for (std::size_t j = 0; j < k; ++j) {
          lbs[j * opt.reps + r] = b[j].lb;
          ubs[j * opt.reps + r] = b[j].ub;
        }
        ok[r] = 1;
      } catch (const Error&) {
        ok[r] = 0;
      }
    }
  };

  unsigned threads = opt.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opt.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, opt.reps));
  if (threads <= 1) {
    run(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(run, t, threads);
    for (auto& th : pool) th.join();
  }

  const auto failed = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 0));
  if (2 * failed > opt.reps) throw Error("inference", "bootstrap unstable: data too sparse");

  const double lo_p = (1.0 - opt.level) / 2.0;
  const double hi_p = (1.0 + opt.level) / 2.0;
  std::vector<BootstrapResult> out;
  out.reserve(k);
  std::vector<double> lb_sample, ub_sample;
  for (std::size_t j = 0; j < k; ++j) {
    lb_sample.clear();
    ub_sample.clear();
    for (std::size_t r = 0; r < opt.reps; ++r) {
      if (!ok[r]) continue;
      lb_sample.push_back(lbs[j * opt.reps + r]);
      ub_sample.push_back(ubs[j * opt.reps + r]);
    }
    std::sort(lb_sample.begin(), lb_sample.end());
    std::sort(ub_sample.begin(), ub_sample.end());
    BootstrapResult res;
    res.ci_lb = {clamp01(quantile_sorted(lb_sample, lo_p)), clamp01(quantile_sorted(lb_sample, hi_p))};
    res.ci_ub = {clamp01(quantile_sorted(ub_sample, lo_p)), clamp01(quantile_sorted(ub_sample, hi_p))};
    res.point = point[j];
    res.replications = opt.reps;
    res.level = opt.level;
    res.seed = opt.seed;
    res.failed_replicates = failed;
    out.push_back(res);
  }
  return out;
}

BootstrapResult bootstrap_bounds(const Dataset& data, AssumptionSet a, const BootstrapOptions& opt) {
  const std::array<AssumptionSet, 1> one{a};
  return bootstrap_bounds(data, one, opt).front();
}

}  // namespace pocsel
