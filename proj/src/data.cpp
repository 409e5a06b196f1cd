#include "pocsel/data.hpp"

#include "pocsel/error.hpp"

namespace pocsel {

Dataset::Dataset(std::vector<MicroRecord> records) : records_(std::move(records)) {
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const MicroRecord& r = records_[i];
    const std::string where = " (record " + std::to_string(i) + ")";
    if ((r.d != 0 && r.d != 1) || (r.s != 0 && r.s != 1)) {
      throw Error("estimation", "d and s must be binary" + where);
    }
    if (r.s == 0 && r.y.has_value()) {
      throw Error("estimation", "outcome observed for an unselected unit" + where);
    }
    if (r.s == 1 && !r.y.has_value()) {
      throw Error("estimation", "selected unit with missing outcome" + where);
    }
    if (r.y && *r.y != 0 && *r.y != 1) {
      throw Error("estimation", "y must be binary" + where);
    }
    if (r.stratum) {
      stratum_index_[*r.stratum].push_back(i);
    } else {
      ++unstratified_;
    }
  }
}

Dataset Dataset::subset(const std::vector<std::size_t>& positions) const {
  std::vector<MicroRecord> out;
  out.reserve(positions.size());
  for (std::size_t p : positions) out.push_back(records_.at(p));
  return Dataset(std::move(out));
}

std::vector<MicroRecord> sample_records(const LatentJoint& joint, std::size_t n, Rng& rng,
                                        const std::optional<std::string>& stratum) {
  std::array<double, 16> cdf{};
  double acc = 0.0;
  for (std::size_t i = 0; i < 16; ++i) {
    acc += joint.pi[i];
    cdf[i] = acc;
  }
  std::vector<MicroRecord> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const int d = bernoulli(rng, joint.p_d1) ? 1 : 0;
    const double u = uniform01(rng) * acc;
    std::size_t idx = 0;
    while (idx < 15 && u >= cdf[idx]) ++idx;
    const Cell c = cell_at(idx);
    MicroRecord r;
    r.d = d;
    r.s = d == 1 ? c.s1 : c.s0;
    if (r.s == 1) r.y = d == 1 ? c.y1 : c.y0;
    r.stratum = stratum;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace pocsel
