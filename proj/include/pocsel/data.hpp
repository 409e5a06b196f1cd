#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pocsel/latent.hpp"
#include "pocsel/random.hpp"

namespace pocsel {

/// One observed unit. The outcome is observed only for selected units, so
/// `y` is empty exactly when `s == 0`.
struct MicroRecord {
  int d = 0;
  int s = 0;
  std::optional<int> y;
  std::optional<std::string> stratum;

  bool operator==(const MicroRecord&) const = default;
};

/// Immutable collection of records with a stratum -> row-positions index.
class Dataset {
public:
  Dataset() = default;
  /// Validates every record; throws pocsel::Error on a record that breaks
  /// the observability rule or carries non-binary values.
  explicit Dataset(std::vector<MicroRecord> records);

  const std::vector<MicroRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }

  const std::map<std::string, std::vector<std::size_t>>& stratum_index() const noexcept {
    return stratum_index_;
  }
  bool has_strata() const noexcept { return !stratum_index_.empty(); }
  /// True when every record carries a stratum id.
  bool fully_stratified() const noexcept { return has_strata() && unstratified_ == 0; }

  /// Records of one stratum, in original order.
  Dataset subset(const std::vector<std::size_t>& positions) const;

private:
  std::vector<MicroRecord> records_;
  std::map<std::string, std::vector<std::size_t>> stratum_index_;
  std::size_t unstratified_ = 0;
};

/// n i.i.d. units from a latent joint: D ~ Bernoulli(p_d1), the latent cell
/// from `joint.pi`, then S = S_D and Y = Y*_D when selected.
std::vector<MicroRecord> sample_records(const LatentJoint& joint, std::size_t n, Rng& rng,
                                        const std::optional<std::string>& stratum = std::nullopt);

}  // namespace pocsel
