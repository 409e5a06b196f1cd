#pragma once

#include <istream>
#include <optional>
#include <string>

#include "pocsel/data.hpp"

namespace pocsel {

struct ColumnMapping {
  std::string y = "y";
  std::string s = "s";
  std::string d = "d";
  std::optional<std::string> stratum;

  bool operator==(const ColumnMapping&) const = default;
};

/// Comma-separated, header row required, no quoting. An empty y field is a
/// missing outcome and is allowed only when s = 0; a y of 0 on an unselected
/// row is read as missing too since Y = Y* S. Row numbers in errors count
/// data rows from 1.
///
/// Throws ConfigError for a duplicate or absent column and ParseError for a
/// malformed row.
Dataset parse_csv(std::istream& in, const ColumnMapping& mapping);

Dataset load_csv(const std::string& path, const ColumnMapping& mapping);

}  // namespace pocsel
