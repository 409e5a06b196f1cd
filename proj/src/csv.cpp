#include "pocsel/csv.hpp"

#include <fstream>
#include <string_view>
#include <vector>

#include "pocsel/error.hpp"

namespace pocsel {

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::size_t find_column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ConfigError("column '" + name + "' not found in header");
}

std::optional<int> parse_binary(std::string_view token, const std::string& column, std::size_t row) {
  if (token.empty()) return std::nullopt;
  if (token == "0") return 0;
  if (token == "1") return 1;
  throw ParseError("non-binary value '" + std::string(token) + "' in column " + column + " at row " +
                   std::to_string(row));
}

}  // namespace

Dataset parse_csv(std::istream& in, const ColumnMapping& mapping) {
  std::vector<std::string> roles{mapping.y, mapping.s, mapping.d};
  if (mapping.stratum) roles.push_back(*mapping.stratum);
  for (std::size_t i = 0; i < roles.size(); ++i) {
    for (std::size_t j = i + 1; j < roles.size(); ++j) {
      if (roles[i] == roles[j]) throw ConfigError("column '" + roles[i] + "' mapped more than once");
    }
  }

  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing header row");
  if (line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header;
  for (auto f : split(line)) header.emplace_back(f);

  const std::size_t iy = find_column(header, mapping.y);
  const std::size_t is = find_column(header, mapping.s);
  const std::size_t id = find_column(header, mapping.d);
  const std::optional<std::size_t> ix =
      mapping.stratum ? std::optional(find_column(header, *mapping.stratum)) : std::nullopt;

  std::vector<MicroRecord> records;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      throw ParseError("row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                       " fields, header has " + std::to_string(header.size()));
    }
    const auto d = parse_binary(fields[id], mapping.d, row);
    const auto s = parse_binary(fields[is], mapping.s, row);
    const auto y = parse_binary(fields[iy], mapping.y, row);
    if (!d) throw ParseError("missing value in column " + mapping.d + " at row " + std::to_string(row));
    if (!s) throw ParseError("missing value in column " + mapping.s + " at row " + std::to_string(row));
    MicroRecord r;
    r.d = *d;
    r.s = *s;
    if (r.s == 1) {
      if (!y) throw ParseError("missing y for a selected unit at row " + std::to_string(row));
      r.y = y;
    } else if (y == 1) {
      throw ParseError("y=1 on an unselected unit at row " + std::to_string(row));
    }
    if (ix) r.stratum = std::string(fields[*ix]);
    records.push_back(std::move(r));
  }
  if (records.empty()) throw ParseError("no data rows");
  return Dataset(std::move(records));
}

Dataset load_csv(const std::string& path, const ColumnMapping& mapping) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cli_io", "cannot read " + path);
  return parse_csv(in, mapping);
}

}  // namespace pocsel
