#include "pocsel/report.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "pocsel/bounds.hpp"
#include "pocsel/error.hpp"
#include "pocsel/estimation.hpp"

#ifndef POCSEL_VERSION
#define POCSEL_VERSION "0.0.0"
#endif

namespace pocsel {

using json = nlohmann::ordered_json;

namespace {

constexpr double kWarnAlpha = 0.05;
constexpr const char* kTestDirection =
    "H0: treated minus control >= 0; stat = diff / unpooled se; p = Phi(stat)";

std::string fmt(const char* pattern, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

json moments_json(const ObservedMoments& m) {
  return {{"p_y1_s1d1", m.p_y1_s1d1}, {"p_y0_s1d0", m.p_y0_s1d0}, {"p_s1_d1", m.p_s1_d1},
          {"p_s1_d0", m.p_s1_d0}, {"p_d1", m.p_d1}};
}

ObservedMoments moments_from(const json& j) {
  ObservedMoments m;
  m.p_y1_s1d1 = j.at("p_y1_s1d1").get<double>();
  m.p_y0_s1d0 = j.at("p_y0_s1d0").get<double>();
  m.p_s1_d1 = j.at("p_s1_d1").get<double>();
  m.p_s1_d0 = j.at("p_s1_d0").get<double>();
  m.p_d1 = j.at("p_d1").get<double>();
  return m;
}

AssumptionSet set_from(const json& j) {
  const auto text = j.get<std::string>();
  const auto a = parse_assumption_set(text);
  if (!a) throw ParseError("unknown assumption set '" + text + "' in report");
  return *a;
}

json bounds_json(const BoundsInterval& b) {
  return {{"assumption_set", std::string(to_string(b.assumption_set))},
          {"lb", b.lb},
          {"ub", b.ub},
          {"lb_raw", b.lb_raw},
          {"ub_raw", b.ub_raw},
          {"lb_clipped", b.lb_clipped},
          {"ub_clipped", b.ub_clipped},
          {"restriction_violated", b.restriction_violated},
          {"crossed", b.crossed}};
}

BoundsInterval bounds_from(const json& j) {
  BoundsInterval b;
  b.assumption_set = set_from(j.at("assumption_set"));
  b.lb = j.at("lb").get<double>();
  b.ub = j.at("ub").get<double>();
  b.lb_raw = j.at("lb_raw").get<double>();
  b.ub_raw = j.at("ub_raw").get<double>();
  b.lb_clipped = j.at("lb_clipped").get<bool>();
  b.ub_clipped = j.at("ub_clipped").get<bool>();
  b.restriction_violated = j.at("restriction_violated").get<bool>();
  b.crossed = j.at("crossed").get<bool>();
  return b;
}

json interval_json(const Interval& i) { return json::array({i.lower, i.upper}); }

Interval interval_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json optional_interval_json(const std::optional<Interval>& i) { return i ? interval_json(*i) : json(nullptr); }

std::optional<Interval> optional_interval_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return interval_from(j);
}

json test_json(const ProportionTest& t) {
  return {{"diff", t.diff}, {"stat", t.stat}, {"p_value", t.p_value}, {"degenerate", t.degenerate}};
}

ProportionTest test_from(const json& j) {
  ProportionTest t;
  t.diff = j.at("diff").get<double>();
  t.stat = j.at("stat").get<double>();
  t.p_value = j.at("p_value").get<double>();
  t.degenerate = j.at("degenerate").get<bool>();
  return t;
}

json columns_json(const ColumnMapping& c) {
  return {{"y", c.y}, {"s", c.s}, {"d", c.d}, {"stratum", c.stratum ? json(*c.stratum) : json(nullptr)}};
}

ColumnMapping columns_from(const json& j) {
  ColumnMapping c;
  c.y = j.at("y").get<std::string>();
  c.s = j.at("s").get<std::string>();
  c.d = j.at("d").get<std::string>();
  if (!j.at("stratum").is_null()) c.stratum = j.at("stratum").get<std::string>();
  return c;
}

std::string number(double x) { return json(x).dump(); }

}  // namespace

std::string_view tool_version() noexcept { return POCSEL_VERSION; }

void RunConfig::validate() const {
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("level must lie in (0,1)");
  if (reps < 2) throw ConfigError("reps must be at least 2");
  if (assumption_sets.empty()) throw ConfigError("no assumption set requested");
  for (std::size_t i = 0; i < assumption_sets.size(); ++i) {
    for (std::size_t j = i + 1; j < assumption_sets.size(); ++j) {
      if (assumption_sets[i] == assumption_sets[j]) {
        throw ConfigError("assumption set " + std::string(to_string(assumption_sets[i])) + " requested twice");
      }
    }
  }
  if (use_strata() && !columns.stratum) throw ConfigError("stratified run needs a stratum column");
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("cli_io", "sha256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

Report analyze(const Dataset& data, const RunConfig& cfg, std::string input_digest) {
  cfg.validate();
  const bool strata = cfg.use_strata();

  Report rep;
  rep.n = data.size();
  rep.moments = estimate_moments(data);
  rep.assumption_sets = cfg.assumption_sets;
  std::sort(rep.assumption_sets.begin(), rep.assumption_sets.end());

  BootstrapOptions opt;
  opt.reps = cfg.reps;
  opt.level = cfg.level;
  opt.seed = cfg.seed;
  opt.stratified = strata;
  opt.threads = cfg.threads;

  BootstrapOptions pooled = opt;
  pooled.pool_strata = true;
  const auto boot = bootstrap_bounds(data, rep.assumption_sets, pooled);
  for (std::size_t j = 0; j < rep.assumption_sets.size(); ++j) {
    const AssumptionSet a = rep.assumption_sets[j];
    SetResult r;
    r.bounds = compute_bounds(rep.moments, a);
    r.ci_lb = boot[j].ci_lb;
    r.ci_ub = boot[j].ci_ub;
    r.failed_replicates = boot[j].failed_replicates;
    r.tests = test_restrictions(data, a);
    rep.unconditional.push_back(r);

    const std::string tag = std::string(to_string(a)) + ": ";
    if (r.bounds.restriction_violated) rep.warnings.push_back(tag + "restriction violated in sample");
    if (r.bounds.crossed) rep.warnings.push_back(tag + "bounds crossed (lb > ub)");
    if (r.tests.selection_test.p_value < kWarnAlpha) {
      rep.warnings.push_back(tag + "selection restriction rejected at 5% (p = " +
                             fmt("%.4g", r.tests.selection_test.p_value) + ")");
    }
    if (r.tests.outcome_test && r.tests.outcome_test->p_value < kWarnAlpha) {
      rep.warnings.push_back(tag + "outcome restriction rejected at 5% (p = " +
                             fmt("%.4g", r.tests.outcome_test->p_value) + ")");
    }
  }

  if (strata) {
    const auto counts = tally_strata(data);
    const auto agg_boot = bootstrap_bounds(data, rep.assumption_sets, opt);

    std::map<std::string, std::vector<BootstrapResult>> per_stratum_boot;
    BootstrapOptions one = opt;
    one.stratified = false;
    for (const auto& [id, positions] : data.stratum_index()) {
      try {
        per_stratum_boot.emplace(id, bootstrap_bounds(data.subset(positions), rep.assumption_sets, one));
      } catch (const Error&) {
      }
    }

    for (std::size_t j = 0; j < rep.assumption_sets.size(); ++j) {
      const AssumptionSet a = rep.assumption_sets[j];
      const StratifiedBounds sb = stratified_from_counts(counts, a);
      StratifiedSection sec;
      sec.aggregate = sb.aggregate;
      sec.ci_lb = agg_boot[j].ci_lb;
      sec.ci_ub = agg_boot[j].ci_ub;
      sec.failed_replicates = agg_boot[j].failed_replicates;
      sec.dropped = sb.dropped;
      for (const auto& [id, est] : sb.per_stratum) {
        StratumRow row;
        row.stratum = id;
        row.moments = est.moments;
        row.bounds = est.bounds;
        row.weight = est.weight;
        row.n = est.n;
        if (auto it = per_stratum_boot.find(id); it != per_stratum_boot.end()) {
          row.ci_lb = it->second[j].ci_lb;
          row.ci_ub = it->second[j].ci_ub;
        }
        sec.rows.push_back(std::move(row));
      }
      rep.stratified.push_back(std::move(sec));
    }
    for (const auto& [id, reason] : rep.stratified.front().dropped) {
      rep.warnings.push_back("stratum '" + id + "' dropped: " + reason);
    }
  }

  rep.provenance.tool_version = std::string(tool_version());
  rep.provenance.input_digest = std::move(input_digest);
  rep.provenance.seed = cfg.seed;
  rep.provenance.reps = cfg.reps;
  rep.provenance.level = cfg.level;
  rep.provenance.stratified = strata;
  rep.provenance.columns = cfg.columns;
  return rep;
}

Report run_analysis(const RunConfig& cfg) {
  cfg.validate();
  std::ifstream in(cfg.input_path, std::ios::binary);
  if (!in) throw Error("cli_io", "cannot read " + cfg.input_path);
  const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::istringstream stream(bytes);
  const Dataset data = parse_csv(stream, cfg.columns);
  return analyze(data, cfg, sha256_hex(bytes));
}

std::string to_json(const Report& r) {
  json j;
  j["schema_version"] = r.schema_version;
  j["n"] = r.n;
  j["moments"] = moments_json(r.moments);
  j["assumption_sets"] = json::array();
  for (AssumptionSet a : r.assumption_sets) j["assumption_sets"].push_back(std::string(to_string(a)));
  j["unconditional"] = json::array();
  for (const auto& s : r.unconditional) {
    json t = {{"direction", kTestDirection}, {"selection", test_json(s.tests.selection_test)},
              {"outcome", s.tests.outcome_test ? test_json(*s.tests.outcome_test) : json(nullptr)}};
    j["unconditional"].push_back({{"bounds", bounds_json(s.bounds)},
                                  {"ci_lb", interval_json(s.ci_lb)},
                                  {"ci_ub", interval_json(s.ci_ub)},
                                  {"failed_replicates", s.failed_replicates},
                                  {"tests", t}});
  }
  j["stratified"] = json::array();
  for (const auto& sec : r.stratified) {
    json rows = json::array();
    for (const auto& row : sec.rows) {
      rows.push_back({{"stratum", row.stratum},
                      {"n", row.n},
                      {"weight", row.weight},
                      {"moments", moments_json(row.moments)},
                      {"bounds", bounds_json(row.bounds)},
                      {"ci_lb", optional_interval_json(row.ci_lb)},
                      {"ci_ub", optional_interval_json(row.ci_ub)}});
    }
    json dropped = json::array();
    for (const auto& [id, reason] : sec.dropped) dropped.push_back({{"stratum", id}, {"reason", reason}});
    j["stratified"].push_back({{"aggregate", bounds_json(sec.aggregate)},
                               {"ci_lb", interval_json(sec.ci_lb)},
                               {"ci_ub", interval_json(sec.ci_ub)},
                               {"failed_replicates", sec.failed_replicates},
                               {"strata", rows},
                               {"dropped", dropped}});
  }
  j["warnings"] = r.warnings;
  const auto& p = r.provenance;
  j["provenance"] = {{"tool_version", p.tool_version}, {"input_sha256", p.input_digest},
                     {"seed", p.seed},                 {"reps", p.reps},
                     {"level", p.level},               {"stratified", p.stratified},
                     {"columns", columns_json(p.columns)}};
  return j.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid report JSON: ") + e.what());
  }
  try {
    Report r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kSchemaVersion) {
      throw ParseError("unsupported schema_version " + std::to_string(r.schema_version));
    }
    r.n = j.at("n").get<std::size_t>();
    r.moments = moments_from(j.at("moments"));
    for (const auto& a : j.at("assumption_sets")) r.assumption_sets.push_back(set_from(a));
    for (const auto& s : j.at("unconditional")) {
      SetResult out;
      out.bounds = bounds_from(s.at("bounds"));
      out.ci_lb = interval_from(s.at("ci_lb"));
      out.ci_ub = interval_from(s.at("ci_ub"));
      out.failed_replicates = s.at("failed_replicates").get<std::size_t>();
      const auto& t = s.at("tests");
      out.tests.assumption_set = out.bounds.assumption_set;
      out.tests.selection_test = test_from(t.at("selection"));
      if (!t.at("outcome").is_null()) out.tests.outcome_test = test_from(t.at("outcome"));
      r.unconditional.push_back(out);
    }
    for (const auto& s : j.at("stratified")) {
      StratifiedSection sec;
      sec.aggregate = bounds_from(s.at("aggregate"));
      sec.ci_lb = interval_from(s.at("ci_lb"));
      sec.ci_ub = interval_from(s.at("ci_ub"));
      sec.failed_replicates = s.at("failed_replicates").get<std::size_t>();
      for (const auto& row : s.at("strata")) {
        StratumRow out;
        out.stratum = row.at("stratum").get<std::string>();
        out.n = row.at("n").get<std::size_t>();
        out.weight = row.at("weight").get<double>();
        out.moments = moments_from(row.at("moments"));
        out.bounds = bounds_from(row.at("bounds"));
        out.ci_lb = optional_interval_from(row.at("ci_lb"));
        out.ci_ub = optional_interval_from(row.at("ci_ub"));
        sec.rows.push_back(std::move(out));
      }
      for (const auto& d : s.at("dropped")) {
        sec.dropped.emplace_back(d.at("stratum").get<std::string>(), d.at("reason").get<std::string>());
      }
      r.stratified.push_back(std::move(sec));
    }
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    const auto& p = j.at("provenance");
    r.provenance.tool_version = p.at("tool_version").get<std::string>();
    r.provenance.input_digest = p.at("input_sha256").get<std::string>();
    r.provenance.seed = p.at("seed").get<std::uint64_t>();
    r.provenance.reps = p.at("reps").get<std::size_t>();
    r.provenance.level = p.at("level").get<double>();
    r.provenance.stratified = p.at("stratified").get<bool>();
    r.provenance.columns = columns_from(p.at("columns"));
    if (r.unconditional.size() != r.assumption_sets.size() ||
        (!r.stratified.empty() && r.stratified.size() != r.assumption_sets.size())) {
      throw ParseError("report sections do not match assumption_sets");
    }
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  }
}

std::string to_text(const Report& r) {
  std::ostringstream out;
  auto ci = [](const Interval& i) { return fmt("[%.3f, ", i.lower) + fmt("%.3f]", i.upper); };
  out << "pocsel " << r.provenance.tool_version << "  n=" << r.n << "  seed=" << r.provenance.seed
      << "  reps=" << r.provenance.reps << "  level=" << fmt("%.2f", r.provenance.level) << "\n";
  out << "input sha256 " << r.provenance.input_digest << "\n\n";

  auto table = [&](const char* title, auto&& get_bounds, auto&& get_lb_ci, auto&& get_ub_ci, std::size_t count) {
    auto col = [](const std::string& v) { return std::string(v.size() < 18 ? 18 - v.size() : 1, ' ') + v; };
    out << title << "\n        ";
    for (std::size_t j = 0; j < count; ++j) out << col(std::string(to_string(r.assumption_sets[j])));
    out << "\n  LB    ";
    for (std::size_t j = 0; j < count; ++j) out << col(fmt("%.3f", get_bounds(j).lb));
    out << "\n  UB    ";
    for (std::size_t j = 0; j < count; ++j) out << col(fmt("%.3f", get_bounds(j).ub));
    out << "\n  IC_LB ";
    for (std::size_t j = 0; j < count; ++j) out << col(ci(get_lb_ci(j)));
    out << "\n  IC_UB ";
    for (std::size_t j = 0; j < count; ++j) out << col(ci(get_ub_ci(j)));
    out << "\n\n";
  };

  const std::size_t k = r.assumption_sets.size();
  table("Unconditional", [&](std::size_t j) { return r.unconditional[j].bounds; },
        [&](std::size_t j) { return r.unconditional[j].ci_lb; }, [&](std::size_t j) { return r.unconditional[j].ci_ub; }, k);
  if (!r.stratified.empty()) {
    table("Stratified (summary measure)", [&](std::size_t j) { return r.stratified[j].aggregate; },
          [&](std::size_t j) { return r.stratified[j].ci_lb; }, [&](std::size_t j) { return r.stratified[j].ci_ub; }, k);
    out << "Per stratum\n";
    for (std::size_t j = 0; j < k; ++j) {
      out << "  " << to_string(r.assumption_sets[j]) << "\n";
      for (const auto& row : r.stratified[j].rows) {
        out << "    " << row.stratum << "  n=" << row.n << "  w=" << fmt("%.4f", row.weight)
            << "  LB=" << fmt("%.3f", row.bounds.lb) << "  UB=" << fmt("%.3f", row.bounds.ub);
        if (row.ci_lb && row.ci_ub) out << "  IC_LB=" << ci(*row.ci_lb) << "  IC_UB=" << ci(*row.ci_ub);
        out << "\n";
      }
    }
    out << "\n";
  }

  out << "Restriction tests (" << kTestDirection << ")\n";
  for (const auto& s : r.unconditional) {
    out << "  " << to_string(s.bounds.assumption_set) << "  selection diff=" << fmt("%.4f", s.tests.selection_test.diff)
        << " z=" << fmt("%.3f", s.tests.selection_test.stat) << " p=" << fmt("%.4f", s.tests.selection_test.p_value);
    if (s.tests.outcome_test) {
      out << "  outcome diff=" << fmt("%.4f", s.tests.outcome_test->diff) << " z=" << fmt("%.3f", s.tests.outcome_test->stat)
          << " p=" << fmt("%.4f", s.tests.outcome_test->p_value);
    }
    out << "\n";
  }
  for (const auto& w : r.warnings) out << "warning: " << w << "\n";
  return out.str();
}

namespace {

struct Bar {
  std::string group;
  AssumptionSet set;
  double lb;
  double ub;
};

std::vector<Bar> bars_of(const Report& r) {
  std::vector<Bar> bars;
  for (std::size_t j = 0; j < r.assumption_sets.size(); ++j) {
    bars.push_back({"unconditional", r.assumption_sets[j], r.unconditional[j].bounds.lb, r.unconditional[j].bounds.ub});
  }
  for (std::size_t j = 0; j < r.stratified.size(); ++j) {
    bars.push_back({"stratified", r.assumption_sets[j], r.stratified[j].aggregate.lb, r.stratified[j].aggregate.ub});
  }
  return bars;
}

const char* set_color(AssumptionSet a) {
  switch (a) {
    case AssumptionSet::A1_3: return "#4c72b0";
    case AssumptionSet::A1_4: return "#dd8452";
    case AssumptionSet::A1_5: return "#55a868";
  }
  return "#888888";
}

}  // namespace

std::string plot_json(const Report& r) {
  json groups = json::array();
  std::string current;
  for (const auto& b : bars_of(r)) {
    if (groups.empty() || current != b.group) {
      groups.push_back({{"group", b.group}, {"bars", json::array()}});
      current = b.group;
    }
    groups.back()["bars"].push_back({{"assumption_set", std::string(to_string(b.set))}, {"lb", b.lb}, {"ub", b.ub}});
  }
  return json{{"schema_version", kSchemaVersion}, {"groups", groups}}.dump(2) + "\n";
}

std::string render_svg(const Report& r) {
  if (r.assumption_sets.empty()) throw Error("cli_io", "report has no assumption set to plot");
  const auto bars = bars_of(r);
  const double bar_w = 22.0, pair_gap = 14.0, group_gap = 48.0;
  const double left = 56.0, top = 40.0, plot_h = 300.0, bottom = 70.0;
  const std::size_t groups = r.stratified.empty() ? 1 : 2;
  const std::size_t k = r.assumption_sets.size();
  const double group_w = static_cast<double>(k) * (2.0 * bar_w + pair_gap);
  const double width = left + static_cast<double>(groups) * group_w + static_cast<double>(groups) * group_gap + 140.0;
  const double height = top + plot_h + bottom;
  auto y_of = [&](double v) { return top + plot_h * (1.0 - std::clamp(v, 0.0, 1.0)); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" viewBox=\"0 0 " << width << " " << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s << "<title>Bounds on the probability of causation</title>\n";
  s << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  for (int t = 0; t <= 10; ++t) {
    const double v = t / 10.0;
    const double y = y_of(v);
    s << "<line x1=\"" << left << "\" x2=\"" << width - 140.0 << "\" y1=\"" << y << "\" y2=\"" << y
      << "\" stroke=\"#dddddd\"/>\n";
    s << "<text x=\"" << left - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">" << fmt("%.1f", v) << "</text>\n";
  }
  s << "<line x1=\"" << left << "\" x2=\"" << left << "\" y1=\"" << top << "\" y2=\"" << top + plot_h
    << "\" stroke=\"black\"/>\n";

  for (std::size_t g = 0; g < groups; ++g) {
    const double gx = left + group_gap / 2.0 + static_cast<double>(g) * (group_w + group_gap);
    const char* name = g == 0 ? "unconditional" : "stratified";
    s << "<g class=\"group\" data-group=\"" << name << "\">\n";
    for (std::size_t j = 0; j < k; ++j) {
      const Bar& b = bars[g * k + j];
      const double x = gx + static_cast<double>(j) * (2.0 * bar_w + pair_gap);
      const char* color = set_color(b.set);
      const std::string set(to_string(b.set));
      for (int e = 0; e < 2; ++e) {
        const double v = e == 0 ? b.lb : b.ub;
        const double bx = x + e * bar_w;
        const double y = y_of(v);
        s << "<rect class=\"bar\" data-group=\"" << name << "\" data-set=\"" << set << "\" data-endpoint=\""
          << (e == 0 ? "lb" : "ub") << "\" data-value=\"" << number(v) << "\" x=\"" << bx << "\" y=\"" << y
          << "\" width=\"" << bar_w - 2 << "\" height=\"" << top + plot_h - y << "\" fill=\"" << color
          << "\" fill-opacity=\"" << (e == 0 ? "0.55" : "1") << "\"/>\n";
        s << "<text x=\"" << bx + (bar_w - 2) / 2 << "\" y=\"" << y - 4 << "\" text-anchor=\"middle\">"
          << fmt("%.3f", v) << "</text>\n";
      }
    }
    s << "<text x=\"" << gx + group_w / 2 << "\" y=\"" << top + plot_h + 22 << "\" text-anchor=\"middle\">"
      << (g == 0 ? "Unconditional" : "Stratified") << "</text>\n";
    s << "</g>\n";
  }

  const double lx = width - 120.0;
  s << "<g class=\"legend\">\n";
  for (std::size_t j = 0; j < k; ++j) {
    const double y = top + 10 + 20.0 * static_cast<double>(j);
    const std::string set(to_string(r.assumption_sets[j]));
    s << "<rect class=\"legend-key\" data-set=\"" << set << "\" x=\"" << lx << "\" y=\"" << y - 9
      << "\" width=\"12\" height=\"12\" fill=\"" << set_color(r.assumption_sets[j]) << "\"/>\n";
    s << "<text x=\"" << lx + 18 << "\" y=\"" << y + 1 << "\">" << set << "</text>\n";
  }
  s << "<text x=\"" << lx << "\" y=\"" << top + 20.0 * static_cast<double>(k) + 14 << "\">light: LB, dark: UB</text>\n";
  s << "</g>\n</svg>\n";
  return s.str();
}

std::string plot_sidecar_path(const std::string& svg_path) {
  const std::string ext = ".svg";
  if (svg_path.size() > ext.size() && svg_path.ends_with(ext)) {
    return svg_path.substr(0, svg_path.size() - ext.size()) + ".plot.json";
  }
  return svg_path + ".plot.json";
}

void emit_plot_data(const Report& report, const std::string& svg_path) {
  const std::string svg = render_svg(report);
  const std::string side = plot_json(report);
  for (const auto& [path, body] : {std::pair{svg_path, svg}, std::pair{plot_sidecar_path(svg_path), side}}) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cli_io", "cannot write " + path);
    out << body;
    if (!out) throw Error("cli_io", "cannot write " + path);
  }
}

}  // namespace pocsel
