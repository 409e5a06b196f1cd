#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "pocsel/bounds.hpp"
#include "pocsel/csv.hpp"
#include "pocsel/error.hpp"
#include "pocsel/report.hpp"
#include "support/helpers.hpp"

using namespace pocsel;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
namespace fs = std::filesystem;

namespace {

Dataset parse(const std::string& text, ColumnMapping mapping = {}) {
  std::istringstream in(text);
  return parse_csv(in, mapping);
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "pocsel_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write_file(const fs::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary);
  out << body;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string write_records(const fs::path& p, const std::vector<MicroRecord>& rs, bool strata) {
  std::ostringstream out;
  out << (strata ? "y,s,d,g\n" : "y,s,d\n");
  for (const auto& r : rs) {
    out << (r.y ? std::to_string(*r.y) : "") << ',' << r.s << ',' << r.d;
    if (strata) out << ',' << r.stratum.value_or("");
    out << '\n';
  }
  write_file(p, out.str());
  return p.string();
}

RunConfig quick_config(const std::string& path) {
  RunConfig cfg;
  cfg.input_path = path;
  cfg.reps = 100;
  cfg.seed = 3;
  return cfg;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(POCSEL_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("three-row file") {
  const auto d = parse("y,s,d\n1,1,1\n,0,1\n0,1,0\n");
  REQUIRE(d.size() == 3);
  CHECK(d.records()[0] == MicroRecord{1, 1, 1, std::nullopt});
  CHECK_FALSE(d.records()[1].y.has_value());
  CHECK(d.records()[1].s == 0);
  CHECK(d.records()[2] == MicroRecord{0, 1, 0, std::nullopt});
}

TEST_CASE("parse errors cite the row") {
  CHECK_THROWS_WITH(parse("y,s,d\n2,1,0\n"), "non-binary value '2' in column y at row 1");
  CHECK_THROWS_WITH(parse("y,s,d\n1,1,0\n,1,1\n"), "missing y for a selected unit at row 2");
  CHECK_THROWS_AS(parse("y,s,d\n1,1\n"), ParseError);
  CHECK_THROWS_AS(parse("y,s,d\n1,1,x\n"), ParseError);
  CHECK_THROWS_AS(parse("y,s,d\n1,0,1\n"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("y,s,d\n"), ParseError);
}

TEST_CASE("column mapping problems are configuration errors") {
  ColumnMapping dup;
  dup.s = "y";
  CHECK_THROWS_AS(parse("y,s,d\n1,1,1\n", dup), ConfigError);
  ColumnMapping missing;
  missing.stratum = "course";
  CHECK_THROWS_WITH(parse("y,s,d\n1,1,1\n", missing), "column 'course' not found in header");
}

TEST_CASE("custom column names, extra columns, CRLF and unselected zeros") {
  ColumnMapping m;
  m.y = "formal";
  m.s = "employed";
  m.d = "assigned";
  const auto d = parse("id,assigned,employed,formal\r\n1,1,1,1\r\n2,0,0,0\r\n", m);
  REQUIRE(d.size() == 2);
  CHECK(d.records()[0].y == 1);
  CHECK_FALSE(d.records()[1].y.has_value());
}

TEST_CASE("stratum index groups rows") {
  ColumnMapping m;
  m.stratum = "g";
  const auto d = parse("y,s,d,g\n1,1,1,a\n0,1,0,b\n,0,1,a\n1,1,0,c\n0,1,1,b\n,0,0,a\n", m);
  const auto& idx = d.stratum_index();
  REQUIRE(idx.size() == 3);
  CHECK(idx.at("a") == std::vector<std::size_t>{0, 2, 5});
  CHECK(idx.at("b") == std::vector<std::size_t>{1, 4});
  CHECK(idx.at("c") == std::vector<std::size_t>{3});
  CHECK(d.fully_stratified());
}

TEST_CASE("sha256 digest") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("config validation") {
  RunConfig cfg = quick_config("x.csv");
  cfg.level = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = quick_config("x.csv");
  cfg.reps = 1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = quick_config("x.csv");
  cfg.assumption_sets = {AssumptionSet::A1_3, AssumptionSet::A1_3};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = quick_config("x.csv");
  cfg.stratified = true;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("report JSON round trip and byte-stable output") {
  Rng rng(139);
  const auto f = testing::stratified_fixture(rng, 3, 3000);
  const auto path = write_records(scratch("strata.csv"), f.records, true);
  RunConfig cfg = quick_config(path);
  cfg.columns.stratum = "g";
  const Report a = run_analysis(cfg);
  REQUIRE(a.stratified.size() == 3);
  const std::string ja = to_json(a);
  CHECK(report_from_json(ja) == a);
  CHECK(to_json(report_from_json(ja)) == ja);
  cfg.threads = 3;
  CHECK(to_json(run_analysis(cfg)) == ja);

  const auto j = nlohmann::json::parse(ja);
  CHECK(j.at("schema_version") == kSchemaVersion);
  CHECK(j.at("provenance").at("input_sha256") == sha256_hex(read_file(path)));
  CHECK(j.at("provenance").at("seed") == 3);
  CHECK(j.at("provenance").at("reps") == 100);
  CHECK(j.at("provenance").at("tool_version") == std::string(tool_version()));
  CHECK_THROWS_AS(report_from_json("{}"), ParseError);
  CHECK_THROWS_AS(report_from_json("not json"), ParseError);
}

TEST_CASE("input digest follows the bytes") {
  const auto p = scratch("digest.csv");
  write_file(p, "y,s,d\n1,1,1\n0,1,1\n,0,1\n0,1,0\n1,1,0\n,0,0\n");
  RunConfig cfg = quick_config(p.string());
  const auto d1 = run_analysis(cfg).provenance.input_digest;
  CHECK(run_analysis(cfg).provenance.input_digest == d1);
  write_file(p, "y,s,d\n1,1,1\n0,1,1\n,0,1\n0,1,0\n1,1,0\n,0,0\n\n");
  CHECK(run_analysis(cfg).provenance.input_digest != d1);
}

TEST_CASE("single stratum with and without stratification") {
  Rng rng(149);
  auto rs = sample_records(testing::tame_joint(rng), 2000, rng, std::string("one"));
  const auto path = write_records(scratch("one.csv"), rs, true);
  RunConfig cfg = quick_config(path);
  cfg.columns.stratum = "g";
  cfg.stratified = false;
  const Report off = run_analysis(cfg);
  cfg.stratified = true;
  const Report on = run_analysis(cfg);
  CHECK(off.stratified.empty());
  REQUIRE(on.stratified.size() == 3);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(off.unconditional[j].bounds == on.unconditional[j].bounds);
    CHECK(on.stratified[j].aggregate.lb == on.unconditional[j].bounds.lb);
    CHECK(on.stratified[j].aggregate.ub == on.unconditional[j].bounds.ub);
  }
}

TEST_CASE("restriction violations warn and still report bounds") {
  Rng rng(151);
  const auto rs = sample_records(testing::selection_violation_joint(0.2), 3000, rng);
  const auto path = write_records(scratch("violated.csv"), rs, false);
  const Report r = run_analysis(quick_config(path));
  REQUIRE(r.unconditional.size() == 3);
  CHECK(r.unconditional[0].bounds.restriction_violated);
  bool warned = false;
  for (const auto& w : r.warnings) warned = warned || w.find("restriction violated") != std::string::npos;
  CHECK(warned);
  CHECK(r.unconditional[0].tests.selection_test.p_value < 0.05);
  CHECK(run_cli("--input " + path + " --reps 50") == 0);
}

TEST_CASE("published table moments from the committed fixture") {
  RunConfig cfg = quick_config(std::string(POCSEL_DATA_DIR) + "/table1_synthetic.csv");
  const Report r = run_analysis(cfg);
  CHECK(r.n == 1769);
  const double expect[3][2] = {{0.014, 0.609}, {0.014, 0.163}, {0.106, 0.163}};
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK_THAT(r.unconditional[j].bounds.lb, WithinAbs(expect[j][0], 1e-3));
    CHECK_THAT(r.unconditional[j].bounds.ub, WithinAbs(expect[j][1], 1e-3));
  }
}

TEST_CASE("plot output echoes the report") {
  RunConfig cfg = quick_config(std::string(POCSEL_DATA_DIR) + "/table1_synthetic.csv");
  cfg.columns.stratum = "course";
  const Report r = run_analysis(cfg);
  const auto svg_path = scratch("plot.svg");
  emit_plot_data(r, svg_path.string());
  const std::string svg = read_file(svg_path);
  const auto side = nlohmann::json::parse(read_file(plot_sidecar_path(svg_path.string())));
  CHECK(plot_sidecar_path("a/b.svg") == "a/b.plot.json");

  const std::regex bar(R"re(data-group="(\w+)" data-set="(\w+)" data-endpoint="(\w+)" data-value="([^"]+)")re");
  std::vector<std::string> order;
  int bars = 0;
  for (std::sregex_iterator it(svg.begin(), svg.end(), bar), end; it != end; ++it, ++bars) {
    const std::string group = (*it)[1], set = (*it)[2], endpoint = (*it)[3];
    const double value = std::stod((*it)[4]);
    const std::size_t j = static_cast<std::size_t>(*parse_assumption_set(set));
    const BoundsInterval& b = group == "unconditional" ? r.unconditional[j].bounds : r.stratified[j].aggregate;
    CHECK(value == (endpoint == "lb" ? b.lb : b.ub));
    if (group == "unconditional" && endpoint == "lb") order.push_back(set);
  }
  CHECK(bars == 12);
  CHECK(order == std::vector<std::string>{"A1_3", "A1_4", "A1_5"});
  REQUIRE(side.at("groups").size() == 2);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(side["groups"][0]["bars"][j]["lb"].get<double>() == r.unconditional[j].bounds.lb);
    CHECK(side["groups"][0]["bars"][j]["ub"].get<double>() == r.unconditional[j].bounds.ub);
    CHECK(side["groups"][1]["bars"][j]["ub"].get<double>() == r.stratified[j].aggregate.ub);
  }

  RunConfig plain = quick_config(cfg.input_path);
  const Report u = run_analysis(plain);
  const std::string svg_u = render_svg(u);
  CHECK(svg_u.find("data-group=\"stratified\"") == std::string::npos);
  CHECK(nlohmann::json::parse(plot_json(u)).at("groups").size() == 1);
  CHECK_THROWS_AS(emit_plot_data(u, "/nonexistent/dir/plot.svg"), Error);
}

TEST_CASE("text report") {
  const Report r = run_analysis(quick_config(std::string(POCSEL_DATA_DIR) + "/table1_synthetic.csv"));
  const std::string t = to_text(r);
  CHECK_THAT(t, ContainsSubstring("0.609"));
  CHECK_THAT(t, ContainsSubstring("A1_5"));
  CHECK_THAT(t, ContainsSubstring("IC_LB"));
}

TEST_CASE("command-line exit codes") {
  const std::string data = std::string(POCSEL_DATA_DIR) + "/table1_synthetic.csv";
  CHECK(run_cli("--input " + data + " --reps 20") == 0);
  CHECK(run_cli("--input " + data + " --reps 20 --format text --stratum-col course") == 0);
  CHECK(run_cli("--input " + data + " --bogus") == 2);
  CHECK(run_cli("--input " + data + " --y-col nope") == 2);
  CHECK(run_cli("--input " + data + " --level 2") == 2);
  CHECK(run_cli("--input " + data + " --assumptions A1_9") == 2);
  CHECK(run_cli("--input " + data + " --stratified on") == 2);
  const auto bad = scratch("bad.csv");
  write_file(bad, "y,s,d\n2,1,0\n");
  CHECK(run_cli("--input " + bad.string()) == 2);
  const auto treated_only = scratch("treated_only.csv");
  write_file(treated_only, "y,s,d\n1,1,1\n0,1,1\n");
  CHECK(run_cli("--input " + treated_only.string()) == 1);
  CHECK(run_cli("--input " + scratch("missing.csv").string()) == 1);

  const auto out = scratch("cli.json");
  const auto svg = scratch("cli.svg");
  REQUIRE(run_cli("--input " + data + " --reps 30 --stratum-col course --output " + out.string() + " --plot-out " +
                  svg.string()) == 0);
  const Report r = report_from_json(read_file(out));
  CHECK(r.provenance.reps == 30);
  CHECK(fs::exists(svg));
  CHECK(fs::exists(plot_sidecar_path(svg.string())));
}
