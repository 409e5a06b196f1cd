#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pocsel/error.hpp"
#include "pocsel/report.hpp"

namespace {

constexpr int kExitFatal = 1;
constexpr int kExitConfig = 2;

std::vector<pocsel::AssumptionSet> parse_sets(const std::string& text) {
  std::vector<pocsel::AssumptionSet> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto a = pocsel::parse_assumption_set(item);
    if (!a) throw pocsel::ConfigError("unknown assumption set '" + item + "' (expected A1_3, A1_4, A1_5)");
    out.push_back(*a);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounds on the probability of causation under sample selection"};
  app.set_version_flag("--version", std::string(pocsel::tool_version()));

  pocsel::RunConfig cfg;
  std::string stratum_col;
  std::string sets = "A1_3,A1_4,A1_5";
  std::string stratified = "auto";
  std::string format = "json";
  std::string plot_out;
  std::string output;

  app.add_option("--input", cfg.input_path, "CSV microdata")->required();
  app.add_option("--y-col", cfg.columns.y, "outcome column")->capture_default_str();
  app.add_option("--s-col", cfg.columns.s, "selection column")->capture_default_str();
  app.add_option("--d-col", cfg.columns.d, "treatment column")->capture_default_str();
  app.add_option("--stratum-col", stratum_col, "stratum column");
  app.add_option("--assumptions", sets, "comma-separated subset of A1_3,A1_4,A1_5")->capture_default_str();
  app.add_option("--reps", cfg.reps, "bootstrap replications")->capture_default_str();
  app.add_option("--level", cfg.level, "confidence level")->capture_default_str();
  app.add_option("--seed", cfg.seed, "bootstrap seed")->capture_default_str();
  app.add_option("--stratified", stratified, "stratified estimation and resampling: on, off or auto")
      ->check(CLI::IsMember({"on", "off", "auto"}))
      ->capture_default_str();
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  app.add_option("--plot-out", plot_out, "SVG path; numbers go to a sidecar .plot.json");
  app.add_option("--output", output, "report path (default stdout)");
  app.add_option("--threads", cfg.threads, "bootstrap threads, 0 = all cores")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (!stratum_col.empty()) cfg.columns.stratum = stratum_col;
    cfg.assumption_sets = parse_sets(sets);
    if (stratified != "auto") cfg.stratified = stratified == "on";
    cfg.format = format == "text" ? pocsel::OutputFormat::Text : pocsel::OutputFormat::Json;
    if (!plot_out.empty()) cfg.plot_out = plot_out;

    const pocsel::Report report = pocsel::run_analysis(cfg);
    const std::string body =
        cfg.format == pocsel::OutputFormat::Json ? pocsel::to_json(report) : pocsel::to_text(report);
    if (output.empty()) {
      std::cout << body;
    } else {
      std::ofstream out(output, std::ios::binary);
      if (!(out << body)) throw pocsel::Error("cli_io", "cannot write " + output);
    }
    if (cfg.plot_out) pocsel::emit_plot_data(report, *cfg.plot_out);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    return 0;
  } catch (const pocsel::ConfigError& e) {
    std::cerr << e.module() << ": " << e.what() << "\n";
    return kExitConfig;
  } catch (const pocsel::ParseError& e) {
    std::cerr << e.module() << ": " << e.what() << "\n";
    return kExitConfig;
  } catch (const pocsel::Error& e) {
    std::cerr << e.module() << ": " << e.what() << "\n";
    return kExitFatal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFatal;
  }
}
