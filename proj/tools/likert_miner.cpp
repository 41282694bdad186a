#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "likert_miner/likert_miner.hpp"

namespace {

constexpr int kExitStageFailure = 1;
constexpr int kExitUsage = 2;

struct Flags {
  std::string config;
  std::vector<std::pair<std::string, std::string>> overrides;
};

// Turns leftover `--key value` / `--key=value` arguments into config
// overrides. A key followed by another flag (or nothing) means "true".
std::vector<std::pair<std::string, std::string>> parse_overrides(const std::vector<std::string>& extras) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& arg = extras[i];
    if (arg.rfind("--", 0) != 0) throw likert::Error(likert::ErrorKind::ConfigError, "unexpected argument '" + arg + "'");
    std::string key = arg.substr(2), value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key.erase(eq);
    } else if (i + 1 < extras.size() && extras[i + 1].rfind("--", 0) != 0) {
      value = extras[++i];
    } else {
      value = "true";
    }
    if (!likert::is_config_key(key)) throw likert::Error(likert::ErrorKind::ConfigError, "unknown option --" + key);
    out.emplace_back(key, value);
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw likert::Error(likert::ErrorKind::IoError, "cannot write " + path.string());
  out << content;
}

bool wants(const likert::RunConfig& cfg, const std::string& format) {
  return std::find(cfg.format.begin(), cfg.format.end(), format) != cfg.format.end();
}

void emit_outputs(const likert::AnalysisReport& report) {
  const auto& cfg = report.config;
  const std::filesystem::path dir = cfg.out;
  std::filesystem::create_directories(dir);
  if (wants(cfg, "json")) write_file(dir / "report.json", likert::to_json(report).dump(2) + "\n");
  if (wants(cfg, "text")) {
    const auto text = likert::render_text(report);
    write_file(dir / "report.txt", text);
    std::cout << text;
  }
  if (!wants(cfg, "csv")) return;
  const bool all = std::find(cfg.plots.begin(), cfg.plots.end(), "all") != cfg.plots.end();
  const auto& kinds = all ? likert::plot_kinds() : cfg.plots;
  for (const auto& kind : kinds) {
    if (all && !likert::plot_available(report, kind)) continue;
    try {
      likert::emit_plot_data(report, kind, dir);
    } catch (const likert::Error& e) {
      if (e.kind() != likert::ErrorKind::StageNotRun) throw;
      std::cerr << "likert-miner: plot data '" << kind << "' skipped: " << e.what() << "\n";
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Statistical and data-mining analysis of Likert-scale course evaluations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "likert-miner 1.0.0");

  const std::vector<std::pair<std::string, std::string>> subcommands{
      {"analyze", "run the full pipeline"},
      {"reliability", "Cronbach alpha, respondent reliability, zero-variation split"},
      {"summarize", "item distributions and grand mean/mode/median"},
      {"associate", "cross-tabulations and chi-squared tests"},
      {"correlate", "item correlation matrix"},
      {"cluster", "k-means clustering of respondents"},
      {"factor", "principal-axis factor analysis"},
      {"tree", "classification tree"},
      {"forest", "random forest with out-of-bag error"}};

  Flags flags;
  std::map<std::string, std::string> named;
  for (const auto& [name, help] : subcommands) {
    auto* sub = app.add_subcommand(name, help);
    sub->allow_extras();
    sub->add_option("--config", flags.config, "key=value configuration file")->required();
    for (const char* key : {"input", "out", "seed", "response", "format"})
      sub->add_option_function<std::string>(std::string("--") + key, [&named, key](const std::string& v) { named[key] = v; },
                                            std::string("overrides ") + key);
    sub->footer("Any configuration key can be given as --<key> <value>, e.g. --forest.trees 500.");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  likert::RunConfig cfg;
  try {
    cfg = likert::load_config(flags.config);
    for (const auto& [key, value] : named) likert::apply_setting(cfg, key, value);
    for (const auto& [key, value] : parse_overrides(chosen->remaining())) likert::apply_setting(cfg, key, value);
    cfg = likert::config_for_subcommand(cfg, chosen->get_name());
    likert::validate_config(cfg);
  } catch (const likert::Error& e) {
    std::cerr << "likert-miner: " << e.what() << "\n";
    return kExitUsage;
  }

  const auto report = likert::run_pipeline(cfg);
  try {
    emit_outputs(report);
  } catch (const likert::Error& e) {
    std::cerr << "likert-miner: " << e.what() << "\n";
    return kExitStageFailure;
  }
  if (report.failure) {
    std::cerr << "likert-miner: stage '" << report.failure->stage << "' failed: " << report.failure->message << "\n";
    return kExitStageFailure;
  }
  return 0;
}
