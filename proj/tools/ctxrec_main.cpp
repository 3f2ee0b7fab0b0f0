// ctxrec: run, validate and report context-aware POI recommendation
// experiments.
#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <iostream>

#include "ctxrec/config.hpp"
#include "ctxrec/dataset.hpp"
#include "ctxrec/error.hpp"
#include "ctxrec/experiment.hpp"
#include "ctxrec/reports.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kFailed = 2;

int cmd_run(const std::string& config_path, const std::string& out_override) {
  auto cfg = ctxrec::load_config(config_path);
  if (!out_override.empty()) cfg.output_dir = out_override;
  ctxrec::validate_config(cfg);
  const auto table = ctxrec::run_experiment(cfg);
  ctxrec::emit_reports(table, cfg.output_dir);
  std::cout << "wrote " << cfg.output_dir.string() << " (" << table.rows.size() << " result rows, "
            << table.units.size() << " evaluated users)\n";
  return kOk;
}

int cmd_validate(const std::string& config_path) {
  const auto cfg = ctxrec::load_config(config_path);
  ctxrec::validate_config(cfg);
  if (cfg.dataset.kind == ctxrec::DatasetSpec::Kind::Files) {
    ctxrec::validate_against_dataset(cfg, ctxrec::load_dataset(cfg.dataset.paths));
  }
  std::cout << "ok: " << cfg.models.size() << " models, " << cfg.seeds.size() << " seeds, hash "
            << ctxrec::config_hash(cfg) << "\n";
  return kOk;
}

int cmd_synth(const std::string& config_path, const std::string& out_dir) {
  const auto cfg = ctxrec::load_config(config_path);
  if (cfg.dataset.kind != ctxrec::DatasetSpec::Kind::Synthetic) {
    throw ctxrec::ConfigError("synth needs a config with dataset.synthetic");
  }
  if (cfg.seeds.empty()) throw ctxrec::ConfigError("seeds: at least one seed is required");
  std::filesystem::create_directories(out_dir);
  const auto d = ctxrec::materialize_dataset(cfg.dataset, cfg.seeds.front());
  const auto paths = ctxrec::write_dataset(d, out_dir);
  std::cout << "wrote " << d.num_users() << " users, " << d.num_pois() << " POIs, "
            << d.num_checkins() << " check-ins to " << paths.checkins.parent_path().string() << "\n";
  return kOk;
}

int cmd_report(const std::string& in_dir) {
  const auto table = ctxrec::load_results(in_dir);
  ctxrec::emit_analysis_reports(table, in_dir);
  std::cout << "refreshed analysis reports in " << in_dir << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Context-aware POI recommendation experiments"};
  app.require_subcommand(1);
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

  std::string config, out, in;
  auto* run = app.add_subcommand("run", "Run the experiment grid and write all reports");
  run->add_option("--config", config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "Output directory (overrides output_dir)");

  auto* validate = app.add_subcommand("validate", "Check a config without training anything");
  validate->add_option("--config", config, "Experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);

  auto* synth = app.add_subcommand("synth", "Write the synthetic dataset of a config as TSV files");
  synth->add_option("--config", config, "Experiment config with dataset.synthetic")
      ->required()
      ->check(CLI::ExistingFile);
  synth->add_option("--out", out, "Directory for the TSV files")->required();

  auto* report = app.add_subcommand("report", "Recompute analysis reports of a finished run");
  report->add_option("--in", in, "Run directory containing manifest.json")
      ->required()
      ->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }
  spdlog::set_level(spdlog::level::from_str(log_level));
  spdlog::set_pattern("[%H:%M:%S] [%l] %v");

  try {
    if (*run) return cmd_run(config, out);
    if (*validate) return cmd_validate(config);
    if (*synth) return cmd_synth(config, out);
    if (*report) return cmd_report(in);
  } catch (const ctxrec::ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kFailed;
}
