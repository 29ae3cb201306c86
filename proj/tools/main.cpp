// Command-line front end: `run` executes a configured experiment (grids,
// best-cell selection, transfer tests, reports), `synth` generates the
// recovery-oracle dataset, `report` re-renders tables from a results file.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "metricsim/error.hpp"
#include "metricsim/experiment.hpp"
#include "metricsim/synthetic.hpp"

namespace {

// 1: configuration error, 2: ingestion error, 3: training divergence.
int exit_code_for(const metricsim::Error& e) {
  using metricsim::ErrorCode;
  switch (e.code()) {
    case ErrorCode::config:
    case ErrorCode::precondition:
      return 1;
    case ErrorCode::divergence:
      return 3;
    default:
      return 2;
  }
}

void print_diagnostic(const char* code, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = {{"code", code}, {"message", message}};
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"learned bilinear-metric cosine similarity experiments"};
  app.require_subcommand(1);

  uint64_t seed = 0;
  bool trace = false;
  int jobs = 1;
  auto* seed_opt = app.add_option("--seed", seed, "override the run seed");
  auto* trace_opt = app.add_flag("--trace", trace, "write per-epoch loss logs");
  app.add_option("--jobs", jobs, "worker threads for grid training")
      ->check(CLI::PositiveNumber);

  auto* run = app.add_subcommand("run", "execute a configured experiment");
  run->fallthrough();
  std::string config_path;
  bool export_gram = false;
  bool dump_distributions = false;
  run->add_option("--config", config_path, "experiment config (JSON)")
      ->required();
  run->add_flag("--export-gram", export_gram,
                "also export B^T B next to each saved factor");
  run->add_flag("--dump-distributions", dump_distributions,
                "write per-pair human/model score dumps");

  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  synth->fallthrough();
  metricsim::SyntheticSpec spec;
  std::string synth_out = ".";
  synth->add_option("--dim", spec.dim, "embedding dimension");
  synth->add_option("--words", spec.n_words, "vocabulary size");
  synth->add_option("--noise", spec.noise_sigma, "target noise sigma");
  synth->add_option("--factor-scale", spec.hidden_factor_scale,
                    "std-dev of hidden factor entries");
  synth->add_option("--out", synth_out, "output directory")->required();

  auto* report = app.add_subcommand("report", "render tables from a run");
  report->fallthrough();
  std::string report_dir;
  report->add_option("--dir", report_dir, "completed run directory")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const auto cfg = metricsim::load_experiment_config(config_path);
      metricsim::RunOptions options;
      options.jobs = jobs;
      options.export_gram = export_gram;
      options.dump_distributions = dump_distributions;
      options.log = &std::cout;
      if (seed_opt->count() > 0) options.seed_override = seed;
      if (trace_opt->count() > 0) options.trace_override = true;
      const auto outcome = metricsim::run_experiment(cfg, options);
      if (outcome.cells_total > 0 &&
          outcome.cells_failed == outcome.cells_total) {
        print_diagnostic("divergence", "every grid cell failed");
        return 3;
      }
      if (outcome.cells_failed > 0) {
        std::cout << outcome.cells_failed << "/" << outcome.cells_total
                  << " cells failed; see " << outcome.results_path.string()
                  << "\n";
      }
      return 0;
    }
    if (synth->parsed()) {
      if (seed_opt->count() > 0) spec.seed = seed;
      const auto files = metricsim::write_synthetic(spec, synth_out);
      std::cout << "embeddings\t" << files.embeddings.string() << "\n"
                << "judgments\t" << files.judgments.string() << "\n"
                << "hidden_factor\t" << files.hidden_factor.string() << "\n";
      return 0;
    }
    if (report->parsed()) {
      const auto results = metricsim::load_results(
          std::filesystem::path(report_dir) / "results.json");
      std::cout << metricsim::render_correlation_table(
                       results, metricsim::CorrKind::pearson)
                << "\n"
                << metricsim::render_correlation_table(
                       results, metricsim::CorrKind::spearman)
                << "\n"
                << metricsim::render_percent_change_table(results) << "\n"
                << metricsim::render_transfer_table(results);
      return 0;
    }
  } catch (const metricsim::Error& e) {
    print_diagnostic(metricsim::error_code_name(e.code()), e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    print_diagnostic("internal", e.what());
    return 1;
  }
  return 0;
}
