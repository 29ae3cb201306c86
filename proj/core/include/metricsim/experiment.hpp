#pragma once

#include <filesystem>
#include <optional>
#include <ostream>

#include "metricsim/grid.hpp"
#include "metricsim/report.hpp"

namespace metricsim {

struct DatasetEntry {
  enum class Role { per_hypernym, all, transfer_test };

  std::string name;
  std::filesystem::path path;
  Role role = Role::per_hypernym;
  Provenance provenance = Provenance::plain;
  std::string pos_filter;  // keep only rows with this pos column value
};

const char* role_name(DatasetEntry::Role role);

struct ExperimentConfig {
  std::filesystem::path embeddings_path;
  std::vector<DatasetEntry> dataset_paths;
  GridSpec grid;
  uint64_t seed = 0;
  std::filesystem::path output_dir;
  bool trace = false;
  RatingScale scale = RatingScale::raw_1_7;

  void validate() const;
};

// JSON document whose keys mirror ExperimentConfig field names. Relative
// paths are resolved against the config file's directory.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct RunOptions {
  int jobs = 1;
  bool export_gram = false;
  bool dump_distributions = false;
  std::optional<uint64_t> seed_override;
  std::optional<bool> trace_override;
  std::ostream* log = nullptr;  // progress lines; null = silent
};

struct RunOutcome {
  int cells_total = 0;
  int cells_failed = 0;
  std::filesystem::path results_path;
};

// The full experiment pipeline: ingest, per-dataset grids, best-cell
// selection, transfer tests, report files. Deterministic for fixed inputs
// and seed; timestamps are confined to one metadata line per rendered
// report.
RunOutcome run_experiment(const ExperimentConfig& config,
                          const RunOptions& options = {});

}  // namespace metricsim
