#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "metricsim/stats.hpp"

namespace metricsim {

// Serializable record of one experiment run, sufficient to regenerate every
// rendered table.
struct RunResults {
  struct PerFold {
    int fold = 0;
    long n = 0;
    double r = std::numeric_limits<double>::quiet_NaN();
    double rho = std::numeric_limits<double>::quiet_NaN();
    double p_r = std::numeric_limits<double>::quiet_NaN();
    double p_rho = std::numeric_limits<double>::quiet_NaN();
    double base_r = std::numeric_limits<double>::quiet_NaN();
    double base_rho = std::numeric_limits<double>::quiet_NaN();
    double base_p_r = std::numeric_limits<double>::quiet_NaN();
    double base_p_rho = std::numeric_limits<double>::quiet_NaN();
    int epochs_run = 0;
    bool stopped_early = false;
    double best_val_loss = std::numeric_limits<double>::quiet_NaN();
    double final_train_loss = std::numeric_limits<double>::quiet_NaN();
  };

  struct Cell {
    double lr = 0.0;
    int k = 0;
    bool ok = false;
    std::string error;
    double mean_r = std::numeric_limits<double>::quiet_NaN();
    double mean_rho = std::numeric_limits<double>::quiet_NaN();
    double base_r = std::numeric_limits<double>::quiet_NaN();
    double base_rho = std::numeric_limits<double>::quiet_NaN();
    double p_r = std::numeric_limits<double>::quiet_NaN();
    double p_rho = std::numeric_limits<double>::quiet_NaN();
    double base_p_r = std::numeric_limits<double>::quiet_NaN();
    double base_p_rho = std::numeric_limits<double>::quiet_NaN();
    std::vector<PerFold> per_fold;
    std::vector<std::string> diagnostics;
  };

  struct Dataset {
    std::string dataset;
    std::string role;
    std::string provenance;
    int n_pairs = 0;
    int n_words = 0;
    int dropped_pairs = 0;
    int best_pearson = -1;  // cell index, -1 when nothing scored
    int best_spearman = -1;
    std::vector<Cell> cells;
  };

  struct Transfer {
    std::string dataset;
    std::string trained_on;
    std::string error;  // non-empty when the transfer could not run
    double pearson_lr = 0.0;
    int pearson_k = 0;
    double mean_r = std::numeric_limits<double>::quiet_NaN();
    double p_r = std::numeric_limits<double>::quiet_NaN();
    double spearman_lr = 0.0;
    int spearman_k = 0;
    double mean_rho = std::numeric_limits<double>::quiet_NaN();
    double p_rho = std::numeric_limits<double>::quiet_NaN();
    long base_n = 0;
    double base_r = std::numeric_limits<double>::quiet_NaN();
    double base_rho = std::numeric_limits<double>::quiet_NaN();
    double base_p_r = std::numeric_limits<double>::quiet_NaN();
    double base_p_rho = std::numeric_limits<double>::quiet_NaN();
  };

  std::string schema = "metricsim/results/v1";
  std::string representation;
  uint64_t seed = 0;
  std::string p_policy =
      "aggregate p-values are medians of per-fold p-values; grouped folds "
      "use the pooled pair count of included groups";
  std::vector<Dataset> datasets;
  std::vector<Transfer> transfers;
};

std::string results_to_json(const RunResults& results);
RunResults results_from_json(const std::string& text);
void save_results(const std::filesystem::path& path, const RunResults&);
RunResults load_results(const std::filesystem::path& path);

// Relative change of |model| against |base|, in percent, rounded to the
// nearest integer (half away from zero). |base| must be nonzero.
long percent_change_rounded(double model, double base);

// One row per dataset at its best cell for the given correlation kind, with
// significance (p < 0.05) and model-above-base flags.
std::string render_correlation_table(const RunResults& results,
                                     CorrKind kind);

// Percent change model vs base at the best cell of each kind, annotated
// with the (lr, k) that produced it.
std::string render_percent_change_table(const RunResults& results);

// Transfer scores of the all-role fold models on each test dataset next to
// the full-set baseline.
std::string render_transfer_table(const RunResults& results);

}  // namespace metricsim
