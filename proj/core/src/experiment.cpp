#include "metricsim/experiment.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "metricsim/error.hpp"
#include "metricsim/matrix_io.hpp"
#include "metricsim/rng.hpp"

namespace metricsim {

namespace {
using json = nlohmann::ordered_json;
namespace fs = std::filesystem;
}  // namespace

const char* role_name(DatasetEntry::Role role) {
  switch (role) {
    case DatasetEntry::Role::per_hypernym: return "per-hypernym";
    case DatasetEntry::Role::all: return "all";
    case DatasetEntry::Role::transfer_test: return "transfer-test";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  if (embeddings_path.empty()) {
    fail(ErrorCode::config, "embeddings_path is required");
  }
  if (output_dir.empty()) fail(ErrorCode::config, "output_dir is required");
  if (dataset_paths.empty()) {
    fail(ErrorCode::config, "dataset_paths must name at least one dataset");
  }
  std::set<std::string> names;
  int all_count = 0;
  int transfer_count = 0;
  for (const auto& entry : dataset_paths) {
    if (entry.name.empty()) fail(ErrorCode::config, "dataset without a name");
    if (!names.insert(entry.name).second) {
      fail(ErrorCode::config, "duplicate dataset name '" + entry.name + "'");
    }
    if (entry.path.empty()) {
      fail(ErrorCode::config, "dataset '" + entry.name + "' has no path");
    }
    if (entry.role == DatasetEntry::Role::all) ++all_count;
    if (entry.role == DatasetEntry::Role::transfer_test) ++transfer_count;
  }
  if (all_count > 1) {
    fail(ErrorCode::config, "at most one dataset may hold the 'all' role");
  }
  if (transfer_count > 0 && all_count == 0) {
    fail(ErrorCode::config,
         "transfer-test datasets require an 'all'-role training run");
  }
  grid.validate();
}

namespace {

DatasetEntry::Role parse_role(const std::string& s) {
  if (s == "per-hypernym") return DatasetEntry::Role::per_hypernym;
  if (s == "all") return DatasetEntry::Role::all;
  if (s == "transfer-test") return DatasetEntry::Role::transfer_test;
  fail(ErrorCode::config,
       "unknown dataset role '" + s +
           "' (expected per-hypernym, all or transfer-test)");
}

Provenance parse_provenance(const std::string& s) {
  if (s == "plain") return Provenance::plain;
  if (s == "contextualized") return Provenance::contextualized;
  fail(ErrorCode::config, "unknown provenance '" + s + "'");
}

RatingScale parse_scale(const std::string& s) {
  if (s == "raw_1_7") return RatingScale::raw_1_7;
  if (s == "unit") return RatingScale::unit;
  fail(ErrorCode::config,
       "unknown rating scale '" + s + "' (expected raw_1_7 or unit)");
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
          return key == a;
        }) == allowed.end()) {
      fail(ErrorCode::config, "unknown key '" + key + "' in " + where);
    }
  }
}

fs::path resolve_relative(const fs::path& base_dir, const fs::path& p) {
  return p.is_absolute() ? p : base_dir / p;
}

}  // namespace

ExperimentConfig load_experiment_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::config, "cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const std::exception& e) {
    fail(ErrorCode::config,
         "cannot parse config " + path.string() + ": " + e.what());
  }

  reject_unknown_keys(j,
                      {"embeddings_path", "dataset_paths", "grid", "seed",
                       "output_dir", "trace", "scale"},
                      "config");
  ExperimentConfig cfg;
  const fs::path base_dir = path.has_parent_path() ? path.parent_path()
                                                   : fs::path(".");
  try {
    cfg.embeddings_path = resolve_relative(
        base_dir, fs::path(j.at("embeddings_path").get<std::string>()));
    cfg.output_dir = resolve_relative(
        base_dir, fs::path(j.at("output_dir").get<std::string>()));
    for (const auto& d : j.at("dataset_paths")) {
      reject_unknown_keys(d, {"name", "path", "role", "provenance",
                              "pos_filter"},
                          "dataset entry");
      DatasetEntry entry;
      entry.name = d.at("name").get<std::string>();
      entry.path = resolve_relative(base_dir,
                                    fs::path(d.at("path").get<std::string>()));
      entry.role = parse_role(d.at("role").get<std::string>());
      if (d.contains("provenance")) {
        entry.provenance =
            parse_provenance(d.at("provenance").get<std::string>());
      }
      if (d.contains("pos_filter")) {
        entry.pos_filter = d.at("pos_filter").get<std::string>();
      }
      cfg.dataset_paths.push_back(std::move(entry));
    }
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      reject_unknown_keys(g, {"learning_rates", "fold_counts"}, "grid");
      cfg.grid.learning_rates =
          g.at("learning_rates").get<std::vector<double>>();
      cfg.grid.fold_counts = g.at("fold_counts").get<std::vector<int>>();
    }
    if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
    if (j.contains("trace")) cfg.trace = j.at("trace").get<bool>();
    if (j.contains("scale")) {
      cfg.scale = parse_scale(j.at("scale").get<std::string>());
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::config,
         "config " + path.string() + " is malformed: " + e.what());
  }
  cfg.validate();
  return cfg;
}

namespace {

std::string file_safe(const std::string& name) {
  std::string out = name;
  for (char& c : out) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' &&
        c != '.') {
      c = '_';
    }
  }
  return out;
}

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string timestamp_line() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return std::string("# generated_at\t") + buf + "\n";
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot write " + path.string());
  out << content;
  if (!out) fail(ErrorCode::io, "failed writing " + path.string());
}

std::string cell_tag(const GridCell& cell) {
  return "lr" + fmt_g(cell.learning_rate) + "_k" +
         std::to_string(cell.fold_count);
}

RunResults::Cell summarize_cell(const GridCell& cell) {
  RunResults::Cell out;
  out.lr = cell.learning_rate;
  out.k = cell.fold_count;
  out.ok = cell.ok;
  out.error = cell.error;
  if (!cell.ok) return out;

  const AggregateScore& score = cell.score;
  out.mean_r = score.mean_r;
  out.mean_rho = score.mean_rho;
  out.base_r = score.baseline_mean_r;
  out.base_rho = score.baseline_mean_rho;
  out.p_r = score.p_r;
  out.p_rho = score.p_rho;
  out.base_p_r = score.baseline_p_r;
  out.base_p_rho = score.baseline_p_rho;
  out.diagnostics = score.diagnostics;

  for (const auto& fold_score : score.per_fold) {
    RunResults::PerFold pf;
    pf.fold = fold_score.fold_index;
    pf.n = fold_score.report.n;
    pf.r = fold_score.report.r;
    pf.rho = fold_score.report.rho;
    pf.p_r = fold_score.report.p_r;
    pf.p_rho = fold_score.report.p_rho;
    for (const auto& base : score.baseline_per_fold) {
      if (base.fold_index == fold_score.fold_index) {
        pf.base_r = base.report.r;
        pf.base_rho = base.report.rho;
        pf.base_p_r = base.report.p_r;
        pf.base_p_rho = base.report.p_rho;
      }
    }
    for (const auto& model : cell.models) {
      if (model.fold.fold_index == fold_score.fold_index) {
        pf.epochs_run = model.epochs_run;
        pf.stopped_early = model.stopped_early;
        pf.best_val_loss = model.best_val_loss;
        pf.final_train_loss = model.final_train_loss;
      }
    }
    out.per_fold.push_back(std::move(pf));
  }
  return out;
}

void write_trace_files(const fs::path& trace_dir, const std::string& ds_tag,
                       const GridResult& grid) {
  fs::create_directories(trace_dir);
  char buf[96];
  for (const auto& cell : grid.cells) {
    for (const auto& model : cell.models) {
      const fs::path path =
          trace_dir / (ds_tag + "__" + cell_tag(cell) + "__fold" +
                       std::to_string(model.fold.fold_index) + ".txt");
      std::string content = "epoch\ttrain_loss\tval_loss\n";
      for (const auto& rec : model.trace) {
        std::snprintf(buf, sizeof(buf), "%d\t%.17g\t%.17g\n", rec.epoch,
                      rec.train_loss, rec.val_loss);
        content += buf;
      }
      write_text(path, content);
    }
  }
}

void export_factors(const fs::path& factors_dir, const std::string& ds_tag,
                    const GridResult& grid, bool export_gram) {
  std::set<int> cells;
  if (grid.best_pearson >= 0) cells.insert(grid.best_pearson);
  if (grid.best_spearman >= 0) cells.insert(grid.best_spearman);
  if (cells.empty()) return;
  fs::create_directories(factors_dir);
  for (const int c : cells) {
    const GridCell& cell = grid.cells[static_cast<size_t>(c)];
    for (const auto& model : cell.models) {
      const std::string stem = ds_tag + "__" + cell_tag(cell) + "__fold" +
                               std::to_string(model.fold.fold_index);
      save_matrix_text(factors_dir / (stem + ".txt"),
                       model.factor.entries());
      if (export_gram) {
        const Eigen::MatrixXd g = gram(model.factor);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(g);
        if (eigen.eigenvalues().minCoeff() < -1e-9) {
          fail(ErrorCode::integrity,
               "exported metric for " + stem + " is not PSD");
        }
        save_matrix_text(factors_dir / (stem + "_gram.txt"), g);
      }
    }
  }
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& config,
                          const RunOptions& options) {
  ExperimentConfig cfg = config;
  if (options.seed_override) cfg.seed = *options.seed_override;
  if (options.trace_override) cfg.trace = *options.trace_override;
  cfg.validate();

  auto log = [&](const std::string& line) {
    if (options.log != nullptr) *options.log << line << "\n";
  };

  const auto loaded = load_embeddings_text(cfg.embeddings_path);
  const EmbeddingStore& store = loaded.store;
  log("embeddings: " + std::to_string(loaded.stats.parsed) + " words, dim " +
      std::to_string(store.dim()) + " from " + cfg.embeddings_path.string() +
      (loaded.stats.skipped_duplicate
           ? " (" + std::to_string(loaded.stats.skipped_duplicate) +
                 " duplicates skipped)"
           : "") +
      (loaded.stats.skipped_zero_norm
           ? " (" + std::to_string(loaded.stats.skipped_zero_norm) +
                 " zero vectors skipped)"
           : ""));

  fs::create_directories(cfg.output_dir);

  RunResults results;
  results.representation = store.source_name();
  results.seed = cfg.seed;

  RunOutcome outcome;
  std::optional<GridResult> all_grid;
  std::optional<SimilarityDataset> all_dataset;
  std::string all_name;

  for (const auto& entry : cfg.dataset_paths) {
    if (entry.role == DatasetEntry::Role::transfer_test) continue;

    SimilarityDataset raw = load_judgments(entry.path, cfg.scale, entry.name,
                                            entry.pos_filter);
    raw.provenance = entry.provenance;
    AlignResult aligned = align(raw, store);
    const std::string ds_tag = file_safe(entry.name);

    write_text(cfg.output_dir / ("integrity_" + ds_tag + ".txt"),
               integrity_check(aligned.dataset).to_delimited());
    if (!aligned.dropped.empty()) {
      write_text(cfg.output_dir / ("dropped_" + ds_tag + ".txt"),
                 aligned.dropped.to_delimited());
    }

    log("dataset '" + entry.name + "' (" + role_name(entry.role) + "): " +
        std::to_string(aligned.dataset.pairs.size()) + " pairs aligned, " +
        std::to_string(aligned.dropped.rows.size()) + " dropped");

    const uint64_t grid_seed = mix_seed(cfg.seed, hash_string(entry.name));
    GridResult grid = run_grid(aligned.dataset, store, cfg.grid, grid_seed,
                               TrainConfig{}, options.jobs);

    RunResults::Dataset ds;
    ds.dataset = entry.name;
    ds.role = role_name(entry.role);
    ds.provenance = provenance_name(entry.provenance);
    ds.n_pairs = static_cast<int>(aligned.dataset.pairs.size());
    ds.n_words = integrity_check(aligned.dataset).rows.back().words;
    ds.dropped_pairs = static_cast<int>(aligned.dropped.rows.size());
    ds.best_pearson = grid.best_pearson;
    ds.best_spearman = grid.best_spearman;
    for (const auto& cell : grid.cells) {
      ds.cells.push_back(summarize_cell(cell));
      ++outcome.cells_total;
      if (!cell.ok) ++outcome.cells_failed;
      log("  cell " + cell_tag(cell) + ": " +
          (cell.ok ? "mean_r=" + fmt_g(cell.score.mean_r) +
                         " mean_rho=" + fmt_g(cell.score.mean_rho)
                   : "failed (" + cell.error + ")"));
    }
    results.datasets.push_back(std::move(ds));

    export_factors(cfg.output_dir / "factors", ds_tag, grid,
                   options.export_gram);
    if (cfg.trace) {
      write_trace_files(cfg.output_dir / "trace", ds_tag, grid);
    }
    if (options.dump_distributions) {
      fs::create_directories(cfg.output_dir / "dumps");
      write_text(cfg.output_dir / "dumps" / (ds_tag + "__baseline.txt"),
                 distribution_dump(aligned.dataset, store).to_delimited());
    }

    if (entry.role == DatasetEntry::Role::all) {
      all_grid = std::move(grid);
      all_dataset = std::move(aligned.dataset);
      all_name = entry.name;
    }
  }

  for (const auto& entry : cfg.dataset_paths) {
    if (entry.role != DatasetEntry::Role::transfer_test) continue;

    SimilarityDataset raw = load_judgments(entry.path, cfg.scale, entry.name,
                                            entry.pos_filter);
    raw.provenance = entry.provenance;
    AlignResult aligned = align(raw, store);
    log("transfer dataset '" + entry.name + "': " +
        std::to_string(aligned.dataset.pairs.size()) + " pairs aligned");

    RunResults::Transfer transfer;
    transfer.dataset = entry.name;
    transfer.trained_on = all_name;
    if (!all_grid || (all_grid->best_pearson < 0 &&
                      all_grid->best_spearman < 0)) {
      transfer.error = "no scored cell in the all-role grid";
      results.transfers.push_back(std::move(transfer));
      continue;
    }
    try {
      const CorrelationReport base = baseline_full(aligned.dataset, store);
      transfer.base_n = base.n;
      transfer.base_r = base.r;
      transfer.base_rho = base.rho;
      transfer.base_p_r = base.p_r;
      transfer.base_p_rho = base.p_rho;

      if (all_grid->best_pearson >= 0) {
        const GridCell& cell =
            all_grid->cells[static_cast<size_t>(all_grid->best_pearson)];
        const AggregateScore agg =
            transfer_test(cell.models, aligned.dataset, store);
        transfer.pearson_lr = cell.learning_rate;
        transfer.pearson_k = cell.fold_count;
        transfer.mean_r = agg.mean_r;
        transfer.p_r = agg.p_r;
      }
      if (all_grid->best_spearman >= 0) {
        const GridCell& cell =
            all_grid->cells[static_cast<size_t>(all_grid->best_spearman)];
        const AggregateScore agg =
            transfer_test(cell.models, aligned.dataset, store);
        transfer.spearman_lr = cell.learning_rate;
        transfer.spearman_k = cell.fold_count;
        transfer.mean_rho = agg.mean_rho;
        transfer.p_rho = agg.p_rho;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::undefined_correlation) throw;
      transfer.error = e.what();
    }
    results.transfers.push_back(std::move(transfer));
  }

  outcome.results_path = cfg.output_dir / "results.json";
  save_results(outcome.results_path, results);

  const std::string stamp = timestamp_line();
  write_text(cfg.output_dir / "report_pearson.txt",
             stamp + render_correlation_table(results, CorrKind::pearson));
  write_text(cfg.output_dir / "report_spearman.txt",
             stamp + render_correlation_table(results, CorrKind::spearman));
  write_text(cfg.output_dir / "report_change.txt",
             stamp + render_percent_change_table(results));
  write_text(cfg.output_dir / "report_transfer.txt",
             stamp + render_transfer_table(results));

  log("results written to " + cfg.output_dir.string());
  return outcome;
}

}  // namespace metricsim
