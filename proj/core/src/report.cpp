#include "metricsim/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "metricsim/error.hpp"

namespace metricsim {

namespace {

using json = nlohmann::ordered_json;

json num(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

double get_num(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return j.at(key).get<double>();
}

json fold_to_json(const RunResults::PerFold& f) {
  json j;
  j["fold"] = f.fold;
  j["n"] = f.n;
  j["r"] = num(f.r);
  j["rho"] = num(f.rho);
  j["p_r"] = num(f.p_r);
  j["p_rho"] = num(f.p_rho);
  j["base_r"] = num(f.base_r);
  j["base_rho"] = num(f.base_rho);
  j["base_p_r"] = num(f.base_p_r);
  j["base_p_rho"] = num(f.base_p_rho);
  j["epochs_run"] = f.epochs_run;
  j["stopped_early"] = f.stopped_early;
  j["best_val_loss"] = num(f.best_val_loss);
  j["final_train_loss"] = num(f.final_train_loss);
  return j;
}

RunResults::PerFold fold_from_json(const json& j) {
  RunResults::PerFold f;
  f.fold = j.at("fold").get<int>();
  f.n = j.at("n").get<long>();
  f.r = get_num(j, "r");
  f.rho = get_num(j, "rho");
  f.p_r = get_num(j, "p_r");
  f.p_rho = get_num(j, "p_rho");
  f.base_r = get_num(j, "base_r");
  f.base_rho = get_num(j, "base_rho");
  f.base_p_r = get_num(j, "base_p_r");
  f.base_p_rho = get_num(j, "base_p_rho");
  f.epochs_run = j.at("epochs_run").get<int>();
  f.stopped_early = j.at("stopped_early").get<bool>();
  f.best_val_loss = get_num(j, "best_val_loss");
  f.final_train_loss = get_num(j, "final_train_loss");
  return f;
}

json cell_to_json(const RunResults::Cell& c) {
  json j;
  j["lr"] = c.lr;
  j["k"] = c.k;
  j["ok"] = c.ok;
  j["error"] = c.error;
  j["mean_r"] = num(c.mean_r);
  j["mean_rho"] = num(c.mean_rho);
  j["base_r"] = num(c.base_r);
  j["base_rho"] = num(c.base_rho);
  j["p_r"] = num(c.p_r);
  j["p_rho"] = num(c.p_rho);
  j["base_p_r"] = num(c.base_p_r);
  j["base_p_rho"] = num(c.base_p_rho);
  j["per_fold"] = json::array();
  for (const auto& f : c.per_fold) j["per_fold"].push_back(fold_to_json(f));
  j["diagnostics"] = c.diagnostics;
  return j;
}

RunResults::Cell cell_from_json(const json& j) {
  RunResults::Cell c;
  c.lr = j.at("lr").get<double>();
  c.k = j.at("k").get<int>();
  c.ok = j.at("ok").get<bool>();
  c.error = j.at("error").get<std::string>();
  c.mean_r = get_num(j, "mean_r");
  c.mean_rho = get_num(j, "mean_rho");
  c.base_r = get_num(j, "base_r");
  c.base_rho = get_num(j, "base_rho");
  c.p_r = get_num(j, "p_r");
  c.p_rho = get_num(j, "p_rho");
  c.base_p_r = get_num(j, "base_p_r");
  c.base_p_rho = get_num(j, "base_p_rho");
  for (const auto& f : j.at("per_fold")) c.per_fold.push_back(fold_from_json(f));
  c.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
  return c;
}

json transfer_to_json(const RunResults::Transfer& t) {
  json j;
  j["dataset"] = t.dataset;
  j["trained_on"] = t.trained_on;
  j["error"] = t.error;
  j["pearson_lr"] = t.pearson_lr;
  j["pearson_k"] = t.pearson_k;
  j["mean_r"] = num(t.mean_r);
  j["p_r"] = num(t.p_r);
  j["spearman_lr"] = t.spearman_lr;
  j["spearman_k"] = t.spearman_k;
  j["mean_rho"] = num(t.mean_rho);
  j["p_rho"] = num(t.p_rho);
  j["base_n"] = t.base_n;
  j["base_r"] = num(t.base_r);
  j["base_rho"] = num(t.base_rho);
  j["base_p_r"] = num(t.base_p_r);
  j["base_p_rho"] = num(t.base_p_rho);
  return j;
}

RunResults::Transfer transfer_from_json(const json& j) {
  RunResults::Transfer t;
  t.dataset = j.at("dataset").get<std::string>();
  t.trained_on = j.at("trained_on").get<std::string>();
  t.error = j.at("error").get<std::string>();
  t.pearson_lr = j.at("pearson_lr").get<double>();
  t.pearson_k = j.at("pearson_k").get<int>();
  t.mean_r = get_num(j, "mean_r");
  t.p_r = get_num(j, "p_r");
  t.spearman_lr = j.at("spearman_lr").get<double>();
  t.spearman_k = j.at("spearman_k").get<int>();
  t.mean_rho = get_num(j, "mean_rho");
  t.p_rho = get_num(j, "p_rho");
  t.base_n = j.at("base_n").get<long>();
  t.base_r = get_num(j, "base_r");
  t.base_rho = get_num(j, "base_rho");
  t.base_p_r = get_num(j, "base_p_r");
  t.base_p_rho = get_num(j, "base_p_rho");
  return t;
}

std::string fmt_corr(double v) {
  if (std::isnan(v)) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string fmt_p(double v) {
  if (std::isnan(v)) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string fmt_lr(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string sig_flag(double p) {
  if (std::isnan(p)) return "n/a";
  return p < 0.05 ? "yes" : "no";
}

std::string gt_flag(double model, double base) {
  if (std::isnan(model) || std::isnan(base)) return "n/a";
  return model > base ? "yes" : "no";
}

const RunResults::Cell* best_cell(const RunResults::Dataset& ds,
                                  CorrKind kind) {
  const int idx = kind == CorrKind::pearson ? ds.best_pearson
                                            : ds.best_spearman;
  if (idx < 0 || idx >= static_cast<int>(ds.cells.size())) return nullptr;
  return &ds.cells[static_cast<size_t>(idx)];
}

std::string failure_reason(const RunResults::Dataset& ds) {
  for (const auto& cell : ds.cells) {
    if (!cell.ok && !cell.error.empty()) return cell.error;
  }
  return "no cell scored";
}

}  // namespace

std::string results_to_json(const RunResults& results) {
  json j;
  j["schema"] = results.schema;
  j["representation"] = results.representation;
  j["seed"] = results.seed;
  j["p_policy"] = results.p_policy;
  j["datasets"] = json::array();
  for (const auto& ds : results.datasets) {
    json d;
    d["dataset"] = ds.dataset;
    d["role"] = ds.role;
    d["provenance"] = ds.provenance;
    d["n_pairs"] = ds.n_pairs;
    d["n_words"] = ds.n_words;
    d["dropped_pairs"] = ds.dropped_pairs;
    d["best_pearson"] = ds.best_pearson;
    d["best_spearman"] = ds.best_spearman;
    d["cells"] = json::array();
    for (const auto& c : ds.cells) d["cells"].push_back(cell_to_json(c));
    j["datasets"].push_back(std::move(d));
  }
  j["transfer"] = json::array();
  for (const auto& t : results.transfers) {
    j["transfer"].push_back(transfer_to_json(t));
  }
  return j.dump(2) + "\n";
}

RunResults results_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorCode::format, std::string("cannot parse results JSON: ") +
                                e.what());
  }
  RunResults results;
  try {
    results.schema = j.at("schema").get<std::string>();
    results.representation = j.at("representation").get<std::string>();
    results.seed = j.at("seed").get<uint64_t>();
    results.p_policy = j.at("p_policy").get<std::string>();
    for (const auto& d : j.at("datasets")) {
      RunResults::Dataset ds;
      ds.dataset = d.at("dataset").get<std::string>();
      ds.role = d.at("role").get<std::string>();
      ds.provenance = d.at("provenance").get<std::string>();
      ds.n_pairs = d.at("n_pairs").get<int>();
      ds.n_words = d.at("n_words").get<int>();
      ds.dropped_pairs = d.at("dropped_pairs").get<int>();
      ds.best_pearson = d.at("best_pearson").get<int>();
      ds.best_spearman = d.at("best_spearman").get<int>();
      for (const auto& c : d.at("cells")) {
        ds.cells.push_back(cell_from_json(c));
      }
      results.datasets.push_back(std::move(ds));
    }
    for (const auto& t : j.at("transfer")) {
      results.transfers.push_back(transfer_from_json(t));
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::format,
         std::string("results JSON missing fields: ") + e.what());
  }
  return results;
}

void save_results(const std::filesystem::path& path,
                  const RunResults& results) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot write " + path.string());
  out << results_to_json(results);
  if (!out) fail(ErrorCode::io, "failed writing " + path.string());
}

RunResults load_results(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return results_from_json(buffer.str());
}

long percent_change_rounded(double model, double base) {
  if (std::isnan(model) || std::isnan(base)) {
    fail(ErrorCode::precondition, "percent change of undefined correlation");
  }
  const double abs_base = std::fabs(base);
  if (abs_base == 0.0) {
    fail(ErrorCode::precondition, "percent change against a zero baseline");
  }
  return std::lround(100.0 * (std::fabs(model) - abs_base) / abs_base);
}

namespace {

std::string percent_or_na(double model, double base) {
  if (std::isnan(model) || std::isnan(base) || std::fabs(base) == 0.0) {
    return "n/a";
  }
  return std::to_string(percent_change_rounded(model, base));
}

}  // namespace

std::string render_correlation_table(const RunResults& results,
                                     CorrKind kind) {
  std::string out =
      std::string("# correlation report (") +
      (kind == CorrKind::pearson ? "pearson" : "spearman") +
      "), best grid cell per dataset; significant = p < 0.05\n";
  out +=
      "dataset\trepresentation\tlr\tk\tmodel\tbase\tp_model\tp_base\t"
      "significant_model\tsignificant_base\tmodel_gt_base\n";
  for (const auto& ds : results.datasets) {
    const RunResults::Cell* cell = best_cell(ds, kind);
    if (cell == nullptr) {
      out += ds.dataset + "\t" + results.representation + "\tfailed\t" +
             failure_reason(ds) + "\n";
      continue;
    }
    const bool pearson = kind == CorrKind::pearson;
    const double model = pearson ? cell->mean_r : cell->mean_rho;
    const double base = pearson ? cell->base_r : cell->base_rho;
    const double p_model = pearson ? cell->p_r : cell->p_rho;
    const double p_base = pearson ? cell->base_p_r : cell->base_p_rho;
    out += ds.dataset + "\t" + results.representation + "\t" +
           fmt_lr(cell->lr) + "\t" + std::to_string(cell->k) + "\t" +
           fmt_corr(model) + "\t" + fmt_corr(base) + "\t" + fmt_p(p_model) +
           "\t" + fmt_p(p_base) + "\t" + sig_flag(p_model) + "\t" +
           sig_flag(p_base) + "\t" + gt_flag(model, base) + "\n";
  }
  return out;
}

std::string render_percent_change_table(const RunResults& results) {
  std::string out =
      "# percent change (|model| - |base|) / |base| at the best cell of "
      "each correlation kind\n";
  out +=
      "dataset\tpearson_pct\tpearson_lr\tpearson_k\tspearman_pct\t"
      "spearman_lr\tspearman_k\n";
  for (const auto& ds : results.datasets) {
    const RunResults::Cell* pc = best_cell(ds, CorrKind::pearson);
    const RunResults::Cell* sc = best_cell(ds, CorrKind::spearman);
    if (pc == nullptr && sc == nullptr) {
      out += ds.dataset + "\tfailed\t" + failure_reason(ds) + "\n";
      continue;
    }
    out += ds.dataset + "\t";
    if (pc != nullptr) {
      out += percent_or_na(pc->mean_r, pc->base_r) + "\t" + fmt_lr(pc->lr) +
             "\t" + std::to_string(pc->k);
    } else {
      out += "n/a\t-\t-";
    }
    out += "\t";
    if (sc != nullptr) {
      out += percent_or_na(sc->mean_rho, sc->base_rho) + "\t" +
             fmt_lr(sc->lr) + "\t" + std::to_string(sc->k);
    } else {
      out += "n/a\t-\t-";
    }
    out += "\n";
  }
  return out;
}

std::string render_transfer_table(const RunResults& results) {
  std::string out =
      "# transfer test: all-role fold models scored on entire test "
      "datasets, against the full-set baseline\n";
  out +=
      "dataset\ttrained_on\tmodel_r\tbase_r\tmodel_rho\tbase_rho\t"
      "pearson_cell\tspearman_cell\tsig_model_r\tsig_base_r\t"
      "sig_model_rho\tsig_base_rho\tmodel_gt_base_r\tmodel_gt_base_rho\n";
  for (const auto& t : results.transfers) {
    if (!t.error.empty()) {
      out += t.dataset + "\t" + t.trained_on + "\tfailed\t" + t.error + "\n";
      continue;
    }
    out += t.dataset + "\t" + t.trained_on + "\t" + fmt_corr(t.mean_r) +
           "\t" + fmt_corr(t.base_r) + "\t" + fmt_corr(t.mean_rho) + "\t" +
           fmt_corr(t.base_rho) + "\tlr=" + fmt_lr(t.pearson_lr) +
           ",k=" + std::to_string(t.pearson_k) +
           "\tlr=" + fmt_lr(t.spearman_lr) +
           ",k=" + std::to_string(t.spearman_k) + "\t" + sig_flag(t.p_r) +
           "\t" + sig_flag(t.base_p_r) + "\t" + sig_flag(t.p_rho) + "\t" +
           sig_flag(t.base_p_rho) + "\t" + gt_flag(t.mean_r, t.base_r) +
           "\t" + gt_flag(t.mean_rho, t.base_rho) + "\n";
  }
  return out;
}

}  // namespace metricsim
