#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "metricsim/error.hpp"
#include "metricsim/report.hpp"

using namespace metricsim;

namespace {

RunResults sample_results() {
  RunResults results;
  results.representation = "embeddings-a";
  results.seed = 9;

  RunResults::Dataset ds;
  ds.dataset = "clothing";
  ds.role = "per-hypernym";
  ds.provenance = "plain";
  ds.n_pairs = 406;
  ds.n_words = 29;
  ds.best_pearson = 0;
  ds.best_spearman = 1;

  RunResults::Cell good;
  good.lr = 1e-6;
  good.k = 5;
  good.ok = true;
  good.mean_r = 0.550;
  good.mean_rho = 0.436;
  good.base_r = 0.141;
  good.base_rho = 0.184;
  good.p_r = 0.001;
  good.p_rho = 0.2;
  good.base_p_r = 0.3;
  good.base_p_rho = 0.4;
  RunResults::PerFold fold;
  fold.fold = 1;
  fold.n = 81;
  fold.r = 0.55;
  fold.rho = 0.436;
  fold.epochs_run = 120;
  fold.stopped_early = true;
  fold.best_val_loss = 0.05;
  good.per_fold.push_back(fold);

  RunResults::Cell second = good;
  second.lr = 1e-5;
  second.k = 6;
  second.mean_rho = 0.5;

  ds.cells = {good, second};
  results.datasets.push_back(ds);

  RunResults::Dataset failed;
  failed.dataset = "broken";
  failed.role = "per-hypernym";
  failed.provenance = "plain";
  RunResults::Cell bad;
  bad.lr = 1e-5;
  bad.k = 5;
  bad.ok = false;
  bad.error = "fold 2: divergence: non-finite loss at epoch 3";
  failed.cells = {bad};
  results.datasets.push_back(failed);

  RunResults::Transfer transfer;
  transfer.dataset = "ws";
  transfer.trained_on = "all-hypernyms";
  transfer.pearson_lr = 1e-6;
  transfer.pearson_k = 7;
  transfer.mean_r = 0.487;
  transfer.p_r = 0.001;
  transfer.spearman_lr = 1e-6;
  transfer.spearman_k = 7;
  transfer.mean_rho = 0.519;
  transfer.p_rho = 0.002;
  transfer.base_n = 353;
  transfer.base_r = 0.239;
  transfer.base_rho = 0.267;
  transfer.base_p_r = 0.01;
  transfer.base_p_rho = 0.01;
  results.transfers.push_back(transfer);
  return results;
}

}  // namespace

TEST_CASE("percent change formula") {
  CHECK(percent_change_rounded(0.550, 0.141) == 290);
  CHECK(percent_change_rounded(0.637, 0.654) == -3);
  CHECK(percent_change_rounded(0.5, 0.5) == 0);
  // absolute values enter the formula
  CHECK(percent_change_rounded(-0.6, 0.3) == 100);
  CHECK(percent_change_rounded(0.3, -0.6) == -50);
  CHECK_THROWS_AS(percent_change_rounded(0.5, 0.0), Error);
  CHECK_THROWS_AS(
      percent_change_rounded(std::numeric_limits<double>::quiet_NaN(), 0.5),
      Error);
}

TEST_CASE("results JSON round-trip preserves values and NaNs") {
  const RunResults original = sample_results();
  const std::string text = results_to_json(original);
  const RunResults back = results_from_json(text);

  CHECK(back.representation == original.representation);
  CHECK(back.seed == original.seed);
  REQUIRE(back.datasets.size() == 2);
  const auto& cell = back.datasets[0].cells[0];
  CHECK(cell.lr == 1e-6);
  CHECK(cell.k == 5);
  CHECK(cell.mean_r == 0.550);
  CHECK(cell.base_rho == 0.184);
  REQUIRE(cell.per_fold.size() == 1);
  CHECK(cell.per_fold[0].epochs_run == 120);
  CHECK(cell.per_fold[0].stopped_early);
  // NaN fields (never filled on the failed cell) serialize as null
  CHECK(std::isnan(back.datasets[1].cells[0].mean_r));
  CHECK(back.datasets[1].cells[0].error ==
        "fold 2: divergence: non-finite loss at epoch 3");
  REQUIRE(back.transfers.size() == 1);
  CHECK(back.transfers[0].mean_r == 0.487);
  CHECK(back.transfers[0].base_n == 353);

  // required field names are spelled out in the document
  for (const char* key :
       {"\"dataset\"", "\"representation\"", "\"lr\"", "\"k\"", "\"mean_r\"",
        "\"mean_rho\"", "\"base_r\"", "\"base_rho\"", "\"p_r\"",
        "\"p_rho\""}) {
    CHECK(text.find(key) != std::string::npos);
  }
}

TEST_CASE("correlation table renders flags and failures") {
  const std::string table =
      render_correlation_table(sample_results(), CorrKind::pearson);
  CHECK(table.find("clothing\tembeddings-a\t1e-06\t5\t0.550\t0.141") !=
        std::string::npos);
  // p_model < 0.05 yes, p_base no, model above base
  CHECK(table.find("\tyes\tno\tyes\n") != std::string::npos);
  CHECK(table.find("broken\tembeddings-a\tfailed\tfold 2") !=
        std::string::npos);

  const std::string rho_table =
      render_correlation_table(sample_results(), CorrKind::spearman);
  // spearman table uses the spearman-best cell (index 1)
  CHECK(rho_table.find("1e-05\t6\t0.500") != std::string::npos);
}

TEST_CASE("percent change table uses per-kind best cells") {
  const std::string table = render_percent_change_table(sample_results());
  // pearson side: (0.550 - 0.141)/0.141 -> 290
  CHECK(table.find("clothing\t290\t1e-06\t5\t") != std::string::npos);
  // spearman side from the other cell: (0.5 - 0.184)/0.184 -> 172
  CHECK(table.find("\t172\t1e-05\t6\n") != std::string::npos);
  CHECK(table.find("broken\tfailed") != std::string::npos);
}

TEST_CASE("transfer table") {
  const std::string table = render_transfer_table(sample_results());
  CHECK(table.find("ws\tall-hypernyms\t0.487\t0.239\t0.519\t0.267") !=
        std::string::npos);
  CHECK(table.find("lr=1e-06,k=7") != std::string::npos);
}

TEST_CASE("save and load results files") {
  testutil::TempDir tmp;
  const auto path = tmp.path() / "results.json";
  save_results(path, sample_results());
  const RunResults back = load_results(path);
  CHECK(back.datasets.size() == 2);
  CHECK_THROWS_AS(load_results(tmp.path() / "absent.json"), Error);
  testutil::write_file(path, "{not json");
  CHECK_THROWS_AS(load_results(path), Error);
}
