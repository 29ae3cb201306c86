#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "metricsim/metric.hpp"
#include "metricsim/rng.hpp"

namespace testutil {

// Self-deleting temporary directory.
class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    const auto base = std::filesystem::temp_directory_path();
    do {
      path_ = base / ("metricsim_test_" + std::to_string(rng()));
    } while (std::filesystem::exists(path_));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream out(path);
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline metricsim::Embedding random_embedding(metricsim::Rng& rng, int dim,
                                             std::string word = "w") {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = rng.normal();
  return metricsim::Embedding{std::move(word), std::move(v)};
}

inline metricsim::MetricFactor random_factor(metricsim::Rng& rng, int dim) {
  Eigen::MatrixXd m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) m(r, c) = rng.normal();
  }
  return metricsim::MetricFactor(std::move(m));
}

}  // namespace testutil
