#pragma once

#include <Eigen/Core>
#include <filesystem>

namespace metricsim {

// Dense matrix text format: one row per line, space-separated decimals,
// 17 significant digits (round-trips doubles bit-exactly).
void save_matrix_text(const std::filesystem::path& path,
                      const Eigen::MatrixXd& m);

Eigen::MatrixXd load_matrix_text(const std::filesystem::path& path);

}  // namespace metricsim
