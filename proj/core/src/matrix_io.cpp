#include "metricsim/matrix_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "metricsim/error.hpp"

namespace metricsim {

void save_matrix_text(const std::filesystem::path& path,
                      const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) {
    fail(ErrorCode::io, "cannot write matrix file " + path.string());
  }
  char buf[64];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(r, c));
      if (c) out << ' ';
      out << buf;
    }
    out << '\n';
  }
  if (!out) {
    fail(ErrorCode::io, "failed writing matrix file " + path.string());
  }
}

Eigen::MatrixXd load_matrix_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    fail(ErrorCode::io, "cannot open matrix file " + path.string());
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p < end) {
      while (p < end && (*p == ' ' || *p == '\t')) ++p;
      if (p >= end) break;
      double v = 0.0;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc{}) {
        fail(ErrorCode::format,
             "line " + std::to_string(line_no) + ": malformed number");
      }
      row.push_back(v);
      p = next;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      fail(ErrorCode::format, "line " + std::to_string(line_no) +
                                  ": ragged row of " +
                                  std::to_string(row.size()) + " values");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    fail(ErrorCode::format, "empty matrix file " + path.string());
  }
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (size_t r = 0; r < rows.size(); ++r) {
    for (size_t c = 0; c < rows[r].size(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rows[r][c];
    }
  }
  return m;
}

}  // namespace metricsim
