#include "metricsim/embedding_store.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "metricsim/error.hpp"

namespace metricsim {

std::string normalize_word(std::string_view word) {
  size_t begin = 0, end = word.size();
  while (begin < end &&
         std::isspace(static_cast<unsigned char>(word[begin]))) {
    ++begin;
  }
  while (end > begin &&
         std::isspace(static_cast<unsigned char>(word[end - 1]))) {
    --end;
  }
  std::string out(word.substr(begin, end - begin));
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

bool EmbeddingStore::insert(std::string word, Eigen::VectorXd vec) {
  if (dim_ == 0) {
    dim_ = static_cast<int>(vec.size());
  } else if (static_cast<int>(vec.size()) != dim_) {
    fail(ErrorCode::dimension_mismatch,
         "store has dimension " + std::to_string(dim_) + " but '" + word +
             "' has " + std::to_string(vec.size()));
  }
  return map_.emplace(std::move(word), std::move(vec)).second;
}

bool EmbeddingStore::contains(std::string_view word) const {
  return find(word) != nullptr;
}

const Eigen::VectorXd* EmbeddingStore::find(std::string_view word) const {
  auto it = map_.find(std::string(word));
  return it == map_.end() ? nullptr : &it->second;
}

std::vector<std::string> EmbeddingStore::words_sorted() const {
  std::vector<std::string> words;
  words.reserve(map_.size());
  for (const auto& [word, vec] : map_) words.push_back(word);
  std::sort(words.begin(), words.end());
  return words;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  size_t i = 0;
  const size_t n = line.size();
  while (i < n) {
    while (i < n && (line[i] == ' ' || line[i] == '\t')) ++i;
    size_t j = i;
    while (j < n && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

double parse_double_or_fail(std::string_view token, size_t line_no) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    fail(ErrorCode::format, "line " + std::to_string(line_no) +
                                ": malformed number '" + std::string(token) +
                                "'");
  }
  if (!std::isfinite(value)) {
    fail(ErrorCode::format, "line " + std::to_string(line_no) +
                                ": non-finite value '" + std::string(token) +
                                "'");
  }
  return value;
}

bool looks_like_count_header(const std::vector<std::string_view>& tokens) {
  if (tokens.size() != 2) return false;
  for (const auto& t : tokens) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || v <= 0) {
      return false;
    }
  }
  return true;
}

}  // namespace

EmbeddingLoadResult load_embeddings_text(const std::filesystem::path& path,
                                         std::optional<int> expected_dim) {
  std::ifstream in(path);
  if (!in) {
    fail(ErrorCode::io, "cannot open embedding file " + path.string());
  }

  EmbeddingLoadStats stats;
  int dim = expected_dim.value_or(0);
  EmbeddingStore store(path.stem().string());
  std::string line;
  size_t line_no = 0;
  bool first_data_line = true;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;

    if (first_data_line && looks_like_count_header(tokens)) {
      stats.count_header_skipped = true;
      first_data_line = false;
      continue;
    }
    first_data_line = false;
    ++stats.lines;

    const int arity = static_cast<int>(tokens.size()) - 1;
    if (arity < 1) {
      fail(ErrorCode::format,
           "line " + std::to_string(line_no) + ": no vector components");
    }
    if (dim == 0) {
      dim = arity;
    } else if (arity != dim) {
      fail(ErrorCode::format, "line " + std::to_string(line_no) +
                                  ": expected " + std::to_string(dim) +
                                  " components, found " +
                                  std::to_string(arity));
    }

    Eigen::VectorXd vec(dim);
    for (int i = 0; i < dim; ++i) {
      vec[i] = parse_double_or_fail(tokens[i + 1], line_no);
    }
    if (vec.norm() == 0.0) {
      ++stats.skipped_zero_norm;
      continue;
    }
    std::string word = normalize_word(tokens[0]);
    if (word.empty()) {
      fail(ErrorCode::format,
           "line " + std::to_string(line_no) + ": empty word");
    }
    if (store.insert(std::move(word), std::move(vec))) {
      ++stats.parsed;
    } else {
      ++stats.skipped_duplicate;
    }
  }

  if (stats.parsed == 0) {
    fail(ErrorCode::format, "no embeddings parsed from " + path.string());
  }
  return EmbeddingLoadResult{std::move(store), stats};
}

void write_embeddings_text(const std::filesystem::path& path,
                           const EmbeddingStore& store) {
  std::ofstream out(path);
  if (!out) {
    fail(ErrorCode::io, "cannot write embedding file " + path.string());
  }
  char buf[64];
  for (const auto& word : store.words_sorted()) {
    const Eigen::VectorXd& vec = *store.find(word);
    out << word;
    for (Eigen::Index i = 0; i < vec.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", vec[i]);
      out << ' ' << buf;
    }
    out << '\n';
  }
  if (!out) {
    fail(ErrorCode::io, "failed writing embedding file " + path.string());
  }
}

}  // namespace metricsim
