#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "sparseica/types.hpp"

namespace sparseica {

namespace detail {

/// Shortest round-trip decimal form, locale independent.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& token) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  while (first != last && (*first == ' ' || *first == '\t')) ++first;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc()) {
    throw std::invalid_argument("could not parse number: '" + token + "'");
  }
  return v;
}

}  // namespace detail

inline void write_matrix_csv(std::ostream& os, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) os << ',';
      os << detail::format_double(m(i, j));
    }
    os << '\n';
  }
}

inline Matrix read_matrix_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string token;
    while (std::getline(ss, token, ',')) row.push_back(detail::parse_double(token));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::invalid_argument("csv: ragged rows");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("csv: empty input");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

inline void save_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream f(path);
  if (!f) throw std::invalid_argument("cannot open for writing: " + path);
  write_matrix_csv(f, m);
}

inline Matrix load_matrix_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open: " + path);
  return read_matrix_csv(f);
}

inline nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return nlohmann::json{{"n", m.rows()}, {"rows", std::move(rows)}};
}

inline Matrix matrix_from_json(const nlohmann::json& j) {
  const auto& rows = j.at("rows");
  const int n = j.at("n").get<int>();
  if (static_cast<int>(rows.size()) != n) {
    throw std::invalid_argument("matrix json: row count does not match n");
  }
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& row = rows.at(i);
    if (static_cast<int>(row.size()) != n) {
      throw std::invalid_argument("matrix json: ragged rows");
    }
    for (int k = 0; k < n; ++k) m(i, k) = row.at(k).get<double>();
  }
  return m;
}

/// Patterns serialize as CSV of 0/1 cells.
inline void write_pattern_csv(std::ostream& os, const SupportPattern& xi) {
  for (int i = 0; i < xi.dim(); ++i) {
    for (int j = 0; j < xi.dim(); ++j) {
      if (j > 0) os << ',';
      os << (xi.at(i, j) ? '1' : '0');
    }
    os << '\n';
  }
}

inline SupportPattern read_pattern_csv(std::istream& is) {
  Matrix m = read_matrix_csv(is);
  if (m.rows() != m.cols()) throw std::invalid_argument("pattern csv: must be square");
  BoolGrid mask = m.array() != 0.0;
  return SupportPattern(mask);
}

}  // namespace sparseica
