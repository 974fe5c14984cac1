// Copyright 2026 the seqde authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SEQDE_CSV_HPP
#define SEQDE_CSV_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "seqde/errors.hpp"

namespace seqde::csv {

// Shortest text form that round-trips a double exactly.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

inline std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline double parse_double(const std::string& s, const std::string& context) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw MalformedTable("cannot parse '" + s + "' as a number in " + context);
  }
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

inline Table read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedTable("cannot open '" + path + "'");
  Table table;
  std::string line;
  if (!std::getline(in, line)) throw MalformedTable("'" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  table.header = split_line(line);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != table.header.size())
      throw MalformedTable("'" + path + "' line " + std::to_string(lineno) +
                           " has " + std::to_string(cells.size()) +
                           " columns, expected " +
                           std::to_string(table.header.size()));
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells)
      row.push_back(parse_double(c, path + " line " + std::to_string(lineno)));
    table.rows.push_back(std::move(row));
  }
  return table;
}

inline void write_table(const std::string& path,
                        const std::vector<std::string>& header,
                        const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  for (std::size_t c = 0; c < header.size(); ++c)
    out << (c ? "," : "") << header[c];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      out << (c ? "," : "") << format_double(row[c]);
    out << "\n";
  }
  if (!out) throw Error("failed while writing '" + path + "'");
}

// A function or density tabulated on a full tensor grid, stored row-major
// with the last coordinate varying fastest.
struct TensorTable {
  std::vector<Eigen::VectorXd> axes;
  Eigen::VectorXd values;

  int dimension() const { return static_cast<int>(axes.size()); }

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= static_cast<std::size_t>(a.size());
    return n;
  }
};

// Loads a CSV whose columns are theta_1..theta_m followed by one value
// column. Rows must enumerate a complete tensor grid in row-major order.
inline TensorTable read_tensor_grid(const std::string& path) {
  const Table table = read_table(path);
  if (table.header.size() < 2)
    throw MalformedTable("'" + path + "' needs at least one coordinate column "
                         "and one value column");
  const int m = static_cast<int>(table.header.size()) - 1;
  for (int d = 0; d < m; ++d) {
    const std::string expected = "theta_" + std::to_string(d + 1);
    if (table.header[d] != expected)
      throw MalformedTable("'" + path + "' column " + std::to_string(d + 1) +
                           " is '" + table.header[d] + "', expected '" +
                           expected + "'");
  }
  if (table.rows.empty()) throw MalformedTable("'" + path + "' has no rows");

  TensorTable out;
  out.axes.resize(m);
  for (int d = 0; d < m; ++d) {
    std::vector<double> axis;
    for (const auto& row : table.rows) {
      if (!std::isfinite(row[d]))
        throw MalformedTable("'" + path + "' has a non-finite coordinate");
      if (std::find(axis.begin(), axis.end(), row[d]) == axis.end())
        axis.push_back(row[d]);
    }
    std::sort(axis.begin(), axis.end());
    if (axis.size() < 2)
      throw MalformedTable("'" + path + "' axis " + std::to_string(d + 1) +
                           " has fewer than 2 distinct values");
    out.axes[d] = Eigen::Map<Eigen::VectorXd>(axis.data(),
                                              static_cast<long>(axis.size()));
  }

  const std::size_t expected_rows = out.size();
  if (table.rows.size() != expected_rows)
    throw MalformedTable("'" + path + "' has " +
                         std::to_string(table.rows.size()) +
                         " rows but the axes imply " +
                         std::to_string(expected_rows));

  // verify row-major ordering and collect values
  out.values.resize(static_cast<long>(expected_rows));
  std::vector<std::size_t> stride(m, 1);
  for (int d = m - 2; d >= 0; --d)
    stride[d] = stride[d + 1] * static_cast<std::size_t>(out.axes[d + 1].size());
  for (std::size_t r = 0; r < expected_rows; ++r) {
    for (int d = 0; d < m; ++d) {
      const std::size_t idx =
          (r / stride[d]) % static_cast<std::size_t>(out.axes[d].size());
      const double want = out.axes[d][static_cast<long>(idx)];
      if (table.rows[r][d] != want)
        throw MalformedTable("'" + path + "' row " + std::to_string(r + 2) +
                             " is out of row-major grid order");
    }
    const double v = table.rows[r][m];
    if (!std::isfinite(v))
      throw MalformedTable("'" + path + "' has a non-finite value at row " +
                           std::to_string(r + 2));
    out.values[static_cast<long>(r)] = v;
  }
  return out;
}

inline void write_tensor_grid(const std::string& path, const TensorTable& t,
                              const std::string& value_column) {
  const int m = t.dimension();
  std::vector<std::string> header;
  for (int d = 0; d < m; ++d) header.push_back("theta_" + std::to_string(d + 1));
  header.push_back(value_column);
  std::vector<std::vector<double>> rows;
  const std::size_t n = t.size();
  rows.reserve(n);
  std::vector<std::size_t> stride(m, 1);
  for (int d = m - 2; d >= 0; --d)
    stride[d] = stride[d + 1] * static_cast<std::size_t>(t.axes[d + 1].size());
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<double> row(m + 1);
    for (int d = 0; d < m; ++d) {
      const std::size_t idx =
          (r / stride[d]) % static_cast<std::size_t>(t.axes[d].size());
      row[d] = t.axes[d][static_cast<long>(idx)];
    }
    row[m] = t.values[static_cast<long>(r)];
    rows.push_back(std::move(row));
  }
  write_table(path, header, rows);
}

} // namespace seqde::csv

#endif // SEQDE_CSV_HPP
