#include "dgama/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dgama {

std::string csv_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::vector<std::vector<double>> read_rows(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open csv file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      std::size_t pos = 0;
      double v;
      try {
        v = std::stod(cell, &pos);
      } catch (const std::exception&) {
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": expected a number, got '" + cell + "'");
      }
      if (pos != cell.size())
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": expected a number, got '" + cell + "'");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

void write_matrix_csv(const std::string& path, const SymMatrix& m) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write file: " + path);
  for (int i = 0; i < m.dim(); ++i) {
    for (int j = 0; j < m.dim(); ++j) {
      if (j) f << ',';
      f << csv_double(m(i, j));
    }
    f << '\n';
  }
}

SymMatrix read_matrix_csv(const std::string& path) {
  auto rows = read_rows(path);
  const int p = static_cast<int>(rows.size());
  for (const auto& row : rows)
    if (static_cast<int>(row.size()) != p)
      throw DimensionMismatch("matrix csv is not square: " + path);
  Matrix m(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) m(i, j) = rows[i][j];
  return symmetrize(m);
}

void write_stream_csv(const std::string& path,
                      const std::vector<std::vector<double>>& samples) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write file: " + path);
  for (const auto& x : samples) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (j) f << ',';
      f << csv_double(x[j]);
    }
    f << '\n';
  }
}

std::vector<std::vector<double>> read_stream_csv(const std::string& path) {
  auto rows = read_rows(path);
  for (const auto& row : rows)
    if (row.size() != rows.front().size())
      throw DimensionMismatch("stream csv has ragged rows: " + path);
  return rows;
}

}  // namespace dgama
