#pragma once

#include <string>
#include <vector>

#include "dgama/matrix.hpp"

namespace dgama {

/// Round-trippable decimal rendering of a double ("%.17g"; NaN prints "nan").
std::string csv_double(double v);

/// Matrix as plain rows of comma-separated values, no header.
void write_matrix_csv(const std::string& path, const SymMatrix& m);
SymMatrix read_matrix_csv(const std::string& path);

/// Sample stream: one sample per line, p columns, no header.
void write_stream_csv(const std::string& path,
                      const std::vector<std::vector<double>>& samples);
std::vector<std::vector<double>> read_stream_csv(const std::string& path);

}  // namespace dgama
