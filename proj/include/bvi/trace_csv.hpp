#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bvi/algorithms.hpp"

namespace bvi {

inline constexpr const char* kTraceHeader = "n,x,y,z,w,u,lambda,step_norm,xy_residual,phi_to_solution";

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double v);
std::string format_vector(const Vector& v);

/// Parsed form of one trace line. Columns that do not apply are empty.
struct TraceCsvRow {
  std::size_t n = 0;
  Vector x;
  Vector y;
  std::optional<Vector> z;
  std::optional<Vector> w;
  std::optional<Vector> u;
  double lambda = 0.0;
  double step_norm = 0.0;
  double xy_residual = 0.0;
  std::optional<double> phi_to_solution;

  friend bool operator==(const TraceCsvRow&, const TraceCsvRow&) = default;
};

TraceCsvRow to_csv_row(const IterateRow& row);

void write_trace_csv(std::ostream& os, const IterateTrace& trace);
std::string trace_csv_string(const IterateTrace& trace);

/// Throws ConfigError on a wrong header or malformed line.
std::vector<TraceCsvRow> parse_trace_csv(std::istream& is);

}  // namespace bvi
