#include "bvi/trace_csv.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "bvi/errors.hpp"

namespace bvi {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError("malformed number in trace: '" + s + "'");
  return v;
}

Vector parse_vector(const std::string& s) {
  if (s.empty()) throw ConfigError("empty vector cell in trace");
  std::vector<double> vals;
  for (const auto& part : split(s, ';')) vals.push_back(parse_double(part));
  return Vector(std::move(vals));
}

std::optional<Vector> parse_optional_vector(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_vector(s);
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  if (ec != std::errc()) throw Error("number formatting failed");
  return std::string(buf.data(), ptr);
}

std::string format_vector(const Vector& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out.push_back(';');
    out += format_double(v[i]);
  }
  return out;
}

TraceCsvRow to_csv_row(const IterateRow& row) {
  return {row.n, row.x, row.y, row.z, row.w, row.u, row.lambda, row.step_norm, row.xy_residual, row.phi};
}

void write_trace_csv(std::ostream& os, const IterateTrace& trace) {
  os << kTraceHeader << '\n';
  auto opt = [](const std::optional<Vector>& v) { return v ? format_vector(*v) : std::string(); };
  for (const auto& row : trace.rows) {
    os << row.n << ',' << format_vector(row.x) << ',' << format_vector(row.y) << ',' << opt(row.z) << ','
       << opt(row.w) << ',' << opt(row.u) << ',' << format_double(row.lambda) << ','
       << format_double(row.step_norm) << ',' << format_double(row.xy_residual) << ','
       << (row.phi ? format_double(*row.phi) : std::string()) << '\n';
  }
}

std::string trace_csv_string(const IterateTrace& trace) {
  std::ostringstream os;
  write_trace_csv(os, trace);
  return os.str();
}

std::vector<TraceCsvRow> parse_trace_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kTraceHeader) throw ConfigError("trace header mismatch");
  std::vector<TraceCsvRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 10) throw ConfigError("trace line has " + std::to_string(cells.size()) + " cells");
    TraceCsvRow r;
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(cells[0].data(), cells[0].data() + cells[0].size(), n);
    if (ec != std::errc() || ptr != cells[0].data() + cells[0].size()) throw ConfigError("malformed row index");
    r.n = n;
    r.x = parse_vector(cells[1]);
    r.y = parse_vector(cells[2]);
    r.z = parse_optional_vector(cells[3]);
    r.w = parse_optional_vector(cells[4]);
    r.u = parse_optional_vector(cells[5]);
    r.lambda = parse_double(cells[6]);
    r.step_norm = parse_double(cells[7]);
    r.xy_residual = parse_double(cells[8]);
    if (!cells[9].empty()) r.phi_to_solution = parse_double(cells[9]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace bvi
