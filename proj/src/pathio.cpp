#include "fbmg/pathio.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

namespace fbmg {
namespace {

constexpr const char* kModule = "pathio";

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
  throw InputFormatError(kModule, source + ":" + std::to_string(line) + ": " + what);
}

bool parse_double(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw NumericalError(kModule, "number formatting failed");
  return std::string(buf, ptr);
}

void write_path_csv(const SampledPath& path, std::ostream& out) {
  std::string text = "t,value\n";
  for (std::size_t i = 0; i < path.size(); ++i) {
    text += format_double(path.grid().t(i));
    text += ',';
    text += format_double(path[i]);
    text += '\n';
  }
  out << text;
}

void write_path_file(const SampledPath& path, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw InputFormatError(kModule, "cannot open " + file.string() + " for writing");
  write_path_csv(path, out);
  if (!out) throw InputFormatError(kModule, "write to " + file.string() + " failed");
}

SampledPath read_path_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) fail(source, lineno, "empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,value") fail(source, lineno, "expected header \"t,value\"");

  std::vector<double> times, values;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
      fail(source, lineno, "expected two comma-separated fields");
    double t = 0.0, v = 0.0;
    if (!parse_double(std::string_view(line).substr(0, comma), t)) fail(source, lineno, "bad time value");
    if (!parse_double(std::string_view(line).substr(comma + 1), v)) fail(source, lineno, "bad path value");
    times.push_back(t);
    values.push_back(v);
  }
  if (times.size() < 2) fail(source, lineno, "need at least two rows");
  if (times.front() != 0.0) fail(source, 2, "first time must be 0");
  const std::size_t n = times.size() - 1;
  const double horizon = times.back();
  if (!(horizon > 0.0)) fail(source, lineno, "horizon must be positive");
  const TimeGrid grid(n, horizon);
  for (std::size_t i = 1; i <= n; ++i) {
    if (!(times[i] > times[i - 1])) fail(source, i + 2, "times must be strictly increasing");
    if (std::fabs(times[i] - grid.t(i)) > 1e-9 * horizon) fail(source, i + 2, "times are not uniformly spaced");
  }
  return SampledPath(grid, std::move(values));
}

SampledPath read_path_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw InputFormatError(kModule, "cannot open " + file.string());
  return read_path_csv(in, file.string());
}

}  // namespace fbmg
