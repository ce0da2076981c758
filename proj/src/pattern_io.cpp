// SPDX-License-Identifier: Apache-2.0
#include "ripley/pattern_io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "ripley/error.hpp"

namespace ripley {

namespace {

std::vector<double> parse_numbers(const std::string& text, char sep, const std::string& context) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    const auto first = item.find_first_not_of(" \t\r");
    const auto last = item.find_last_not_of(" \t\r");
    if (first == std::string::npos) throw RuntimeError("empty field in " + context);
    const std::string trimmed = item.substr(first, last - first + 1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), value);
    if (ec != std::errc() || ptr != trimmed.data() + trimmed.size())
      throw RuntimeError("malformed number '" + trimmed + "' in " + context);
    out.push_back(value);
  }
  return out;
}

}  // namespace

void write_pattern_csv(std::ostream& out, const PointPattern& pattern) {
  const auto& w = pattern.window();
  out << "# d=" << w.dimension() << " n=" << std::setprecision(17) << w.volume() << '\n';
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const auto p = pattern[i];
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (k) out << ',';
      out << p[k];
    }
    out << '\n';
  }
}

PointPattern read_pattern_csv(std::istream& in) {
  std::string line;
  std::optional<int> dim;
  std::optional<double> volume;
  std::vector<double> lower;
  std::vector<double> coords;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line.front() == '#') {
      std::stringstream ss(line.substr(1));
      std::string field;
      while (ss >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (key == "d") dim = static_cast<int>(parse_numbers(value, ',', "header").at(0));
        else if (key == "n") volume = parse_numbers(value, ',', "header").at(0);
        else if (key == "lower") lower = parse_numbers(value, ',', "header");
      }
      continue;
    }
    if (!dim || !volume) throw RuntimeError("pattern CSV is missing the '# d=<d> n=<n>' header");
    const auto values = parse_numbers(line, ',', "line " + std::to_string(line_no));
    if (values.size() != static_cast<std::size_t>(*dim))
      throw RuntimeError("line " + std::to_string(line_no) + " has " +
                         std::to_string(values.size()) + " coordinates, expected " +
                         std::to_string(*dim));
    coords.insert(coords.end(), values.begin(), values.end());
  }
  if (!dim || !volume) throw RuntimeError("pattern CSV is missing the '# d=<d> n=<n>' header");
  const CubeWindow window(*dim, *volume);
  if (!lower.empty()) {
    if (lower.size() != static_cast<std::size_t>(*dim))
      throw RuntimeError("header 'lower' has the wrong number of coordinates");
    const auto d = static_cast<std::size_t>(*dim);
    for (std::size_t i = 0; i < coords.size(); ++i)
      coords[i] -= lower[i % d] + window.half_side();
  }
  return PointPattern(window, std::move(coords));
}

void save_pattern(const std::string& path, const PointPattern& pattern) {
  std::ofstream out(path);
  if (!out) throw RuntimeError("cannot open '" + path + "' for writing");
  write_pattern_csv(out, pattern);
}

PointPattern load_pattern(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RuntimeError("cannot open '" + path + "'");
  return read_pattern_csv(in);
}

}  // namespace ripley
