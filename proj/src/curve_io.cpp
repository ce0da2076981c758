// SPDX-License-Identifier: Apache-2.0
#include "ripley/curve_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "ripley/error.hpp"

namespace ripley {

void write_curve_csv(std::ostream& out, const CurveEstimate& curve) {
  out << std::setprecision(17);
  out << "# statistic=" << to_string(curve.statistic) << " correction=" << to_string(curve.correction)
      << " rho=" << curve.rho << " n=" << curve.volume << " bandwidth=" << curve.bandwidth << '\n';
  out << "r,value\n";
  for (std::size_t g = 0; g < curve.grid.size(); ++g) out << curve.grid[g] << ',' << curve.values[g] << '\n';
}

CurveEstimate read_curve_csv(std::istream& in) {
  std::map<std::string, std::string> meta;
  std::vector<double> r, values;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::stringstream ss(line.substr(1));
      std::string field;
      while (ss >> field) {
        const auto eq = field.find('=');
        if (eq != std::string::npos) meta[field.substr(0, eq)] = field.substr(eq + 1);
      }
      continue;
    }
    if (line.rfind("r,", 0) == 0) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw RuntimeError("malformed curve row '" + line + "'");
    try {
      r.push_back(std::stod(line.substr(0, comma)));
      values.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw RuntimeError("malformed curve row '" + line + "'");
    }
  }
  if (r.empty()) throw RuntimeError("curve CSV has no rows");
  const double step = r.size() > 1 ? r[1] - r[0] : 0.1;
  RGrid grid(r[0], step, r.size());
  for (std::size_t g = 0; g < r.size(); ++g)
    if (std::abs(grid[g] - r[g]) > 1e-9 * std::max(1.0, std::abs(r[g])))
      throw RuntimeError("curve CSV radii are not uniformly spaced");
  CurveEstimate curve{grid, values, Statistic::K, EdgeCorrection::None, 1.0, 1.0, 0.0};
  if (meta.count("statistic")) curve.statistic = parse_statistic(meta["statistic"]);
  if (meta.count("correction")) curve.correction = parse_edge_correction(meta["correction"]);
  if (meta.count("rho")) curve.rho = std::stod(meta["rho"]);
  if (meta.count("n")) curve.volume = std::stod(meta["n"]);
  if (meta.count("bandwidth")) curve.bandwidth = std::stod(meta["bandwidth"]);
  return curve;
}

void save_curve(const std::string& path, const CurveEstimate& curve) {
  std::ofstream out(path);
  if (!out) throw RuntimeError("cannot open '" + path + "' for writing");
  write_curve_csv(out, curve);
}

CurveEstimate load_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RuntimeError("cannot open '" + path + "'");
  return read_curve_csv(in);
}

}  // namespace ripley
