// SPDX-License-Identifier: Apache-2.0
#include "ripley/limit_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "ripley/error.hpp"

namespace ripley {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw RuntimeError("cannot open '" + path.string() + "' for writing");
  out << std::setprecision(17);
  return out;
}

std::vector<std::vector<double>> read_rows(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw RuntimeError("cannot open '" + path.string() + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw RuntimeError("malformed number '" + cell + "' in " + path.string());
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

void save_limit(const std::string& directory, const LimitModel& limit) {
  limit.validate();
  const fs::path dir(directory);
  fs::create_directories(dir);

  auto grid = open_out(dir / "grid.csv");
  grid << "# r\n";
  for (double r : limit.grid.values()) grid << r << '\n';

  auto mean = open_out(dir / "mean.csv");
  mean << "# mean\n";
  for (double m : limit.mean_curve) mean << m << '\n';

  auto cov = open_out(dir / "covariance.csv");
  for (Eigen::Index i = 0; i < limit.covariance.rows(); ++i) {
    for (Eigen::Index j = 0; j < limit.covariance.cols(); ++j)
      cov << (j ? "," : "") << limit.covariance(i, j);
    cov << '\n';
  }

  nlohmann::json meta = {
      {"kind", limit.provenance.kind},
      {"replications", limit.provenance.replications},
      {"model", limit.provenance.model},
      {"correction", std::string(to_string(limit.correction))},
      {"rho", limit.rho},
      {"n", limit.volume},
      {"grid", {{"start", limit.grid.start()}, {"step", limit.grid.step()},
                {"count", limit.grid.size()}}},
  };
  auto prov = open_out(dir / "provenance.json");
  prov << meta.dump(2) << '\n';
}

LimitModel load_limit(const std::string& directory) {
  const fs::path dir(directory);
  std::ifstream prov_in(dir / "provenance.json");
  if (!prov_in) throw RuntimeError("no provenance.json in '" + directory + "'");
  nlohmann::json meta;
  try {
    prov_in >> meta;
  } catch (const nlohmann::json::exception& e) {
    throw RuntimeError(std::string("malformed provenance.json: ") + e.what());
  }

  const auto grid_rows = read_rows(dir / "grid.csv");
  const auto mean_rows = read_rows(dir / "mean.csv");
  const auto cov_rows = read_rows(dir / "covariance.csv");
  if (grid_rows.empty()) throw RuntimeError("empty grid.csv");
  const std::size_t g = grid_rows.size();
  const double step = meta.at("grid").at("step").get<double>();
  RGrid grid(grid_rows[0].at(0), step, g);
  for (std::size_t i = 0; i < g; ++i)
    if (std::abs(grid[i] - grid_rows[i].at(0)) > 1e-9 * std::max(1.0, grid[i]))
      throw RuntimeError("grid.csv is not uniformly spaced");
  if (mean_rows.size() != g || cov_rows.size() != g)
    throw RuntimeError("limit files disagree on the grid size");

  LimitModel limit{grid, std::vector<double>(g), Eigen::MatrixXd(g, g),
                   parse_edge_correction(meta.at("correction").get<std::string>()),
                   meta.at("rho").get<double>(), meta.at("n").get<double>(),
                   {meta.at("kind").get<std::string>(),
                    meta.at("replications").get<std::size_t>(),
                    meta.at("model").get<std::string>()}};
  for (std::size_t i = 0; i < g; ++i) {
    limit.mean_curve[i] = mean_rows[i].at(0);
    if (cov_rows[i].size() != g) throw RuntimeError("covariance.csv row has the wrong length");
    for (std::size_t j = 0; j < g; ++j)
      limit.covariance(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cov_rows[i][j];
  }
  limit.validate();
  return limit;
}

}  // namespace ripley
