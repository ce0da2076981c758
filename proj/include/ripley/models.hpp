// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "ripley/config.hpp"
#include "ripley/geometry.hpp"
#include "ripley/gibbs.hpp"
#include "ripley/rng.hpp"
#include "ripley/samplers.hpp"

namespace ripley {

struct PoissonModel {
  double rho = 1.0;
};

struct LgcpModel {
  LgcpParams params;
};

struct MaternModel {
  MaternClusterParams params;
};

struct GibbsProcess {
  GibbsModel model;
  PerfectSamplerOptions options;
  /// Intensity treated as known when normalizing K (the activity is
  /// calibrated so that this holds).
  double intensity = 1.0;
};

using ModelSpec = std::variant<PoissonModel, LgcpModel, MaternModel, GibbsProcess>;

std::string describe(const ModelSpec& model);

/// Intensity used to normalize estimators under this model.
double model_intensity(const ModelSpec& model);

bool is_gibbs(const ModelSpec& model);

/// Activity giving unit intensity for Str_0.4(gamma) at gamma = 0.2, 0.5,
/// 0.8 (1.556, 1.298, 1.107); nullopt otherwise.
std::optional<double> unit_intensity_strauss_activity(double gamma);

/// Builds a model from a key=value section. Recognised `model` values:
/// poisson, lgcp, matern, strauss, hardcore, area, hardkball.
ModelSpec model_from_section(const Section& section);

/// Draws patterns of one model on one window. Expensive setup (the LGCP
/// field factorization) happens once here; sample() is const and thread-safe.
class PatternSampler {
 public:
  PatternSampler(ModelSpec model, const CubeWindow& window);

  PointPattern sample(RngSeed seed) const;

  const ModelSpec& model() const noexcept { return model_; }
  const CubeWindow& window() const noexcept { return window_; }

 private:
  ModelSpec model_;
  CubeWindow window_;
  std::shared_ptr<const LgcpSampler> lgcp_;
};

}  // namespace ripley
