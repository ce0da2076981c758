// SPDX-License-Identifier: Apache-2.0
#include "ripley/models.hpp"

#include <cmath>
#include <sstream>

#include "ripley/error.hpp"

namespace ripley {

std::string describe(const ModelSpec& model) {
  std::ostringstream out;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PoissonModel>) {
          out << "poisson(rho=" << m.rho << ")";
        } else if constexpr (std::is_same_v<T, LgcpModel>) {
          out << "lgcp(sigma2=" << m.params.sigma2 << ",scale=" << m.params.scale
              << ",mu=" << m.params.mu << ",resolution=" << m.params.grid_resolution << ")";
        } else if constexpr (std::is_same_v<T, MaternModel>) {
          out << "matern(kappa=" << m.params.parent_intensity << ",offspring=" << m.params.mean_offspring
              << ",radius=" << m.params.cluster_radius << ")";
        } else {
          out << "gibbs(" << m.model.describe() << ",intensity=" << m.intensity;
          if (m.options.padding) out << ",padding=" << *m.options.padding;
          out << ")";
        }
      },
      model);
  return out.str();
}

double model_intensity(const ModelSpec& model) {
  return std::visit(
      [](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PoissonModel>) return m.rho;
        else if constexpr (std::is_same_v<T, LgcpModel>) return m.params.intensity();
        else if constexpr (std::is_same_v<T, MaternModel>) return m.params.intensity();
        else return m.intensity;
      },
      model);
}

bool is_gibbs(const ModelSpec& model) { return std::holds_alternative<GibbsProcess>(model); }

std::optional<double> unit_intensity_strauss_activity(double gamma) {
  if (std::abs(gamma - 0.2) < 1e-12) return 1.556;
  if (std::abs(gamma - 0.5) < 1e-12) return 1.298;
  if (std::abs(gamma - 0.8) < 1e-12) return 1.107;
  return std::nullopt;
}

namespace {

PerfectSamplerOptions sampler_options(const Section& s) {
  PerfectSamplerOptions o;
  o.padding = s.maybe_number("padding");
  o.event_budget = static_cast<std::size_t>(s.integer_or("event_budget", static_cast<std::int64_t>(o.event_budget)));
  return o;
}

GibbsProcess gibbs_process(const Section& s, GibbsFamily family, double tau) {
  GibbsModel model(std::move(family), tau, s.number_or("beta", 1.0));
  return {model, sampler_options(s), s.number_or("intensity", 1.0)};
}

}  // namespace

ModelSpec model_from_section(const Section& s) {
  const std::string kind = s.text("model");
  if (kind == "poisson") {
    const double rho = s.number_or("rho", 1.0);
    require(rho > 0.0, "Poisson intensity must be positive");
    return PoissonModel{rho};
  }
  if (kind == "lgcp") {
    LgcpParams p = LgcpParams::unit_intensity(s.number("sigma2"), s.number_or("scale", 2.0));
    p.mu = s.number_or("mu", p.mu);
    p.grid_resolution = s.number_or("resolution", 1.0);
    p.method = parse_field_method(s.text_or("field_method", "auto"));
    p.validate();
    return LgcpModel{p};
  }
  if (kind == "matern") {
    MaternClusterParams p{s.number("kappa"), s.number("offspring"), s.number("cluster_radius")};
    p.validate();
    return MaternModel{p};
  }
  if (kind == "strauss") {
    const double gamma = s.number("gamma");
    const double radius = s.number_or("interaction_radius", 0.4);
    std::optional<double> tau = s.maybe_number("tau");
    if (!tau && std::abs(radius - 0.4) < 1e-12) tau = unit_intensity_strauss_activity(gamma);
    if (!tau) throw InvalidArgument("[" + s.name() + "] strauss model needs 'tau'");
    const double hardcore = s.number_or("hardcore", 0.0);
    PairPotential phi = hardcore > 0.0 ? PairPotential::hardcore_strauss(hardcore, gamma, radius)
                                       : PairPotential::strauss(gamma, radius);
    return gibbs_process(s, std::move(phi), *tau);
  }
  if (kind == "hardcore") {
    return gibbs_process(s, PairPotential{s.number("hardcore"), {}, {}}, s.number("tau"));
  }
  if (kind == "area") {
    AreaInteraction f{s.number("disk_radius"), static_cast<int>(s.integer_or("area_resolution", 64))};
    return gibbs_process(s, f, s.number("tau"));
  }
  if (kind == "hardkball") {
    HardKBall f{s.number("ball_radius"), static_cast<int>(s.integer_or("k", 3))};
    return gibbs_process(s, f, s.number("tau"));
  }
  throw InvalidArgument("[" + s.name() + "] unknown model '" + kind + "'");
}

PatternSampler::PatternSampler(ModelSpec model, const CubeWindow& window)
    : model_(std::move(model)), window_(window) {
  if (const auto* lgcp = std::get_if<LgcpModel>(&model_))
    lgcp_ = std::make_shared<const LgcpSampler>(window_, lgcp->params);
  if (is_gibbs(model_)) require(window_.dimension() == 2, "Gibbs models are planar");
}

PointPattern PatternSampler::sample(RngSeed seed) const {
  return std::visit(
      [&](const auto& m) -> PointPattern {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PoissonModel>) return sample_poisson(window_, m.rho, seed);
        else if constexpr (std::is_same_v<T, LgcpModel>) return lgcp_->sample(seed);
        else if constexpr (std::is_same_v<T, MaternModel>) return sample_matern_cluster(window_, m.params, seed);
        else return sample_gibbs_perfect(window_, m.model, seed, m.options).pattern;
      },
      model_);
}

}  // namespace ripley
