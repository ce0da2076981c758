// SPDX-License-Identifier: Apache-2.0
#include "ripley/gaussian_field.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include <fftw3.h>

#include "ripley/error.hpp"

namespace ripley {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct GaussianFieldSampler::Plan {
  fftw_plan plan = nullptr;
  ~Plan() {
    if (plan) {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(plan);
    }
  }
};

FieldMethod parse_field_method(std::string_view name) {
  if (name == "auto") return FieldMethod::Auto;
  if (name == "dense") return FieldMethod::Dense;
  if (name == "circulant") return FieldMethod::Circulant;
  throw InvalidArgument("unknown field method '" + std::string(name) + "'");
}

std::string_view to_string(FieldMethod method) {
  switch (method) {
    case FieldMethod::Auto: return "auto";
    case FieldMethod::Dense: return "dense";
    case FieldMethod::Circulant: return "circulant";
  }
  return "unknown";
}

GaussianFieldSampler::GaussianFieldSampler(std::size_t cells_per_axis, double cell_width,
                                           double sigma2, double scale, FieldMethod method)
    : m_(cells_per_axis), width_(cell_width), sigma2_(sigma2), scale_(scale), method_(method) {
  require(m_ >= 1, "field grid needs at least one cell");
  require(width_ > 0.0, "cell width must be positive");
  require(sigma2_ >= 0.0, "field variance must be nonnegative");
  require(scale_ > 0.0, "covariance scale must be positive");
  if (method_ == FieldMethod::Auto)
    method_ = cell_count() <= kDenseFieldCellLimit ? FieldMethod::Dense : FieldMethod::Circulant;
  if (sigma2_ == 0.0) return;
  if (method_ == FieldMethod::Dense) build_dense();
  else build_circulant();
}

GaussianFieldSampler::~GaussianFieldSampler() = default;
GaussianFieldSampler::GaussianFieldSampler(GaussianFieldSampler&&) noexcept = default;
GaussianFieldSampler& GaussianFieldSampler::operator=(GaussianFieldSampler&&) noexcept = default;

double GaussianFieldSampler::cov(double dist) const { return sigma2_ * std::exp(-dist / scale_); }

Eigen::MatrixXd GaussianFieldSampler::covariance() const {
  const auto n = static_cast<Eigen::Index>(cell_count());
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double xi = static_cast<double>(i % static_cast<Eigen::Index>(m_)) * width_;
    const double yi = static_cast<double>(i / static_cast<Eigen::Index>(m_)) * width_;
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double xj = static_cast<double>(j % static_cast<Eigen::Index>(m_)) * width_;
      const double yj = static_cast<double>(j / static_cast<Eigen::Index>(m_)) * width_;
      c(i, j) = c(j, i) = cov(std::hypot(xi - xj, yi - yj));
    }
  }
  return c;
}

void GaussianFieldSampler::build_dense() {
  Eigen::MatrixXd c = covariance();
  const double start = 1e-10 * sigma2_;
  const double stop = 1e-6 * sigma2_;
  for (double jitter = 0.0; jitter <= stop; jitter = (jitter == 0.0) ? start : 2.0 * jitter) {
    Eigen::LLT<Eigen::MatrixXd> llt(c + jitter * Eigen::MatrixXd::Identity(c.rows(), c.cols()));
    if (llt.info() == Eigen::Success) {
      factor_ = llt.matrixL();
      return;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(c);
  const auto& s = svd.singularValues();
  std::ostringstream msg;
  msg << "field covariance factorization failed after jitter " << stop
      << "; condition number " << s(0) / s(s.size() - 1);
  throw RuntimeError(msg.str());
}

void GaussianFieldSampler::build_circulant() {
  // Embed the m x m grid in an M x M torus; grow M until the circulant
  // eigenvalues are nonnegative (up to round-off).
  std::size_t M = 2 * m_;
  for (int attempt = 0; attempt < 6; ++attempt, M = M + M / 2) {
    std::vector<std::complex<double>> base(M * M);
    for (std::size_t j = 0; j < M; ++j) {
      const double dy = static_cast<double>(std::min(j, M - j)) * width_;
      for (std::size_t i = 0; i < M; ++i) {
        const double dx = static_cast<double>(std::min(i, M - i)) * width_;
        base[j * M + i] = cov(std::hypot(dx, dy));
      }
    }
    std::vector<std::complex<double>> spec(M * M);
    {
      std::lock_guard lock(planner_mutex());
      fftw_plan p = fftw_plan_dft_2d(static_cast<int>(M), static_cast<int>(M),
                                     reinterpret_cast<fftw_complex*>(base.data()),
                                     reinterpret_cast<fftw_complex*>(spec.data()), FFTW_FORWARD,
                                     FFTW_ESTIMATE);
      fftw_execute(p);
      fftw_destroy_plan(p);
    }
    double max_eig = 0.0, min_eig = 0.0;
    for (const auto& z : spec) {
      max_eig = std::max(max_eig, z.real());
      min_eig = std::min(min_eig, z.real());
    }
    if (min_eig < -1e-8 * max_eig) continue;
    embed_ = M;
    sqrt_eigen_.resize(M * M);
    const double N = static_cast<double>(M * M);
    for (std::size_t k = 0; k < M * M; ++k) sqrt_eigen_[k] = std::sqrt(std::max(0.0, spec[k].real()) / N);
    plan_ = std::make_unique<Plan>();
    std::vector<std::complex<double>> a(M * M), b(M * M);
    std::lock_guard lock(planner_mutex());
    plan_->plan = fftw_plan_dft_2d(static_cast<int>(M), static_cast<int>(M),
                                   reinterpret_cast<fftw_complex*>(a.data()),
                                   reinterpret_cast<fftw_complex*>(b.data()), FFTW_FORWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    return;
  }
  throw RuntimeError("circulant embedding has negative eigenvalues; window too small for the "
                     "covariance scale");
}

std::vector<double> GaussianFieldSampler::sample(Engine& gen) const {
  std::vector<double> field(cell_count(), 0.0);
  if (sigma2_ == 0.0) return field;
  std::normal_distribution<double> normal;
  if (method_ == FieldMethod::Dense) {
    Eigen::VectorXd xi(static_cast<Eigen::Index>(cell_count()));
    for (Eigen::Index i = 0; i < xi.size(); ++i) xi(i) = normal(gen);
    Eigen::VectorXd z = factor_.triangularView<Eigen::Lower>() * xi;
    std::copy(z.data(), z.data() + z.size(), field.begin());
    return field;
  }
  const std::size_t M = embed_;
  std::vector<std::complex<double>> in(M * M), out(M * M);
  for (std::size_t k = 0; k < M * M; ++k) {
    const double re = normal(gen);
    const double im = normal(gen);
    in[k] = sqrt_eigen_[k] * std::complex<double>(re, im);
  }
  fftw_execute_dft(plan_->plan, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  for (std::size_t j = 0; j < m_; ++j)
    for (std::size_t i = 0; i < m_; ++i) field[j * m_ + i] = out[j * M + i].real();
  return field;
}

}  // namespace ripley
