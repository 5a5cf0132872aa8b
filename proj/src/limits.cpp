#include "anglewalk/limits.hpp"

#include <cmath>
#include <stdexcept>

namespace anglewalk::limits {

namespace {

// cumtrapz of the unit phasor u * exp(i phase) over the grid; the integrand
// has modulus 1, so the path is 1-Lipschitz in t by construction.
walks::Polyline integrate_phasor(std::span<const double> phase, Vec2 u) {
  const std::size_t m = phase.size() - 1;
  const double h = 1.0 / static_cast<double>(m);
  std::vector<Vec2> verts(m + 1);
  verts[0] = {0.0, 0.0};
  Vec2 prev = rotated(u, std::cos(phase[0]), std::sin(phase[0]));
  for (std::size_t k = 1; k <= m; ++k) {
    const Vec2 cur = rotated(u, std::cos(phase[k]), std::sin(phase[k]));
    verts[k] = verts[k - 1] + 0.5 * h * (prev + cur);
    prev = cur;
  }
  return walks::Polyline(std::move(verts));
}

void require_driver(std::span<const double> driver) {
  if (driver.size() < 3) {
    throw std::invalid_argument("limit path: driver needs at least 3 nodes (grid >= 2)");
  }
}

}  // namespace

void LimitSpec::validate() const {
  if (grid < 2) throw std::invalid_argument("LimitSpec: grid must be >= 2");
  switch (kind) {
    case Kind::ScaledBM:
      if (!(sigma >= 0.0)) throw std::invalid_argument("LimitSpec: sigma must be >= 0");
      break;
    case Kind::LimitC1:
    case Kind::LimitC2:
      if (!(kappa >= 0.0)) throw std::invalid_argument("LimitSpec: kappa must be >= 0");
      if (!std::isfinite(drift_coeff)) {
        throw std::invalid_argument("LimitSpec: drift_coeff must be finite");
      }
      break;
  }
}

LimitRealization simulate_bm2(double sigma, std::size_t m, RandomSource& src) {
  if (m < 2) throw std::invalid_argument("simulate_bm2: grid must be >= 2");
  if (!(sigma >= 0.0)) throw std::invalid_argument("simulate_bm2: sigma must be >= 0");
  const double step_sd = sigma / std::sqrt(static_cast<double>(m));
  std::vector<Vec2> verts(m + 1);
  verts[0] = {0.0, 0.0};
  for (std::size_t k = 1; k <= m; ++k) {
    const double zx = src.normal_std();
    const double zy = src.normal_std();
    verts[k] = verts[k - 1] + Vec2{step_sd * zx, step_sd * zy};
  }
  return LimitRealization{Kind::ScaledBM, walks::Polyline(std::move(verts)), {}, {}, 0.0};
}

LimitRealization c1_path_from_driver(std::span<const double> driver, double drift_coeff,
                                     Vec2 u) {
  require_driver(driver);
  std::vector<double> phase(driver.size());
  for (std::size_t k = 0; k < driver.size(); ++k) phase[k] = drift_coeff * driver[k];
  LimitRealization out{Kind::LimitC1, integrate_phasor(phase, u), std::move(phase),
                       std::vector<double>(driver.begin(), driver.end()), drift_coeff};
  return out;
}

LimitRealization c2_path_from_driver(std::span<const double> driver, double drift_coeff,
                                     Vec2 u) {
  require_driver(driver);
  const std::size_t m = driver.size() - 1;
  const double h = 1.0 / static_cast<double>(m);
  // Phi = drift_coeff * cumtrapz(B): the phase is differentiable with
  // Phi'(t) = drift_coeff * B_t, which is what gives this limit a curvature.
  std::vector<double> phase(driver.size());
  phase[0] = 0.0;
  for (std::size_t k = 1; k <= m; ++k) {
    phase[k] = phase[k - 1] + drift_coeff * 0.5 * h * (driver[k - 1] + driver[k]);
  }
  LimitRealization out{Kind::LimitC2, integrate_phasor(phase, u), std::move(phase),
                       std::vector<double>(driver.begin(), driver.end()), drift_coeff};
  return out;
}

namespace {

std::vector<double> sample_driver(std::size_t m, RandomSource& src) {
  std::vector<double> driver(m + 1);
  driver[0] = 0.0;
  const double step_sd = 1.0 / std::sqrt(static_cast<double>(m));
  for (std::size_t k = 1; k <= m; ++k) {
    driver[k] = driver[k - 1] + step_sd * src.normal_std();
  }
  return driver;
}

}  // namespace

LimitRealization simulate_c1(double kappa, double drift_coeff, std::size_t m,
                             RandomSource& src) {
  if (m < 2) throw std::invalid_argument("simulate_c1: grid must be >= 2");
  if (!(kappa >= 0.0)) throw std::invalid_argument("simulate_c1: kappa must be >= 0");
  const Vec2 u = src.uniform_circle();
  return c1_path_from_driver(sample_driver(m, src), drift_coeff, u);
}

LimitRealization simulate_c2(double kappa, double drift_coeff, std::size_t m,
                             RandomSource& src) {
  if (m < 2) throw std::invalid_argument("simulate_c2: grid must be >= 2");
  if (!(kappa >= 0.0)) throw std::invalid_argument("simulate_c2: kappa must be >= 0");
  const Vec2 u = src.uniform_circle();
  return c2_path_from_driver(sample_driver(m, src), drift_coeff, u);
}

LimitRealization simulate(const LimitSpec& spec, RandomSource& src) {
  spec.validate();
  switch (spec.kind) {
    case Kind::ScaledBM:
      return simulate_bm2(spec.sigma, spec.grid, src);
    case Kind::LimitC1:
      return simulate_c1(spec.kappa, spec.drift_coeff, spec.grid, src);
    case Kind::LimitC2:
      return simulate_c2(spec.kappa, spec.drift_coeff, spec.grid, src);
  }
  throw std::invalid_argument("simulate: unknown limit kind");
}

std::vector<CurvaturePoint> limit_curvature_series(const LimitRealization& real) {
  if (real.kind != Kind::LimitC2) {
    throw std::domain_error(
        "limit_curvature_series: only the C2 limit is twice differentiable "
        "(Brownian phases have no curvature)");
  }
  const std::size_t m = real.driver.size() - 1;
  std::vector<CurvaturePoint> out(real.driver.size());
  for (std::size_t k = 0; k <= m; ++k) {
    out[k].t = static_cast<double>(k) / static_cast<double>(m);
    out[k].curvature = std::abs(real.drift_coeff * real.driver[k]);
  }
  return out;
}

}  // namespace anglewalk::limits
