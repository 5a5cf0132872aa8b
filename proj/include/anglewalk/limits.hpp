#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "anglewalk/sampling.hpp"
#include "anglewalk/walks.hpp"

namespace anglewalk::limits {

using sampling::RandomSource;

// The three limit processes the rescaled walks converge to:
//
//   ScaledBM  sigma * standard planar Brownian motion.
//   LimitC1   X_t = U int_0^t exp(i Phi_s) ds,  Phi = drift_coeff * B   (iid
//             shrinking angles, n alpha_n^2 -> kappa).
//   LimitC2   same integral with Phi = drift_coeff * int_0^. B_u du   (Markov
//             increments, n^3 alpha_n^2 -> kappa).
//
// drift_coeff is kept explicit instead of hard-wiring a function of kappa:
// the variance calculation gives sqrt(kappa/3) (derived_drift), while the
// source text prints (2/3) kappa (paper_drift). Callers choose.
enum class Kind { ScaledBM, LimitC1, LimitC2 };

inline double derived_drift(double kappa) { return std::sqrt(kappa / 3.0); }
inline double paper_drift(double kappa) { return (2.0 / 3.0) * kappa; }

struct LimitSpec {
  Kind kind = Kind::ScaledBM;
  double sigma = 1.0;        // ScaledBM only
  double kappa = 0.0;        // kept so outputs can echo the parameter behind drift_coeff
  double drift_coeff = 0.0;  // LimitC1 / LimitC2
  std::size_t grid = 2;      // number of cells m; nodes at t = k/m

  void validate() const;  // throws std::invalid_argument
};

// One simulated limit path on the uniform grid t_k = k/m. For C1/C2 the
// phase Phi and the scalar driver B are kept alongside the path; the
// curvature of the C2 limit is read directly off the driver.
struct LimitRealization {
  Kind kind = Kind::ScaledBM;
  walks::Polyline path;         // m+1 vertices, unit scale
  std::vector<double> phase;    // Phi at nodes (empty for ScaledBM)
  std::vector<double> driver;   // B at nodes (empty for ScaledBM)
  double drift_coeff = 0.0;
};

// sigma * B on [0, 1]: m Gaussian increments per coordinate, drawn x then y.
LimitRealization simulate_bm2(double sigma, std::size_t m, RandomSource& src);

// Draw order: U (one uniform_circle draw), then the m driver increments.
LimitRealization simulate_c1(double kappa, double drift_coeff, std::size_t m,
                             RandomSource& src);
LimitRealization simulate_c2(double kappa, double drift_coeff, std::size_t m,
                             RandomSource& src);

LimitRealization simulate(const LimitSpec& spec, RandomSource& src);

// Deterministic cores: build the C1/C2 path from a given driver sampled at
// m+1 nodes (driver[0] is B_0). Used by the simulators and directly by tests
// that need a forced driver. Integrals are trapezoidal on the grid.
LimitRealization c1_path_from_driver(std::span<const double> driver, double drift_coeff,
                                     Vec2 u);
LimitRealization c2_path_from_driver(std::span<const double> driver, double drift_coeff,
                                     Vec2 u);

struct CurvaturePoint {
  double t = 0.0;
  double curvature = 0.0;
};

// Curvature of the C2 limit path at the grid nodes: |Phi'(t)| =
// drift_coeff * |B_t|. Only the C2 limit has a curvature (its phase is C^1);
// ScaledBM and C1 throw std::domain_error.
std::vector<CurvaturePoint> limit_curvature_series(const LimitRealization& real);

}  // namespace anglewalk::limits
