#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "anglewalk/limits.hpp"
#include "anglewalk/sampling.hpp"
#include "anglewalk/walks.hpp"

namespace anglewalk::montecarlo {

// One scalar read off a realization. Members beyond name are only meaningful
// for the estimators that use them.
//
// Walk targets:
//   endpoint_sqnorm                 ||X(1)||^2 after rescale
//   endpoint_x / endpoint_y         rescaled endpoint coordinates
//   endpoint_minus_first_step_sqnorm ||X(1) - U_1||^2 after rescale
//   autocov                         per-coordinate step autocovariance, uses lag
//   median_abs_curvature            median discrete curvature over interior vertices
//   curvature_at_mid                discrete curvature at vertex floor(n/2)
//   lipschitz_constant              grid-based Lipschitz constant, uses grid
//
// Limit targets:
//   endpoint_sqnorm / endpoint_x / endpoint_y     as above
//   curvature_at_mid                limit curvature at t = 1/2 (C2 only)
//   max_speed_deviation             max_k | ||v_{k+1}-v_k|| / h  -  1 |
//   quadratic_variation             sum_k ||v_{k+1}-v_k||^2
struct EstimatorSpec {
  std::string name;
  std::size_t lag = 1;
  std::size_t grid = 1000;
};

struct ExperimentPlan {
  sampling::Seed master_seed;
  std::string seed_text;  // seed as the user wrote it; echoed into outputs
  std::size_t replicates = 1;
  std::variant<walks::WalkSpec, limits::LimitSpec> target;
  std::optional<walks::RescaleMode> rescale;  // walk targets only
  std::vector<EstimatorSpec> estimators;
};

// Replicate r draws from derive_stream(master_seed, r), so results do not
// depend on scheduling: run(plan, 1) and run(plan, 8) are bit-identical.
// Returns values[estimator][replicate]. Throws on unknown estimator names or
// estimator/target mismatches.
std::vector<std::vector<double>> run(const ExperimentPlan& plan, unsigned workers = 1);

// Sum in a fixed pairwise (balanced-tree) order: associativity-independent of
// worker count by construction and accurate to O(log n) rounding terms.
double pairwise_sum(std::span<const double> values);

struct SummaryStats {
  double mean = 0.0;
  double sd = 0.0;             // sample standard deviation (n-1)
  double ci_halfwidth = 0.0;   // 1.96 * sd / sqrt(n)
  std::size_t count = 0;
};

SummaryStats aggregate(std::span<const double> values);

struct KsResult {
  double statistic = 0.0;  // sup_x |F_a(x) - F_b(x)|
  std::size_t n_a = 0;
  std::size_t n_b = 0;
};

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

}  // namespace anglewalk::montecarlo
