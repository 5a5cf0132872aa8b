#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "anglewalk/montecarlo.hpp"

// Verification suites: each suite runs a bundle of checks comparing Monte
// Carlo estimates against closed-form oracles (or asserting structural
// bounds) and reports them uniformly. The CLI `verify` command and the
// acceptance harness both run these.
namespace anglewalk::verify {

struct Options {
  sampling::Seed seed{1};
  std::string seed_text = "1";
  unsigned workers = 1;
};

// One comparison. Two-sided checks pass iff |observed - expected| <=
// tolerance; one-sided checks set tolerance = 0 and say so in the note.
// Everything in here is a deterministic function of Options::seed, so
// reports can be compared byte-for-byte across runs and worker counts.
struct CheckResult {
  std::string name;
  double observed = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

// Empirical step autocovariance at lags 1,2,5,10,20 against (1/2) sinc^k.
std::vector<CheckResult> suite_autocov(const Options& opts);
// Mean squared displacement: Monte Carlo vs closed form, closed form vs
// direct summation, normalized closed form vs the variance constant, and
// the independent-steps endpoint identity.
std::vector<CheckResult> suite_msd(const Options& opts);
// Total variation of wrapped angle sums: empirical vs analytic values,
// the Fourier series bound, domination, and geometric decay.
std::vector<CheckResult> suite_tv(const Options& opts);
// The two degenerate regimes: ballistic decay of E||X/n||^2 and collapse
// onto the first step direction.
std::vector<CheckResult> suite_regimes(const Options& opts);
// Variance of the diffusively rescaled constant-regime walk against the
// exact finite-n oracle; records the implied limiting constant.
std::vector<CheckResult> suite_brown_constant(const Options& opts);
// Growth exponent of the median discrete curvature in the alpha_n ~ n^-1/2
// regime (curvature blows up like sqrt(n)).
std::vector<CheckResult> suite_c1_curvature(const Options& opts);
// Curvature stability in the alpha_n ~ n^-3/2 regime: n-stability, limit
// shape match, and the kappa-scaling exponent of the curvature scale.
std::vector<CheckResult> suite_c2_curvature(const Options& opts);
// 1-Lipschitz property of ByN-rescaled walks over randomized specs.
std::vector<CheckResult> suite_lipschitz(const Options& opts);
// Limit-simulator self-checks: unit speed, endpoint variance, trapezoid
// refinement order.
std::vector<CheckResult> suite_limits(const Options& opts);

using SuiteFn = std::vector<CheckResult> (*)(const Options&);

// All suites in canonical order (the order `verify all` runs them).
const std::vector<std::pair<std::string, SuiteFn>>& suites();

// Parameterized single checks behind the CLI's override flags.
CheckResult check_autocov_at(double alpha, std::uint64_t n, std::size_t lag,
                             const Options& opts);
CheckResult check_msd_at(double alpha, std::uint64_t n, std::size_t replicates,
                         const Options& opts,
                         std::optional<double> tolerance_override = std::nullopt);
std::vector<CheckResult> check_tv_at(double alpha, int r, const Options& opts);
CheckResult check_lipschitz_at(const walks::WalkSpec& spec, std::size_t grid,
                               const Options& opts);

bool all_pass(const std::vector<CheckResult>& checks);

// {"suite":..., "seed":..., "checks":[{name, observed, expected, tolerance,
//  pass, note}...], "pass":...}; worker count is deliberately omitted so
// reports from different worker counts stay byte-identical.
nlohmann::json report_json(std::string_view suite, const Options& opts,
                           const std::vector<CheckResult>& checks);

}  // namespace anglewalk::verify
