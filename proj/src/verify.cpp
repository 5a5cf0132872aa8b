#include "anglewalk/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "anglewalk/analysis.hpp"
#include "anglewalk/io.hpp"
#include "anglewalk/limits.hpp"

namespace anglewalk::verify {

namespace {

using montecarlo::EstimatorSpec;
using montecarlo::ExperimentPlan;
using sampling::RandomSource;
using sampling::Seed;
using walks::RescaleMode;
using walks::WalkSpec;

constexpr double kPi = std::numbers::pi;

std::string fd(double v) { return io::format_double(v); }

// Every sub-experiment gets its own master seed derived from the suite seed
// and a fixed tag, so replicate streams never collide across experiments
// (montecarlo::run numbers its streams 0..R-1 under each master).
Seed sub_seed(const Options& opts, std::uint64_t tag) {
  auto src = sampling::derive_stream(opts.seed, tag);
  return Seed{src.next_u64()};
}

CheckResult two_sided(std::string name, double observed, double expected,
                      double tolerance, std::string note) {
  CheckResult c;
  c.name = std::move(name);
  c.observed = observed;
  c.expected = expected;
  c.tolerance = tolerance;
  c.pass = std::abs(observed - expected) <= tolerance;
  c.note = std::move(note);
  return c;
}

// pass iff observed <= expected; tolerance is reported as 0.
CheckResult upper_bounded(std::string name, double observed, double bound,
                          std::string note) {
  CheckResult c;
  c.name = std::move(name);
  c.observed = observed;
  c.expected = bound;
  c.tolerance = 0.0;
  c.pass = observed <= bound;
  c.note = "one-sided (pass iff observed <= expected); " + std::move(note);
  return c;
}

double median_of(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median_of: empty input");
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

// Run a one-estimator plan and return its per-replicate values.
std::vector<double> mc_single(const Options& opts, std::uint64_t tag,
                              std::variant<WalkSpec, limits::LimitSpec> target,
                              std::optional<RescaleMode> rescale, EstimatorSpec est,
                              std::size_t replicates) {
  ExperimentPlan plan;
  plan.master_seed = sub_seed(opts, tag);
  plan.seed_text = opts.seed_text;
  plan.replicates = replicates;
  plan.target = std::move(target);
  plan.rescale = rescale;
  plan.estimators = {std::move(est)};
  return montecarlo::run(plan, opts.workers)[0];
}

WalkSpec iid_spec(double alpha, std::uint64_t n) {
  WalkSpec spec;
  spec.construction = walks::Construction::IidConstant;
  spec.alpha = alpha;
  spec.n = n;
  return spec;
}

WalkSpec shrinking_spec(double coeff, double exponent, std::uint64_t n) {
  WalkSpec spec;
  spec.construction = walks::Construction::IidShrinking;
  spec.coeff = coeff;
  spec.exponent = exponent;
  spec.n = n;
  return spec;
}

WalkSpec markov_spec(double coeff, double exponent, std::uint64_t n) {
  WalkSpec spec;
  spec.construction = walks::Construction::MarkovIncrements;
  spec.coeff = coeff;
  spec.exponent = exponent;
  spec.n = n;
  return spec;
}

// Batch-means standard error of the empirical autocovariance: the lag-k
// products are themselves serially correlated, so the naive iid SE is too
// small; 1000 batches of ~(n-k)/1000 consecutive products fix that.
double autocov_batch_se(const walks::StepSeq& steps, std::size_t lag) {
  const std::size_t len = steps.u.size() - lag;
  const std::size_t batches = std::min<std::size_t>(1000, len);
  const std::size_t bs = len / batches;
  std::vector<double> means(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    double acc = 0.0;
    for (std::size_t j = b * bs; j < (b + 1) * bs; ++j) {
      acc += 0.5 * dot(steps.u[j], steps.u[j + lag]);
    }
    means[b] = acc / static_cast<double>(bs);
  }
  auto stats = montecarlo::aggregate(means);
  return stats.sd / std::sqrt(static_cast<double>(batches));
}

CheckResult autocov_check_on(const walks::StepSeq& steps, double alpha, std::size_t lag) {
  const double observed = analysis::autocov_empirical(steps, lag);
  const double expected = analysis::step_autocov_exact(alpha, lag);
  const double se = autocov_batch_se(steps, lag);
  return two_sided("autocov/lag-" + std::to_string(lag), observed, expected, 3.0 * se,
                   "3 x batch-means SE, SE = " + fd(se));
}

// Analytic total variation between the wrapped r-fold sum of uniform[-a, a]
// angles and the uniform circle law, available in closed form for r = 1
// (any a in (0, pi]) and r = 2 (a <= pi/2, where the triangular density
// does not wrap).
double tv_uniform_sum_analytic(double alpha, int r) {
  if (r == 1) return 1.0 - alpha / kPi;
  if (r == 2) {
    // density (2a - |x|)/(4a^2) on [-2a, 2a]; integrate its excess over
    // 1/(2 pi) up to the crossing point x* = 2a (1 - a/pi).
    const double xs = 2.0 * alpha * (1.0 - alpha / kPi);
    return 2.0 * ((2.0 * alpha * xs - 0.5 * xs * xs) / (4.0 * alpha * alpha) -
                  xs / (2.0 * kPi));
  }
  throw std::invalid_argument("tv_uniform_sum_analytic: only r = 1, 2");
}

// 10^6 wrapped r-fold angle sums from the suite's dedicated stream.
std::vector<double> tv_samples(const Options& opts, double alpha, int r,
                               std::size_t count = 1000000) {
  auto src = sampling::derive_stream(sub_seed(opts, 300 + static_cast<std::uint64_t>(r)), 0);
  std::vector<double> sums(count);
  for (auto& s : sums) {
    double acc = 0.0;
    for (int i = 0; i < r; ++i) acc += src.uniform_symmetric(alpha);
    s = acc;
  }
  return sums;
}

}  // namespace

std::vector<CheckResult> suite_autocov(const Options& opts) {
  const double alpha = kPi / 2.0;
  auto src = sampling::derive_stream(sub_seed(opts, 100), 0);
  auto wr = walks::generate_walk(iid_spec(alpha, 1000000), src);
  std::vector<CheckResult> checks;
  for (std::size_t lag : {1, 2, 5, 10, 20}) {
    checks.push_back(autocov_check_on(wr.steps, alpha, lag));
  }
  return checks;
}

CheckResult check_autocov_at(double alpha, std::uint64_t n, std::size_t lag,
                             const Options& opts) {
  if (lag + 1 >= n) throw std::invalid_argument("autocov check: need lag < n - 1");
  auto src = sampling::derive_stream(sub_seed(opts, 110), 0);
  auto wr = walks::generate_walk(iid_spec(alpha, n), src);
  return autocov_check_on(wr.steps, alpha, lag);
}

std::vector<CheckResult> suite_msd(const Options& opts) {
  const double alpha = kPi / 2.0;
  std::vector<CheckResult> checks;

  // Monte Carlo endpoint second moment against the closed form.
  checks.push_back(check_msd_at(alpha, 1000, 5000, opts));

  // Closed form against the direct O(n) summation it replaces.
  {
    const std::uint64_t n = 1000;
    const double s = analysis::sinc(alpha);
    double sum = 0.0, pw = 1.0;
    for (std::uint64_t k = 1; k < n; ++k) {
      pw *= s;
      sum += static_cast<double>(n - k) * pw;
    }
    const double direct = static_cast<double>(n) + 2.0 * sum;
    checks.push_back(two_sided("msd/closed-form-vs-direct-sum",
                               analysis::msd_exact(alpha, n), direct, 1e-9 * direct,
                               "direct summation n + 2 sum (n-k) sinc^k at n = 1000"));
  }

  // msd/n approaches the variance constant 2 sigma_alpha^2.
  {
    const std::uint64_t n = 100000;
    const double observed = analysis::msd_exact(alpha, n) / static_cast<double>(n);
    const double expected = 2.0 * analysis::sigma_alpha_sq(alpha);
    checks.push_back(two_sided("msd/normalized-vs-limit-constant", observed, expected,
                               0.005 * expected, "msd_exact(alpha, 1e5) / 1e5 vs 2 sigma_alpha^2"));
  }

  // alpha = pi makes the steps independent: E||X_n||^2 / n = 1 exactly.
  {
    const std::uint64_t n = 10000;
    auto values = mc_single(opts, 201, iid_spec(kPi, n), std::nullopt,
                            {.name = "endpoint_sqnorm"}, 5000);
    auto stats = montecarlo::aggregate(values);
    checks.push_back(two_sided("msd/independent-steps-endpoint",
                               stats.mean / static_cast<double>(n), 1.0, 0.05,
                               "alpha = pi, n = 1e4, R = 5000; E||X_n||^2 / n"));
  }
  return checks;
}

CheckResult check_msd_at(double alpha, std::uint64_t n, std::size_t replicates,
                         const Options& opts, std::optional<double> tolerance_override) {
  auto values = mc_single(opts, 200, iid_spec(alpha, n), std::nullopt,
                          {.name = "endpoint_sqnorm"}, replicates);
  auto stats = montecarlo::aggregate(values);
  const double se = stats.sd / std::sqrt(static_cast<double>(stats.count));
  const double tol = tolerance_override.value_or(3.0 * se);
  return two_sided("msd/mc-mean-vs-exact", stats.mean, analysis::msd_exact(alpha, n), tol,
                   "R = " + std::to_string(replicates) + ", " +
                       (tolerance_override ? "caller tolerance" : "3 x MC SE") +
                       ", SE = " + fd(se));
}

std::vector<CheckResult> suite_tv(const Options& opts) {
  const double alpha = kPi / 2.0;
  std::vector<CheckResult> checks;

  std::vector<double> emp(11, 0.0);
  for (int r = 1; r <= 10; ++r) {
    emp[static_cast<std::size_t>(r)] = analysis::tv_empirical(tv_samples(opts, alpha, r));
  }

  checks.push_back(two_sided("tv/empirical-r1", emp[1], tv_uniform_sum_analytic(alpha, 1),
                             0.02, "1e6 samples, 256 bins; analytic value 1 - alpha/pi"));
  checks.push_back(two_sided("tv/empirical-r2", emp[2], tv_uniform_sum_analytic(alpha, 2),
                             0.02, "1e6 samples, 256 bins; analytic triangular-density value"));

  checks.push_back(two_sided("tv/fourier-bound-r2", analysis::tv_fourier_bound(alpha, 2),
                             0.5, 1e-5,
                             "series sum |sinc(k pi/2)|^2 = 1/2; truncation 1e6 leaves < 1e-5"));

  std::vector<double> bounds(12, 0.0);
  for (int r = 2; r <= 11; ++r) {
    bounds[static_cast<std::size_t>(r)] = analysis::tv_fourier_bound(alpha, r);
  }
  for (int r = 2; r <= 10; ++r) {
    const auto ur = static_cast<std::size_t>(r);
    checks.push_back(upper_bounded("tv/empirical-le-bound-r" + std::to_string(r), emp[ur],
                                   bounds[ur] + 0.02,
                                   "empirical TV vs fourier bound + 0.02; bound = " +
                                       fd(bounds[ur])));
  }

  double max_ratio = 0.0;
  for (int r = 3; r <= 10; ++r) {
    const auto ur = static_cast<std::size_t>(r);
    max_ratio = std::max(max_ratio, bounds[ur + 1] / bounds[ur]);
  }
  checks.push_back(upper_bounded("tv/decay-ratio", max_ratio, 2.0 / kPi + 0.05,
                                 "max over r in 3..10 of bound(r+1)/bound(r); geometric "
                                 "rate sinc(pi/2) = 2/pi"));
  return checks;
}

std::vector<CheckResult> check_tv_at(double alpha, int r, const Options& opts) {
  std::vector<CheckResult> checks;
  const double emp = analysis::tv_empirical(tv_samples(opts, alpha, r));
  if (r == 1 || (r == 2 && alpha <= kPi / 2.0 * (1.0 + 1e-12))) {
    checks.push_back(two_sided("tv/empirical-vs-analytic", emp,
                               tv_uniform_sum_analytic(alpha, r), 0.02,
                               "1e6 samples, 256 bins"));
  }
  const double bound = analysis::tv_fourier_bound(alpha, r);
  checks.push_back(upper_bounded("tv/empirical-le-bound", emp, bound + 0.02,
                                 "empirical TV vs fourier bound + 0.02; bound = " + fd(bound)));
  return checks;
}

std::vector<CheckResult> suite_regimes(const Options& opts) {
  std::vector<CheckResult> checks;
  const std::vector<double> ns = {1e3, 1e4, 1e5};

  // alpha_n = 2 pi n^{-1/4}: angles shrink too slowly, the 1/n-scaled walk
  // collapses to a point and E||X_n/n||^2 decays like a power of n.
  std::vector<double> fast(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    auto values = mc_single(opts, 400 + i,
                            shrinking_spec(2.0 * kPi, 0.25, static_cast<std::uint64_t>(ns[i])),
                            RescaleMode::ByN, {.name = "endpoint_sqnorm"}, 2000);
    fast[i] = montecarlo::aggregate(values).mean;
  }
  checks.push_back(upper_bounded("regimes/fast-decrease-1e3-1e4", fast[1] / fast[0], 1.0,
                                 "E||X_n/n||^2 must shrink as n grows; values " + fd(fast[0]) +
                                     " -> " + fd(fast[1])));
  checks.push_back(upper_bounded("regimes/fast-decrease-1e4-1e5", fast[2] / fast[1], 1.0,
                                 "E||X_n/n||^2 must keep shrinking; values " + fd(fast[1]) +
                                     " -> " + fd(fast[2])));
  auto fit = analysis::scaling_fit(ns, fast);
  checks.push_back(upper_bounded("regimes/fast-slope", fit.exponent, -0.4,
                                 "log-log slope of E||X_n/n||^2, alpha_n = 2 pi n^-0.25; "
                                 "r^2 = " + fd(fit.r_squared)));

  // alpha_n = 2 pi n^{-3/4}: angles shrink too fast, the 1/n-scaled walk
  // collapses onto the straight line through the first step.
  double slow[2];
  const std::uint64_t slow_ns[2] = {1000, 100000};
  for (int i = 0; i < 2; ++i) {
    auto values = mc_single(opts, 410 + static_cast<std::uint64_t>(i),
                            shrinking_spec(2.0 * kPi, 0.75, slow_ns[i]), RescaleMode::ByN,
                            {.name = "endpoint_minus_first_step_sqnorm"}, 2000);
    slow[i] = montecarlo::aggregate(values).mean;
  }
  checks.push_back(upper_bounded("regimes/slow-collapse-ratio", slow[1] / slow[0], 0.5,
                                 "E||X_n/n - U_1||^2 at n = 1e5 over n = 1e3, alpha_n = "
                                 "2 pi n^-0.75; values " + fd(slow[0]) + " -> " + fd(slow[1])));
  return checks;
}

std::vector<CheckResult> suite_brown_constant(const Options& opts) {
  std::vector<CheckResult> checks;
  const std::uint64_t ns[2] = {100000, 1000000};
  double observed_var[2];
  double exact_var[2];
  for (int i = 0; i < 2; ++i) {
    auto spec = shrinking_spec(1.0, 0.4, ns[i]);
    const double a = spec.alpha_n();
    const double nd = static_cast<double>(ns[i]);
    // Per-coordinate variance of (alpha_n/sqrt n) X_n. The law is isotropic,
    // so E of the squared norm is twice the per-coordinate variance.
    auto values = mc_single(opts, 500 + static_cast<std::uint64_t>(i), spec,
                            RescaleMode::ByAlphaSqrtN, {.name = "endpoint_sqnorm"}, 2000);
    observed_var[i] = montecarlo::aggregate(values).mean / 2.0;
    exact_var[i] = a * a * analysis::msd_exact(a, ns[i]) / (2.0 * nd);
    checks.push_back(two_sided("brown-constant/variance-n1e" + std::to_string(5 + i),
                               observed_var[i], exact_var[i], 0.05 * exact_var[i],
                               "alpha_n = n^-0.4, R = 2000; exact oracle alpha_n^2 "
                               "msd_exact / (2n)"));
  }

  // The per-coordinate variance tends to alpha^2 sigma_alpha^2 -> 6, so the
  // diffusive-frame walk matches sqrt(6) B, not the often-printed sqrt(3) B.
  // At reachable n the implied constant is still far below its limit, which
  // is where sqrt(3) plausibly came from: sqrt(exact) at n = 1e5 is ~1.755,
  // within 2% of sqrt(3) = 1.732.
  {
    const double a = 1e-8;
    const double observed = std::sqrt(a * a * analysis::sigma_alpha_sq(a));
    checks.push_back(two_sided(
        "brown-constant/implied-limit-constant", observed, std::sqrt(6.0), 1e-6,
        "limit of alpha sqrt(sigma_alpha^2); finite-n implied constants sqrt(" +
            fd(exact_var[0]) + ") = " + fd(std::sqrt(exact_var[0])) + " at n = 1e5, sqrt(" +
            fd(exact_var[1]) + ") = " + fd(std::sqrt(exact_var[1])) +
            " at n = 1e6, drifting up toward sqrt(6) = 2.449 and away from the "
            "printed sqrt(3) = 1.732"));
  }
  return checks;
}

std::vector<CheckResult> suite_c1_curvature(const Options& opts) {
  const std::vector<double> ns = {1e3, 1e4, 1e5};
  std::vector<double> med(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    auto values = mc_single(opts, 600 + i,
                            shrinking_spec(2.0 * kPi, 0.5, static_cast<std::uint64_t>(ns[i])),
                            RescaleMode::ByN, {.name = "median_abs_curvature"}, 200);
    med[i] = montecarlo::aggregate(values).mean;
  }
  auto fit = analysis::scaling_fit(ns, med);
  return {two_sided("c1-curvature/growth-exponent", fit.exponent, 0.5, 0.1,
                    "median discrete curvature of the 1/n-rescaled path, alpha_n = "
                    "2 pi n^-0.5, R = 200; medians " + fd(med[0]) + ", " + fd(med[1]) +
                    ", " + fd(med[2]) + "; r^2 = " + fd(fit.r_squared))};
}

std::vector<CheckResult> suite_c2_curvature(const Options& opts) {
  std::vector<CheckResult> checks;
  const std::size_t reps = 1000;

  // kappa = n^3 alpha_n^2 = 16: alpha_n = 4 n^{-3/2}.
  auto s3 = mc_single(opts, 700, markov_spec(4.0, 1.5, 1000), RescaleMode::ByN,
                      {.name = "curvature_at_mid"}, reps);
  auto s4 = mc_single(opts, 701, markov_spec(4.0, 1.5, 10000), RescaleMode::ByN,
                      {.name = "curvature_at_mid"}, reps);
  {
    auto ks = montecarlo::ks_two_sample(s3, s4);
    checks.push_back(upper_bounded("c2-curvature/ks-across-n", ks.statistic, 0.1,
                                   "mid-path discrete curvature, kappa = 16, n = 1e3 vs "
                                   "n = 1e4, R = 1000"));
  }

  // Same distributional stability at kappa = 256 (n^{3/2} alpha_n = 16, the
  // figure-scale configuration).
  {
    auto t3 = mc_single(opts, 703, markov_spec(16.0, 1.5, 1000), RescaleMode::ByN,
                        {.name = "curvature_at_mid"}, reps);
    auto t4 = mc_single(opts, 704, markov_spec(16.0, 1.5, 10000), RescaleMode::ByN,
                        {.name = "curvature_at_mid"}, reps);
    auto ks = montecarlo::ks_two_sample(t3, t4);
    checks.push_back(upper_bounded("c2-curvature/ks-across-n-kappa256", ks.statistic, 0.1,
                                   "mid-path discrete curvature, kappa = 256, n = 1e3 vs "
                                   "n = 1e4, R = 1000"));
  }

  // Shape match against the limit: curvature at t = 1/2 of the limit process
  // is drift * |B_{1/2}|, i.e. c |N(0, 1/2)|. Fit c from the medians, then
  // compare whole distributions.
  {
    limits::LimitSpec lspec;
    lspec.kind = limits::Kind::LimitC2;
    lspec.kappa = 16.0;
    lspec.drift_coeff = 1.0;  // raw |B_{1/2}| samples; the fitted c rescales them
    lspec.grid = 1000;
    auto raw = mc_single(opts, 702, lspec, std::nullopt, {.name = "curvature_at_mid"}, reps);
    const double c_fit = median_of(s4) / median_of(raw);
    std::vector<double> scaled(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) scaled[i] = c_fit * raw[i];
    auto ks = montecarlo::ks_two_sample(s4, scaled);
    checks.push_back(upper_bounded(
        "c2-curvature/ks-walk-vs-limit-shape", ks.statistic, 0.1,
        "walk curvature sample (kappa = 16, n = 1e4) vs c |N(0,1/2)| with fitted c = " +
            fd(c_fit) + "; candidate coefficients: sqrt(kappa/3) = " +
            fd(limits::derived_drift(16.0)) + ", printed (2/3) kappa = " +
            fd(limits::paper_drift(16.0))));
  }

  // How the curvature scale grows with kappa separates the two candidate
  // drift coefficients: sqrt(kappa/3) gives exponent 1/2, (2/3) kappa gives 1.
  {
    auto m1 = mc_single(opts, 705, markov_spec(1.0, 1.5, 10000), RescaleMode::ByN,
                        {.name = "curvature_at_mid"}, reps);
    auto m4 = mc_single(opts, 706, markov_spec(2.0, 1.5, 10000), RescaleMode::ByN,
                        {.name = "curvature_at_mid"}, reps);
    const std::vector<double> kappas = {1.0, 4.0, 16.0};
    const std::vector<double> medians = {median_of(m1), median_of(m4), median_of(s4)};
    auto fit = analysis::scaling_fit(kappas, medians);
    const bool in_sqrt = std::abs(fit.exponent - 0.5) <= 0.1;
    const bool in_linear = std::abs(fit.exponent - 1.0) <= 0.1;
    CheckResult c;
    c.name = "c2-curvature/kappa-exponent";
    c.observed = fit.exponent;
    c.expected = 0.5;
    c.tolerance = 0.1;
    c.pass = in_sqrt || in_linear;
    c.note = std::string("pass on [0.4, 0.6] (scale ~ sqrt(kappa), coefficient "
                         "sqrt(kappa/3)) or [0.9, 1.1] (scale ~ kappa, printed "
                         "coefficient (2/3) kappa); fitted exponent lands ") +
             (in_sqrt ? "in [0.4, 0.6]"
                      : (in_linear ? "in [0.9, 1.1]" : "outside both intervals")) +
             "; medians " + fd(medians[0]) + ", " + fd(medians[1]) + ", " + fd(medians[2]) +
             " at kappa = 1, 4, 16";
    checks.push_back(std::move(c));
  }
  return checks;
}

namespace {

CheckResult lipschitz_check_on(const WalkSpec& spec, std::size_t grid, RandomSource& src,
                               std::string name) {
  auto wr = walks::generate_walk(spec, src);
  auto scaled = walks::rescale(wr.path, RescaleMode::ByN);
  const double observed = analysis::lipschitz_constant(scaled, grid);
  return upper_bounded(std::move(name), observed, 1.0 + 1e-9,
                       std::string("construction = ") +
                           std::string(io::construction_name(spec.construction)) +
                           ", n = " + std::to_string(spec.n) + ", grid = " +
                           std::to_string(grid));
}

}  // namespace

std::vector<CheckResult> suite_lipschitz(const Options& opts) {
  // Randomized specs from a dedicated stream, one walk each from another.
  auto gen = sampling::derive_stream(sub_seed(opts, 800), 0);
  const Seed walk_master = sub_seed(opts, 801);
  double max_constant = 0.0;
  int failures = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto n = 10 + static_cast<std::uint64_t>(gen.next_unit() * 4990.0);
    const double a = kPi * gen.next_unit_open();
    WalkSpec spec;
    switch (i % 3) {
      case 0:
        spec = iid_spec(a, n);
        break;
      case 1: {
        const double p = 0.25 + gen.next_unit();
        spec = shrinking_spec(a * std::pow(static_cast<double>(n), p), p, n);
        break;
      }
      default:
        spec = markov_spec(a * std::pow(static_cast<double>(n), 1.5), 1.5, n);
        break;
    }
    auto src = sampling::derive_stream(walk_master, i);
    auto wr = walks::generate_walk(spec, src);
    auto scaled = walks::rescale(wr.path, RescaleMode::ByN);
    const double constant = analysis::lipschitz_constant(scaled, 1000);
    max_constant = std::max(max_constant, constant);
    if (constant > 1.0 + 1e-9) ++failures;
  }
  return {upper_bounded("lipschitz/max-constant", max_constant, 1.0 + 1e-9,
                        "max grid Lipschitz constant over 100 randomized specs across "
                        "the three constructions, ByN rescale, grid 1000; failures = " +
                            std::to_string(failures))};
}

CheckResult check_lipschitz_at(const WalkSpec& spec, std::size_t grid, const Options& opts) {
  auto src = sampling::derive_stream(sub_seed(opts, 810), 0);
  return lipschitz_check_on(spec, grid, src, "lipschitz/constant");
}

namespace {

double max_speed_deviation_of(const walks::Polyline& path) {
  const std::size_t m = path.step_count();
  const double md = static_cast<double>(m);
  double worst = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double speed = norm(path.vertex(k + 1) - path.vertex(k)) * md;
    worst = std::max(worst, std::abs(speed - 1.0));
  }
  return worst;
}

// Deliberately non-periodic driver: with B(t) = sin(2 pi t) the C1 phasor
// exp(i B(t)) is 1-periodic and the trapezoid rule is spectrally accurate on
// it, so the endpoint error hits rounding noise long before m = 512 and the
// doubling ratio is meaningless.  The + t ramp keeps the boundary term of the
// Euler-Maclaurin expansion alive, which is what the ratio-4 check measures.
double trapezoid_refinement_ratio(limits::Kind kind) {
  auto endpoint_at = [&](std::size_t m) {
    std::vector<double> driver(m + 1);
    for (std::size_t k = 0; k <= m; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(m);
      driver[k] = std::sin(2.0 * kPi * t) + t;
    }
    auto real = kind == limits::Kind::LimitC1
                    ? limits::c1_path_from_driver(driver, 1.0, Vec2{1.0, 0.0})
                    : limits::c2_path_from_driver(driver, 1.0, Vec2{1.0, 0.0});
    return real.path.vertex(m);
  };
  const Vec2 ref = endpoint_at(65536);
  const double err_coarse = norm(endpoint_at(512) - ref);
  const double err_fine = norm(endpoint_at(1024) - ref);
  return err_coarse / err_fine;
}

}  // namespace

std::vector<CheckResult> suite_limits(const Options& opts) {
  std::vector<CheckResult> checks;
  const std::size_t m = 10000;

  {
    auto src = sampling::derive_stream(sub_seed(opts, 900), 0);
    auto real = limits::simulate_c1(1.0, limits::derived_drift(1.0), m, src);
    checks.push_back(upper_bounded("limits/c1-unit-speed", max_speed_deviation_of(real.path),
                                   10.0 / static_cast<double>(m),
                                   "max | m ||v_{k+1} - v_k|| - 1 | at m = 1e4, kappa = 1"));
  }
  {
    auto src = sampling::derive_stream(sub_seed(opts, 901), 0);
    auto real = limits::simulate_c2(1.0, limits::derived_drift(1.0), m, src);
    checks.push_back(upper_bounded("limits/c2-unit-speed", max_speed_deviation_of(real.path),
                                   10.0 / static_cast<double>(m),
                                   "max | m ||v_{k+1} - v_k|| - 1 | at m = 1e4, kappa = 1"));
  }

  {
    limits::LimitSpec lspec;
    lspec.kind = limits::Kind::ScaledBM;
    lspec.sigma = 1.0;
    lspec.grid = 100;
    ExperimentPlan plan;
    plan.master_seed = sub_seed(opts, 902);
    plan.seed_text = opts.seed_text;
    plan.replicates = 10000;
    plan.target = lspec;
    plan.estimators = {{.name = "endpoint_x"}, {.name = "endpoint_y"}};
    auto values = montecarlo::run(plan, opts.workers);
    const char* coord[2] = {"x", "y"};
    for (int i = 0; i < 2; ++i) {
      auto stats = montecarlo::aggregate(values[static_cast<std::size_t>(i)]);
      checks.push_back(two_sided(std::string("limits/bm-endpoint-variance-") + coord[i],
                                 stats.sd * stats.sd, 1.0, 0.05,
                                 "sample variance of the Brownian endpoint coordinate, "
                                 "sigma = 1, R = 1e4"));
    }
  }

  checks.push_back(two_sided("limits/trapezoid-order-c1",
                             trapezoid_refinement_ratio(limits::Kind::LimitC1), 4.0, 0.5,
                             "endpoint error ratio under grid doubling (512 -> 1024) "
                             "against m = 65536, forced driver sin(2 pi t) + t; "
                             "second-order integrator gives 4"));
  checks.push_back(two_sided("limits/trapezoid-order-c2",
                             trapezoid_refinement_ratio(limits::Kind::LimitC2), 4.0, 0.5,
                             "endpoint error ratio under grid doubling (512 -> 1024) "
                             "against m = 65536, forced driver sin(2 pi t) + t; "
                             "second-order integrator gives 4"));
  return checks;
}

const std::vector<std::pair<std::string, SuiteFn>>& suites() {
  static const std::vector<std::pair<std::string, SuiteFn>> kSuites = {
      {"autocov", suite_autocov},
      {"msd", suite_msd},
      {"tv", suite_tv},
      {"regimes", suite_regimes},
      {"brown-constant", suite_brown_constant},
      {"c1-curvature", suite_c1_curvature},
      {"c2-curvature", suite_c2_curvature},
      {"lipschitz", suite_lipschitz},
      {"limits", suite_limits},
  };
  return kSuites;
}

bool all_pass(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.pass; });
}

nlohmann::json report_json(std::string_view suite, const Options& opts,
                           const std::vector<CheckResult>& checks) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name},
                   {"observed", c.observed},
                   {"expected", c.expected},
                   {"tolerance", c.tolerance},
                   {"pass", c.pass},
                   {"note", c.note}});
  }
  return nlohmann::json{{"suite", std::string(suite)},
                        {"seed", opts.seed_text},
                        {"checks", std::move(arr)},
                        {"pass", all_pass(checks)}};
}

}  // namespace anglewalk::verify
