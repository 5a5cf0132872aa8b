#include "anglewalk/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "anglewalk/analysis.hpp"

namespace anglewalk::montecarlo {

namespace {

enum class WalkEst {
  EndpointSqnorm,
  EndpointX,
  EndpointY,
  EndpointMinusFirstStepSqnorm,
  Autocov,
  MedianAbsCurvature,
  CurvatureAtMid,
  LipschitzConstant,
};

enum class LimitEst {
  EndpointSqnorm,
  EndpointX,
  EndpointY,
  CurvatureAtMid,
  MaxSpeedDeviation,
  QuadraticVariation,
};

WalkEst parse_walk_est(const std::string& name) {
  if (name == "endpoint_sqnorm") return WalkEst::EndpointSqnorm;
  if (name == "endpoint_x") return WalkEst::EndpointX;
  if (name == "endpoint_y") return WalkEst::EndpointY;
  if (name == "endpoint_minus_first_step_sqnorm") return WalkEst::EndpointMinusFirstStepSqnorm;
  if (name == "autocov") return WalkEst::Autocov;
  if (name == "median_abs_curvature") return WalkEst::MedianAbsCurvature;
  if (name == "curvature_at_mid") return WalkEst::CurvatureAtMid;
  if (name == "lipschitz_constant") return WalkEst::LipschitzConstant;
  throw std::invalid_argument("run: unknown walk estimator '" + name + "'");
}

LimitEst parse_limit_est(const std::string& name) {
  if (name == "endpoint_sqnorm") return LimitEst::EndpointSqnorm;
  if (name == "endpoint_x") return LimitEst::EndpointX;
  if (name == "endpoint_y") return LimitEst::EndpointY;
  if (name == "curvature_at_mid") return LimitEst::CurvatureAtMid;
  if (name == "max_speed_deviation") return LimitEst::MaxSpeedDeviation;
  if (name == "quadratic_variation") return LimitEst::QuadraticVariation;
  throw std::invalid_argument("run: unknown limit estimator '" + name + "'");
}

bool streaming_capable(WalkEst e) {
  return e == WalkEst::EndpointSqnorm || e == WalkEst::EndpointX ||
         e == WalkEst::EndpointY || e == WalkEst::EndpointMinusFirstStepSqnorm;
}

double median_abs_curvature(const walks::Polyline& path) {
  const std::size_t n = path.step_count();
  std::vector<double> vals;
  vals.reserve(n - 1);
  for (std::size_t i = 1; i < n; ++i) vals.push_back(analysis::discrete_curvature(path, i));
  const std::size_t h = vals.size() / 2;
  std::nth_element(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(h), vals.end());
  const double hi = vals[h];
  if (vals.size() % 2 == 1) return hi;
  const double lo = *std::max_element(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(h));
  return 0.5 * (lo + hi);
}

double eval_walk_est(WalkEst e, const EstimatorSpec& spec, const walks::WalkRealization& wr,
                     const walks::Polyline& scaled) {
  switch (e) {
    case WalkEst::EndpointSqnorm:
      return norm_sq(scaled.vertex(scaled.step_count()));
    case WalkEst::EndpointX:
      return scaled.vertex(scaled.step_count()).x;
    case WalkEst::EndpointY:
      return scaled.vertex(scaled.step_count()).y;
    case WalkEst::EndpointMinusFirstStepSqnorm:
      return norm_sq(scaled.vertex(scaled.step_count()) - wr.steps.u.front());
    case WalkEst::Autocov:
      return analysis::autocov_empirical(wr.steps, spec.lag);
    case WalkEst::MedianAbsCurvature:
      return median_abs_curvature(scaled);
    case WalkEst::CurvatureAtMid:
      return analysis::discrete_curvature(scaled, scaled.step_count() / 2);
    case WalkEst::LipschitzConstant:
      return analysis::lipschitz_constant(scaled, spec.grid);
  }
  throw std::logic_error("eval_walk_est: unreachable");
}

double eval_limit_est(LimitEst e, const limits::LimitRealization& real) {
  const auto& path = real.path;
  const std::size_t m = path.step_count();
  switch (e) {
    case LimitEst::EndpointSqnorm:
      return norm_sq(path.vertex(m));
    case LimitEst::EndpointX:
      return path.vertex(m).x;
    case LimitEst::EndpointY:
      return path.vertex(m).y;
    case LimitEst::CurvatureAtMid:
      // curvature of the C2 limit at the node nearest t = 1/2
      return std::abs(real.drift_coeff * real.driver[m / 2]);
    case LimitEst::MaxSpeedDeviation: {
      double worst = 0.0;
      const auto md = static_cast<double>(m);
      for (std::size_t k = 0; k < m; ++k) {
        const double speed = norm(path.vertex(k + 1) - path.vertex(k)) * md;
        worst = std::max(worst, std::abs(speed - 1.0));
      }
      return worst;
    }
    case LimitEst::QuadraticVariation: {
      double qv = 0.0;
      for (std::size_t k = 0; k < m; ++k) qv += norm_sq(path.vertex(k + 1) - path.vertex(k));
      return qv;
    }
  }
  throw std::logic_error("eval_limit_est: unreachable");
}

// Runs body(r) for r = 0..count-1 across the workers; rethrows the first
// replicate failure after all threads join.
template <class Body>
void parallel_for_index(std::size_t count, unsigned workers, Body&& body) {
  workers = std::max(1u, workers);
  if (workers == 1 || count <= 1) {
    for (std::size_t r = 0; r < count; ++r) body(r);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto drain = [&] {
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= count) return;
      try {
        body(r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned spawn = static_cast<unsigned>(
      std::min<std::size_t>(workers, count));
  pool.reserve(spawn);
  for (unsigned w = 0; w < spawn; ++w) pool.emplace_back(drain);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

std::vector<std::vector<double>> run(const ExperimentPlan& plan, unsigned workers) {
  if (plan.replicates < 1) throw std::invalid_argument("run: replicates must be >= 1");
  if (plan.estimators.empty()) throw std::invalid_argument("run: no estimators");

  const std::size_t n_est = plan.estimators.size();
  std::vector<std::vector<double>> values(n_est, std::vector<double>(plan.replicates));

  if (const auto* wspec = std::get_if<walks::WalkSpec>(&plan.target)) {
    wspec->validate();
    std::vector<WalkEst> ests;
    ests.reserve(n_est);
    bool streaming = true;
    for (const auto& e : plan.estimators) {
      ests.push_back(parse_walk_est(e.name));
      streaming = streaming && streaming_capable(ests.back());
    }
    const double factor =
        plan.rescale ? walks::rescale_factor(*plan.rescale, wspec->n, wspec->alpha_n()) : 1.0;

    if (streaming) {
      // endpoint-only estimators: single pass, no path storage
      parallel_for_index(plan.replicates, workers, [&](std::size_t r) {
        auto src = sampling::derive_stream(plan.master_seed, r);
        Vec2 end{0.0, 0.0};
        Vec2 u1{0.0, 0.0};
        walks::for_each_step(*wspec, src, [&](std::uint64_t j, Vec2 u) {
          if (j == 1) u1 = u;
          end += u;
        });
        const Vec2 scaled_end = end * factor;
        for (std::size_t e = 0; e < n_est; ++e) {
          switch (ests[e]) {
            case WalkEst::EndpointSqnorm:
              values[e][r] = norm_sq(scaled_end);
              break;
            case WalkEst::EndpointX:
              values[e][r] = scaled_end.x;
              break;
            case WalkEst::EndpointY:
              values[e][r] = scaled_end.y;
              break;
            case WalkEst::EndpointMinusFirstStepSqnorm:
              values[e][r] = norm_sq(scaled_end - u1);
              break;
            default:
              throw std::logic_error("run: non-streaming estimator in streaming mode");
          }
        }
      });
    } else {
      parallel_for_index(plan.replicates, workers, [&](std::size_t r) {
        auto src = sampling::derive_stream(plan.master_seed, r);
        const walks::WalkRealization wr = walks::generate_walk(*wspec, src);
        const walks::Polyline scaled = wr.path.with_scale_factor(factor);
        for (std::size_t e = 0; e < n_est; ++e) {
          values[e][r] = eval_walk_est(ests[e], plan.estimators[e], wr, scaled);
        }
      });
    }
    return values;
  }

  const auto& lspec = std::get<limits::LimitSpec>(plan.target);
  lspec.validate();
  std::vector<LimitEst> ests;
  ests.reserve(n_est);
  for (const auto& e : plan.estimators) {
    ests.push_back(parse_limit_est(e.name));
    if (ests.back() == LimitEst::CurvatureAtMid && lspec.kind != limits::Kind::LimitC2) {
      throw std::invalid_argument("run: curvature_at_mid needs a C2 limit target");
    }
  }
  parallel_for_index(plan.replicates, workers, [&](std::size_t r) {
    auto src = sampling::derive_stream(plan.master_seed, r);
    const limits::LimitRealization real = limits::simulate(lspec, src);
    for (std::size_t e = 0; e < n_est; ++e) values[e][r] = eval_limit_est(ests[e], real);
  });
  return values;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 16) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

SummaryStats aggregate(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("aggregate: empty input");
  SummaryStats out;
  out.count = values.size();
  const auto nd = static_cast<double>(out.count);
  out.mean = pairwise_sum(values) / nd;
  if (out.count > 1) {
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double d = values[i] - out.mean;
      sq[i] = d * d;
    }
    out.sd = std::sqrt(pairwise_sum(sq) / (nd - 1.0));
  }
  out.ci_halfwidth = 1.96 * out.sd / std::sqrt(nd);
  return out;
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    // step past ties in both samples before comparing the CDFs
    const double v = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == v) ++i;
    while (j < sb.size() && sb[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return KsResult{d, sa.size(), sb.size()};
}

}  // namespace anglewalk::montecarlo
