#include "anglewalk/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace anglewalk::analysis {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_alpha_range(double alpha, const char* where) {
  if (!(alpha > 0.0) || alpha > kPi) {
    throw std::invalid_argument(std::string(where) + ": alpha must be in (0, pi], got " +
                                std::to_string(alpha));
  }
}

}  // namespace

double sinc(double a) {
  if (a == 0.0) return 1.0;
  return std::sin(a) / a;
}

double one_minus_sinc(double a) {
  const double a2 = a * a;
  if (a2 < 4e-4) {
    // 1 - sin(a)/a = a^2/6 - a^4/120 + a^6/5040 - ... ; three terms keep the
    // truncation error below 1e-19 for |a| < 0.02.
    return a2 / 6.0 * (1.0 - a2 / 20.0 * (1.0 - a2 / 42.0));
  }
  return 1.0 - std::sin(a) / a;
}

double sigma_alpha_sq(double alpha) {
  require_alpha_range(alpha, "sigma_alpha_sq");
  const double oms = one_minus_sinc(alpha);
  return 0.5 * (2.0 - oms) / oms;
}

double step_autocov_exact(double alpha, std::uint64_t k) {
  require_alpha_range(alpha, "step_autocov_exact");
  if (k == 0) return 0.5;
  return 0.5 * std::pow(sinc(alpha), static_cast<double>(k));
}

double msd_exact(double alpha, std::uint64_t n) {
  require_alpha_range(alpha, "msd_exact");
  if (n < 1) throw std::invalid_argument("msd_exact: n must be >= 1");
  const auto nd = static_cast<double>(n);
  const double s = sinc(alpha);
  if (s == 0.0) return nd;  // alpha = pi: steps are uncorrelated
  const double oms = one_minus_sinc(alpha);
  // s^n - 1 without cancellation; log1p(-oms) = log s is exact in the lead.
  const double sn_minus_1 = std::expm1(nd * std::log1p(-oms));
  return nd + 2.0 * s * (nd * oms + sn_minus_1) / (oms * oms);
}

double tv_fourier_bound(double alpha, int r, std::uint64_t truncation) {
  require_alpha_range(alpha, "tv_fourier_bound");
  if (r < 1) throw std::invalid_argument("tv_fourier_bound: r must be >= 1");
  if (truncation < 1) throw std::invalid_argument("tv_fourier_bound: truncation must be >= 1");
  const auto K = static_cast<double>(truncation);
  if (r == 1 && !(K * alpha > 1.0)) {
    throw std::invalid_argument(
        "tv_fourier_bound: r = 1 needs truncation * alpha > 1 (no convergent tail)");
  }
  double sum = 0.0;
  for (std::uint64_t k = 1; k <= truncation; ++k) {
    const double term = std::abs(sinc(static_cast<double>(k) * alpha));
    sum += std::pow(term, static_cast<double>(r));
  }
  if (r >= 2) {
    // sum_{k>K} |sinc(k a)|^r <= sum_{k>K} (k a)^-r <= (K a)^{1-r} / ((r-1) a)
    sum += std::pow(K * alpha, 1.0 - static_cast<double>(r)) /
           ((static_cast<double>(r) - 1.0) * alpha);
  }
  return sum;
}

double tv_packaged_bound(double alpha, int r, double amplitude) {
  require_alpha_range(alpha, "tv_packaged_bound");
  if (r < 1) throw std::invalid_argument("tv_packaged_bound: r must be >= 1");
  const double base = std::max(sinc(alpha), 2.0 / kPi);
  return amplitude / alpha * std::pow(base, static_cast<double>(r));
}

double tv_empirical(std::span<const double> angles, int bins) {
  if (bins < 2) throw std::invalid_argument("tv_empirical: bins must be >= 2");
  if (angles.empty()) throw std::invalid_argument("tv_empirical: empty sample");
  std::vector<std::size_t> count(static_cast<std::size_t>(bins), 0);
  for (double a : angles) {
    double w = std::fmod(a, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    auto b = static_cast<std::size_t>(w / kTwoPi * bins);
    if (b >= count.size()) b = count.size() - 1;  // w == 2pi after rounding
    ++count[b];
  }
  const double flat = 1.0 / bins;
  const double inv_n = 1.0 / static_cast<double>(angles.size());
  double l1 = 0.0;
  for (std::size_t c : count) l1 += std::abs(static_cast<double>(c) * inv_n - flat);
  return 0.5 * l1;
}

double autocov_empirical(const walks::StepSeq& steps, std::size_t lag) {
  const std::size_t n = steps.u.size();
  if (lag >= n) {
    throw std::invalid_argument("autocov_empirical: lag must be < number of steps");
  }
  double sum = 0.0;
  for (std::size_t j = 0; j + lag < n; ++j) sum += dot(steps.u[j], steps.u[j + lag]);
  return 0.5 * sum / static_cast<double>(n - lag);
}

double discrete_curvature(const walks::Polyline& path, std::size_t i) {
  if (i < 1 || i + 1 > path.step_count()) {
    throw std::invalid_argument("discrete_curvature: need an interior vertex");
  }
  const Vec2 p0 = path.vertex(i - 1);
  const Vec2 p1 = path.vertex(i);
  const Vec2 p2 = path.vertex(i + 1);
  const Vec2 e1 = p1 - p0;
  const Vec2 e2 = p2 - p1;
  const Vec2 ch = p2 - p0;
  const double a = norm(e1), b = norm(e2), c = norm(ch);
  if (a == 0.0 || b == 0.0 || c == 0.0) {
    throw std::domain_error("discrete_curvature: repeated points");
  }
  const double area = 0.5 * std::abs(cross(e1, e2));
  const double abc = a * b * c;
  if (area < 1e-14 * abc) return 0.0;  // numerically collinear
  return 4.0 * area / abc;             // 1 / circumradius
}

double lipschitz_constant(const walks::Polyline& path, std::size_t grid) {
  if (grid < 2) throw std::invalid_argument("lipschitz_constant: grid must be >= 2");
  std::vector<Vec2> pts(grid + 1);
  const auto gd = static_cast<double>(grid);
  for (std::size_t k = 0; k <= grid; ++k) {
    // k/grid rather than k*(1/grid): the endpoint must land on exactly 1.0
    pts[k] = path.eval_at(static_cast<double>(k) / gd);
  }
  double best = 0.0;
  for (std::size_t i = 0; i < grid; ++i) {
    for (std::size_t j = i + 1; j <= grid; ++j) {
      const double dt = static_cast<double>(j - i) / gd;
      best = std::max(best, norm(pts[j] - pts[i]) / dt);
    }
  }
  return best;
}

PowerFit scaling_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("scaling_fit: size mismatch");
  if (x.size() < 3) throw std::invalid_argument("scaling_fit: need at least 3 points");
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw std::invalid_argument("scaling_fit: points must be strictly positive");
    }
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("scaling_fit: x values are all equal");
  PowerFit fit;
  fit.exponent = sxy / sxx;
  fit.log_prefactor = my - fit.exponent * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (fit.log_prefactor + fit.exponent * lx[i]);
    ss_res += r * r;
  }
  fit.r_squared = (syy == 0.0) ? 1.0 : 1.0 - ss_res / syy;
  return fit;
}

}  // namespace anglewalk::analysis
