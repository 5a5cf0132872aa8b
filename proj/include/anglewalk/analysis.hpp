#pragma once

#include <cstdint>
#include <span>

#include "anglewalk/walks.hpp"

namespace anglewalk::analysis {

// sin(a)/a, continuously extended: sinc(0) = 1. This is the characteristic
// function of uniform[-a, a] at frequency 1, which is why it runs through
// every closed form below.
double sinc(double a);

// 1 - sinc(a) computed without cancellation (power series below a ~ 0.02).
// The closed forms divide by this; near a = 0 the naive difference loses
// most of its digits.
double one_minus_sinc(double a);

// Variance constant of the constant-angle walk:
//   sigma_alpha^2 = (1/2) (1 + sinc a) / (1 - sinc a).
// Defined for a in (0, pi]; grows like 6/a^2 as a -> 0, equals 1/2 at a = pi.
double sigma_alpha_sq(double alpha);

// Cov(U_j, U_{j+k}) for the constant-angle walk is (1/2) sinc(a)^k per
// coordinate; k = 0 gives the step variance 1/2.
double step_autocov_exact(double alpha, std::uint64_t k);

// E ||X_n||^2 = n + 2 sum_{k=1}^{n-1} (n-k) sinc(a)^k, evaluated in closed
// form: n + 2 s (n(1-s) + s^n - 1) / (1-s)^2. The bracket is a difference of
// nearly equal terms when n(1-s) is small, so s^n - 1 goes through expm1 and
// log1p; relative error stays a small multiple of eps/(n(1-s)).
double msd_exact(double alpha, std::uint64_t n);

// Upper bound on tv(law of wrapped r-fold angle sum, uniform):
//   sum_{k=1}^{K} |sinc(k a)|^r  +  tail,
// with the tail majorized for r >= 2 by integral comparison:
//   sum_{k>K} (k a)^-r <= (K a)^{1-r} / ((r-1) a).
// For r = 1 the series has no convergent majorant (|sin| has positive mean),
// so only the partial sum is returned and K a > 1 is required.
double tv_fourier_bound(double alpha, int r, std::uint64_t truncation = 1000000);

// The one-line form of the same bound: (A / alpha) * max(sinc alpha, 2/pi)^r.
// A is the caller's absolute constant (default 1; the inequality only holds
// up to a constant, so this is for shape comparisons, not certification).
double tv_packaged_bound(double alpha, int r, double amplitude = 1.0);

// Plug-in total variation distance between a sample of circle angles and the
// uniform law: half the L1 distance of the bin histogram to the flat
// histogram. Input angles may be any reals; they are wrapped to [0, 2pi).
double tv_empirical(std::span<const double> angles, int bins = 256);

// (1/(n-k)) sum_j <U_j, U_{j+k}> / 2 : empirical per-coordinate step
// autocovariance at lag k. Requires k < number of steps.
double autocov_empirical(const walks::StepSeq& steps, std::size_t lag);

// Curvature of the circumcircle through vertices i-1, i, i+1 (scaled
// coordinates): 4 * area / (|e1| |e2| |chord|). Returns 0 when the triangle
// is flat (area < 1e-14 * product of side lengths); throws on repeated
// points, where the circumcircle is undefined.
double discrete_curvature(const walks::Polyline& path, std::size_t i);

// max over grid times s < t of ||X(t) - X(s)|| / (t - s); the n-step walk
// rescaled by 1/n has this <= 1 up to rounding. grid+1 evaluation points.
double lipschitz_constant(const walks::Polyline& path, std::size_t grid);

// Least-squares fit of log y = exponent * log x + log_prefactor.
// Requires at least 3 strictly positive points.
struct PowerFit {
  double exponent = 0.0;
  double log_prefactor = 0.0;
  double r_squared = 0.0;
};

PowerFit scaling_fit(std::span<const double> x, std::span<const double> y);

}  // namespace anglewalk::analysis
