#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "anglewalk/geometry.hpp"
#include "anglewalk/sampling.hpp"

namespace anglewalk::walks {

using sampling::RandomSource;
using sampling::Seed;

// How the turning angles Theta_2..Theta_n are produced.
//
//   IidConstant      Theta_j iid uniform[-alpha, alpha], alpha fixed.
//   IidShrinking     Theta_j iid uniform[-alpha_n, alpha_n], alpha_n = c n^-p.
//   MarkovIncrements Theta_2 ~ uniform[-alpha_n, alpha_n], then
//                    Theta_{j+1} = Theta_j + delta_{j+1} with delta iid
//                    uniform[-alpha_n, alpha_n]  (cumulative heading drift).
enum class Construction { IidConstant, IidShrinking, MarkovIncrements };

struct WalkSpec {
  Construction construction = Construction::IidConstant;
  double alpha = 0.0;     // IidConstant: half-width of the angle law
  double coeff = 0.0;     // IidShrinking / MarkovIncrements: alpha_n = coeff * n^-exponent
  double exponent = 0.0;  //   "
  std::uint64_t n = 1;    // number of unit steps

  // Half-width actually used for this walk length.
  double alpha_n() const;

  // Throws std::invalid_argument unless n >= 1 and alpha_n() lands in (0, pi].
  void validate() const;
};

// Turning angles of one realization: theta[j-2] is Theta_j for j = 2..n,
// so theta.size() == n-1. Values are unconstrained reals (a Markov heading
// can drift past pi); only the increment half-width alpha_n is bounded.
struct AngleSeq {
  std::vector<double> theta;
  double alpha_n = 0.0;
};

// Unit steps U_1..U_n of one realization, u[j-1] = U_j.
struct StepSeq {
  std::vector<Vec2> u;
};

// Draw the angles for spec from src: one uniform_symmetric draw per angle, in
// index order (Markov additionally accumulates the increments into headings).
AngleSeq gen_angles(const WalkSpec& spec, RandomSource& src);

// Deterministic Markov construction for tests: increments[0] is the initial
// heading Theta_2, increments[j] the j-th delta. All-zero input gives a
// constant zero heading, i.e. a straight path.
AngleSeq markov_from_increments(std::span<const double> increments, double alpha_n);

// U_1 = u1, U_j = rotation by theta_j of U_{j-1}. The running direction is
// renormalized to unit length every 1024 steps so multiplicative rounding
// drift stays below ~1e-12 over any walk length.
StepSeq angles_to_steps(const AngleSeq& angles, Vec2 u1);

// The interpolated path X_t = sum_{j <= floor(nt)} U_j + (nt - floor(nt)) U_{floor(nt)+1},
// stored as its n+1 vertices (vertex 0 at the origin) plus a display scale.
// Rescaled copies share the vertex array.
class Polyline {
 public:
  Polyline(std::vector<Vec2> vertices, double scale = 1.0);

  std::size_t step_count() const { return verts_->size() - 1; }
  double scale() const { return scale_; }

  // k-th vertex with the scale applied, k in [0, step_count()].
  Vec2 vertex(std::size_t k) const;

  // Path position at time t in [0, 1] (linear interpolation between
  // vertices); throws std::out_of_range outside [0, 1].
  Vec2 eval_at(double t) const;

  // Same vertices, scale multiplied by factor.
  Polyline with_scale_factor(double factor) const;

 private:
  std::shared_ptr<const std::vector<Vec2>> verts_;
  double scale_;
};

Polyline build_path(const StepSeq& steps);

// (1/n) X   -- fixed-length frame: n-step walk fits in the unit disk
// (1/sqrt n) X   -- diffusive frame
// (alpha_n/sqrt n) X  -- the constant-angle Brownian frame
enum class RescaleMode { ByN, BySqrtN, ByAlphaSqrtN };

// The scale factor a mode applies to an n-step walk. Shared by rescale() and
// the streaming estimators so both produce bit-identical values.
double rescale_factor(RescaleMode mode, std::uint64_t n, double alpha_n = 0.0);

// Multiplies the path scale by the mode's factor. ByAlphaSqrtN needs the
// walk's alpha_n (a polyline does not remember its angle law).
Polyline rescale(const Polyline& path, RescaleMode mode, double alpha_n = 0.0);

// Everything about one realization, generated in the canonical draw order:
// U_1 first (one uniform_circle draw), then the angle sequence.
struct WalkRealization {
  AngleSeq angles;
  StepSeq steps;
  Polyline path;
};

WalkRealization generate_walk(const WalkSpec& spec, RandomSource& src);

namespace detail {

// Incremental rotation with the same renormalization cadence as
// angles_to_steps; both paths through the code produce bit-identical steps.
class StepStream {
 public:
  static constexpr int kRenormEvery = 1024;

  explicit StepStream(Vec2 u1) : u_(u1) {}

  Vec2 current() const { return u_; }

  Vec2 advance(double theta) {
    u_ = rotated(u_, std::cos(theta), std::sin(theta));
    if (++since_renorm_ == kRenormEvery) {
      u_ = u_ * (1.0 / norm(u_));
      since_renorm_ = 0;
    }
    return u_;
  }

 private:
  Vec2 u_;
  int since_renorm_ = 0;
};

}  // namespace detail

// Single-pass walk: visit(j, U_j) for j = 1..n without materializing the
// path. Draw order (and hence every U_j) is bit-identical to generate_walk,
// so streaming estimators and path-based estimators agree exactly.
template <class Visitor>
void for_each_step(const WalkSpec& spec, RandomSource& src, Visitor&& visit) {
  spec.validate();
  const double alpha_n = spec.alpha_n();
  detail::StepStream stream(src.uniform_circle());
  visit(std::uint64_t{1}, stream.current());
  if (spec.construction == Construction::MarkovIncrements) {
    double heading = 0.0;
    for (std::uint64_t j = 2; j <= spec.n; ++j) {
      heading += src.uniform_symmetric(alpha_n);
      visit(j, stream.advance(heading));
    }
  } else {
    for (std::uint64_t j = 2; j <= spec.n; ++j) {
      visit(j, stream.advance(src.uniform_symmetric(alpha_n)));
    }
  }
}

}  // namespace anglewalk::walks
