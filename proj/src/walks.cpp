#include "anglewalk/walks.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

namespace anglewalk::walks {

double WalkSpec::alpha_n() const {
  if (construction == Construction::IidConstant) return alpha;
  return coeff * std::pow(static_cast<double>(n), -exponent);
}

void WalkSpec::validate() const {
  if (n < 1) throw std::invalid_argument("WalkSpec: n must be >= 1");
  if (construction != Construction::IidConstant) {
    if (!(coeff > 0.0)) throw std::invalid_argument("WalkSpec: coeff must be > 0");
    if (!(exponent >= 0.0)) throw std::invalid_argument("WalkSpec: exponent must be >= 0");
  }
  const double a = alpha_n();
  if (!(a > 0.0) || a > std::numbers::pi) {
    throw std::invalid_argument("WalkSpec: half-width alpha_n = " + std::to_string(a) +
                                " outside (0, pi] at n = " + std::to_string(n));
  }
}

AngleSeq gen_angles(const WalkSpec& spec, RandomSource& src) {
  spec.validate();
  AngleSeq out;
  out.alpha_n = spec.alpha_n();
  if (spec.n < 2) return out;
  out.theta.reserve(spec.n - 1);
  if (spec.construction == Construction::MarkovIncrements) {
    // heading accumulation must match for_each_step exactly (bit-identical)
    double heading = 0.0;
    for (std::uint64_t j = 2; j <= spec.n; ++j) {
      heading += src.uniform_symmetric(out.alpha_n);
      out.theta.push_back(heading);
    }
  } else {
    for (std::uint64_t j = 2; j <= spec.n; ++j) {
      out.theta.push_back(src.uniform_symmetric(out.alpha_n));
    }
  }
  return out;
}

AngleSeq markov_from_increments(std::span<const double> increments, double alpha_n) {
  AngleSeq out;
  out.alpha_n = alpha_n;
  out.theta.reserve(increments.size());
  double heading = 0.0;
  for (double delta : increments) {
    heading += delta;
    out.theta.push_back(heading);
  }
  return out;
}

StepSeq angles_to_steps(const AngleSeq& angles, Vec2 u1) {
  StepSeq out;
  out.u.reserve(angles.theta.size() + 1);
  detail::StepStream stream(u1);
  out.u.push_back(stream.current());
  for (double theta : angles.theta) out.u.push_back(stream.advance(theta));
  return out;
}

Polyline::Polyline(std::vector<Vec2> vertices, double scale)
    : verts_(std::make_shared<const std::vector<Vec2>>(std::move(vertices))),
      scale_(scale) {
  if (verts_->size() < 2) {
    throw std::invalid_argument("Polyline: need at least 2 vertices");
  }
}

Vec2 Polyline::vertex(std::size_t k) const {
  if (k >= verts_->size()) throw std::out_of_range("Polyline::vertex: index past end");
  return (*verts_)[k] * scale_;
}

Vec2 Polyline::eval_at(double t) const {
  if (!(t >= 0.0) || t > 1.0) {
    throw std::out_of_range("Polyline::eval_at: t = " + std::to_string(t) +
                            " outside [0, 1]");
  }
  const auto& v = *verts_;
  const double nt = t * static_cast<double>(step_count());
  auto k = static_cast<std::size_t>(nt);
  if (k >= step_count()) return v.back() * scale_;
  const double frac = nt - static_cast<double>(k);
  return (v[k] + frac * (v[k + 1] - v[k])) * scale_;
}

Polyline Polyline::with_scale_factor(double factor) const {
  Polyline copy = *this;
  copy.scale_ *= factor;
  return copy;
}

Polyline build_path(const StepSeq& steps) {
  std::vector<Vec2> verts;
  verts.reserve(steps.u.size() + 1);
  Vec2 pos{0.0, 0.0};
  verts.push_back(pos);
  for (Vec2 u : steps.u) {
    pos += u;
    verts.push_back(pos);
  }
  return Polyline(std::move(verts));
}

double rescale_factor(RescaleMode mode, std::uint64_t n, double alpha_n) {
  const auto nd = static_cast<double>(n);
  switch (mode) {
    case RescaleMode::ByN:
      return 1.0 / nd;
    case RescaleMode::BySqrtN:
      return 1.0 / std::sqrt(nd);
    case RescaleMode::ByAlphaSqrtN:
      if (!(alpha_n > 0.0)) {
        throw std::invalid_argument("rescale: ByAlphaSqrtN needs alpha_n > 0");
      }
      return alpha_n / std::sqrt(nd);
  }
  throw std::invalid_argument("rescale: unknown mode");
}

Polyline rescale(const Polyline& path, RescaleMode mode, double alpha_n) {
  return path.with_scale_factor(rescale_factor(mode, path.step_count(), alpha_n));
}

WalkRealization generate_walk(const WalkSpec& spec, RandomSource& src) {
  spec.validate();
  const Vec2 u1 = src.uniform_circle();
  AngleSeq angles = gen_angles(spec, src);
  StepSeq steps = angles_to_steps(angles, u1);
  Polyline path = build_path(steps);
  return WalkRealization{std::move(angles), std::move(steps), std::move(path)};
}

}  // namespace anglewalk::walks
