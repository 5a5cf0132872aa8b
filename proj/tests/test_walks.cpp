#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "anglewalk/sampling.hpp"
#include "anglewalk/walks.hpp"

using namespace anglewalk;
using sampling::Seed;
using namespace walks;

namespace {
constexpr double kPi = std::numbers::pi;

WalkSpec iid_spec(double alpha, std::uint64_t n) {
  WalkSpec s;
  s.construction = Construction::IidConstant;
  s.alpha = alpha;
  s.n = n;
  return s;
}
}  // namespace

TEST_CASE("WalkSpec validation and alpha_n") {
  SUBCASE("iid constant uses alpha directly") {
    CHECK(iid_spec(0.7, 10).alpha_n() == 0.7);
    CHECK_NOTHROW(iid_spec(kPi, 10).validate());
  }

  SUBCASE("shrinking and markov schedules evaluate coeff * n^-exponent") {
    WalkSpec s;
    s.construction = Construction::MarkovIncrements;
    s.coeff = 4.0;
    s.exponent = 1.5;
    s.n = 10000;
    CHECK(s.alpha_n() == doctest::Approx(4e-6).epsilon(1e-12));
    // the schedule keeps n^3 alpha_n^2 pinned at coeff^2
    const double n3a2 =
        std::pow(static_cast<double>(s.n), 3.0) * s.alpha_n() * s.alpha_n();
    CHECK(n3a2 == doctest::Approx(16.0).epsilon(1e-9));
  }

  SUBCASE("invalid configurations throw") {
    CHECK_THROWS_AS(iid_spec(0.5, 0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(iid_spec(0.0, 10).validate(), std::invalid_argument);
    CHECK_THROWS_AS(iid_spec(kPi + 1e-6, 10).validate(), std::invalid_argument);

    WalkSpec s;
    s.construction = Construction::IidShrinking;
    s.coeff = 10.0;
    s.exponent = 0.0;
    s.n = 5;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);  // alpha_n = 10 > pi

    s.coeff = -1.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);

    s.coeff = 0.1;
    s.exponent = -2.0;  // alpha_n = 0.1 * 25 > pi at n = 5
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  }
}

TEST_CASE("markov_from_increments accumulates headings") {
  SUBCASE("all-zero increments give a constant zero heading") {
    const std::vector<double> inc(5, 0.0);
    const AngleSeq a = markov_from_increments(inc, 0.5);
    REQUIRE(a.theta.size() == 5);
    for (double t : a.theta) CHECK(t == 0.0);
    CHECK(a.alpha_n == 0.5);
  }

  SUBCASE("heading is the running sum, first entry included") {
    const std::vector<double> inc = {0.1, 0.2, -0.05};
    const AngleSeq a = markov_from_increments(inc, 0.3);
    REQUIRE(a.theta.size() == 3);
    CHECK(a.theta[0] == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(a.theta[1] == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(a.theta[2] == doctest::Approx(0.25).epsilon(1e-15));
  }

  SUBCASE("zero initial heading keeps the path straight") {
    const std::vector<double> inc(100, 0.0);
    const StepSeq steps = angles_to_steps(markov_from_increments(inc, 0.1), {0.6, 0.8});
    for (const Vec2& u : steps.u) {
      CHECK(u.x == 0.6);
      CHECK(u.y == 0.8);
    }
  }
}

TEST_CASE("gen_angles: sizes and the iid angle law") {
  auto src = sampling::derive_stream(Seed{21}, 0);
  const AngleSeq a = gen_angles(iid_spec(kPi / 2.0, 1000), src);
  CHECK(a.theta.size() == 999);
  CHECK(a.alpha_n == kPi / 2.0);

  // sample variance of Theta over a long walk: uniform[-pi/2, pi/2] has
  // variance pi^2/12
  auto src2 = sampling::derive_stream(Seed{21}, 1);
  const AngleSeq big = gen_angles(iid_spec(kPi / 2.0, 100001), src2);
  double sum = 0.0, sum2 = 0.0;
  for (double t : big.theta) {
    sum += t;
    sum2 += t * t;
  }
  const double m = sum / static_cast<double>(big.theta.size());
  const double var = sum2 / static_cast<double>(big.theta.size()) - m * m;
  CHECK(var == doctest::Approx(kPi * kPi / 12.0).epsilon(0.01));
}

TEST_CASE("angles_to_steps: rotation bookkeeping") {
  SUBCASE("half turn flips the direction") {
    AngleSeq a;
    a.theta = {kPi};
    a.alpha_n = kPi;
    const StepSeq steps = angles_to_steps(a, {1.0, 0.0});
    REQUIRE(steps.u.size() == 2);
    CHECK(steps.u[1].x == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(std::abs(steps.u[1].y) < 1e-15);
  }

  SUBCASE("unit norm holds to 1e-12 over 1e4 steps") {
    auto src = sampling::derive_stream(Seed{23}, 0);
    const WalkRealization w = generate_walk(iid_spec(2.0, 10000), src);
    double worst = 0.0;
    for (const Vec2& u : w.steps.u) worst = std::max(worst, std::abs(norm(u) - 1.0));
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("Polyline eval_at: interpolation and range checks") {
  // vertices (0,0), (1,0), (1,1): two steps
  Polyline p({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}});
  CHECK(p.step_count() == 2);

  const Vec2 at0 = p.eval_at(0.0);
  CHECK(at0.x == 0.0);
  CHECK(at0.y == 0.0);

  const Vec2 mid = p.eval_at(0.75);  // nt = 1.5: halfway along the second step
  CHECK(mid.x == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(mid.y == doctest::Approx(0.5).epsilon(1e-15));

  const Vec2 end = p.eval_at(1.0);
  CHECK(end.x == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(end.y == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(p.eval_at(-0.001), std::out_of_range);
  CHECK_THROWS_AS(p.eval_at(1.001), std::out_of_range);
}

TEST_CASE("Polyline vertices are prefix sums of the steps") {
  auto src = sampling::derive_stream(Seed{29}, 0);
  const WalkRealization w = generate_walk(iid_spec(1.0, 500), src);
  Vec2 acc{0.0, 0.0};
  CHECK(w.path.vertex(0).x == 0.0);
  CHECK(w.path.vertex(0).y == 0.0);
  for (std::size_t j = 0; j < w.steps.u.size(); ++j) {
    acc += w.steps.u[j];
    CHECK(w.path.vertex(j + 1).x == acc.x);
    CHECK(w.path.vertex(j + 1).y == acc.y);
  }
}

TEST_CASE("rescale: factors and endpoint arithmetic") {
  SUBCASE("ByN maps a displacement of (4,0) over 4 steps to (1,0)") {
    Polyline p({{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}});
    const Polyline q = rescale(p, RescaleMode::ByN);
    CHECK(q.vertex(4).x == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(q.vertex(4).y == 0.0);
  }

  SUBCASE("BySqrtN maps an endpoint (10,0) over 100 steps to (1,0)") {
    std::vector<Vec2> verts(101);
    for (int k = 0; k <= 100; ++k) verts[static_cast<std::size_t>(k)] = {0.1 * k, 0.0};
    const Polyline q = rescale(Polyline(std::move(verts)), RescaleMode::BySqrtN);
    CHECK(q.vertex(100).x == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("ByAlphaSqrtN factor is alpha_n / sqrt(n)") {
    // alpha_n = 16^{-1/4} = 1/2, sqrt(16) = 4 -> factor 1/8
    CHECK(rescale_factor(RescaleMode::ByAlphaSqrtN, 16, 0.5) == 0.125);
    CHECK(rescale_factor(RescaleMode::ByN, 4) == 0.25);
    CHECK(rescale_factor(RescaleMode::BySqrtN, 100) == 0.1);
  }

  SUBCASE("rescale composes through the scale field, vertices shared") {
    Polyline p({{0, 0}, {1, 0}});
    const Polyline q = rescale(p, RescaleMode::ByN);
    CHECK(p.scale() == 1.0);
    CHECK(q.scale() == 1.0);  // n = 1
    const Polyline r = q.with_scale_factor(0.5);
    CHECK(r.scale() == 0.5);
    CHECK(r.vertex(1).x == 0.5);
  }
}

TEST_CASE("rotation invariance: rotating u1 rotates every vertex") {
  auto src = sampling::derive_stream(Seed{31}, 0);
  const AngleSeq angles = gen_angles(iid_spec(kPi / 2.0, 1000), src);

  const double phi = 0.7;
  const double c = std::cos(phi), s = std::sin(phi);
  const Polyline base = build_path(angles_to_steps(angles, {1.0, 0.0}));
  const Polyline rot = build_path(angles_to_steps(angles, rotated({1.0, 0.0}, c, s)));

  double worst = 0.0;
  for (std::size_t k = 0; k <= base.step_count(); ++k) {
    const Vec2 expect = rotated(base.vertex(k), c, s);
    worst = std::max(worst, norm(rot.vertex(k) - expect));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("stationarity: lag-5 estimates agree across disjoint windows") {
  auto src = sampling::derive_stream(Seed{37}, 0);
  const WalkRealization w = generate_walk(iid_spec(kPi / 2.0, 200000), src);
  const std::size_t half = 100000, lag = 5;

  auto window_stats = [&](std::size_t begin) {
    // batch means over 100 batches of 1000 products; lag products are
    // serially correlated, so the SE comes from the batch means
    const std::size_t batches = 100, per = 1000;
    double grand = 0.0;
    std::vector<double> bm(batches, 0.0);
    for (std::size_t b = 0; b < batches; ++b) {
      double acc = 0.0;
      for (std::size_t i = 0; i < per; ++i) {
        const std::size_t j = begin + b * per + i;
        acc += dot(w.steps.u[j], w.steps.u[j + lag]);
      }
      bm[b] = acc / static_cast<double>(per);
      grand += bm[b];
    }
    grand /= static_cast<double>(batches);
    double var = 0.0;
    for (double m : bm) var += (m - grand) * (m - grand);
    var /= static_cast<double>(batches - 1);
    const double se = std::sqrt(var / static_cast<double>(batches));
    return std::pair<double, double>{grand, se};
  };

  const auto [m1, se1] = window_stats(0);
  const auto [m2, se2] = window_stats(half);
  CHECK(std::abs(m1 - m2) <= 3.0 * std::sqrt(se1 * se1 + se2 * se2));
}

TEST_CASE("for_each_step matches generate_walk bit for bit") {
  WalkSpec spec;
  spec.construction = Construction::MarkovIncrements;
  spec.coeff = 2.0;
  spec.exponent = 1.0;
  spec.n = 5000;

  auto src_stream = sampling::derive_stream(Seed{9}, 0);
  std::vector<Vec2> streamed;
  streamed.reserve(spec.n);
  for_each_step(spec, src_stream, [&](std::uint64_t, Vec2 u) { streamed.push_back(u); });

  auto src_batch = sampling::derive_stream(Seed{9}, 0);
  const WalkRealization w = generate_walk(spec, src_batch);

  REQUIRE(streamed.size() == w.steps.u.size());
  for (std::size_t j = 0; j < streamed.size(); ++j) {
    CHECK(streamed[j].x == w.steps.u[j].x);
    CHECK(streamed[j].y == w.steps.u[j].y);
  }
}

TEST_CASE("n = 1 walk: no angles, a single step") {
  auto src = sampling::derive_stream(Seed{41}, 0);
  const WalkRealization w = generate_walk(iid_spec(1.0, 1), src);
  CHECK(w.angles.theta.empty());
  CHECK(w.steps.u.size() == 1);
  CHECK(w.path.step_count() == 1);
  const Vec2 end = w.path.eval_at(1.0);
  CHECK(end.x == w.steps.u[0].x);
  CHECK(end.y == w.steps.u[0].y);
}
