#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "anglewalk/io.hpp"
#include "anglewalk/limits.hpp"
#include "anglewalk/montecarlo.hpp"
#include "anglewalk/sampling.hpp"
#include "anglewalk/walks.hpp"

using namespace anglewalk;
using sampling::Seed;

namespace {
constexpr double kPi = std::numbers::pi;

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}
}  // namespace

TEST_CASE("format_double: shortest form that round-trips") {
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(1.0) == "1");
  CHECK(io::format_double(-2.5) == "-2.5");
  for (double v : {kPi, 1e-9, 6.35e-6, 4494.234334708519, 0.30000000000000004}) {
    const std::string s = io::format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
}

TEST_CASE("tag names round-trip, unknown names are rejected") {
  using walks::Construction;
  using walks::RescaleMode;
  for (auto c : {Construction::IidConstant, Construction::IidShrinking,
                 Construction::MarkovIncrements}) {
    auto back = io::construction_from_name(io::construction_name(c));
    REQUIRE(back.has_value());
    CHECK(*back == c);
  }
  CHECK(io::construction_from_name("shrinking") == Construction::IidShrinking);
  CHECK_FALSE(io::construction_from_name("brownian").has_value());

  for (auto m : {RescaleMode::ByN, RescaleMode::BySqrtN, RescaleMode::ByAlphaSqrtN}) {
    auto back = io::rescale_from_name(io::rescale_name(m));
    REQUIRE(back.has_value());
    CHECK(*back == m);
  }
  CHECK_FALSE(io::rescale_from_name("none").has_value());

  for (auto k : {limits::Kind::ScaledBM, limits::Kind::LimitC1, limits::Kind::LimitC2}) {
    auto back = io::limit_kind_from_name(io::limit_kind_name(k));
    REQUIRE(back.has_value());
    CHECK(*back == k);
  }
  CHECK_FALSE(io::limit_kind_from_name("c3").has_value());
}

TEST_CASE("walk_csv: exact bytes for a hand-built path") {
  walks::WalkSpec spec;
  spec.construction = walks::Construction::IidConstant;
  spec.alpha = 0.5;
  spec.n = 2;
  const walks::Polyline path({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}});
  const std::string csv = io::walk_csv(path, spec, "9");
  CHECK(csv ==
        "# anglewalk v1, seed=9, construction=iid, n=2, scale=1, alpha=0.5\n"
        "t,x,y\n"
        "0,0,0\n"
        "0.5,1,0\n"
        "1,1,1\n");
}

TEST_CASE("walk_csv: shrinking spec params and row count") {
  walks::WalkSpec spec;
  spec.construction = walks::Construction::IidShrinking;
  spec.coeff = 2.0;
  spec.exponent = 0.75;
  spec.n = 100;
  auto src = sampling::derive_stream(Seed{4}, 0);
  const walks::WalkRealization w = walks::generate_walk(spec, src);
  const std::string csv = io::walk_csv(w.path, spec, "4");
  // header + column names + 101 vertices
  CHECK(count_lines(csv) == 103);
  const std::string header = csv.substr(0, csv.find('\n'));
  CHECK(header == "# anglewalk v1, seed=4, construction=iid-shrinking, n=100, scale=1"
                  ", coeff=2, exponent=0.75, alpha_n=" +
                      io::format_double(spec.alpha_n()));
}

TEST_CASE("limit_csv: kind/grid header and the phi/driver columns") {
  limits::LimitSpec spec;
  spec.kind = limits::Kind::LimitC2;
  spec.kappa = 16.0;
  spec.drift_coeff = limits::derived_drift(16.0);
  spec.grid = 100;
  auto src = sampling::derive_stream(Seed{1}, 0);
  const limits::LimitRealization real = limits::simulate(spec, src);
  const std::string csv = io::limit_csv(real, spec, "1");
  CHECK(count_lines(csv) == 103);
  const std::string header = csv.substr(0, csv.find('\n'));
  CHECK(header == "# anglewalk v1, seed=1, kind=c2, grid=100, scale=1, kappa=16"
                  ", drift_coeff=" +
                      io::format_double(spec.drift_coeff));
  CHECK(csv.find("t,x,y,phi,driver\n") != std::string::npos);

  // ScaledBM writes zero phi/driver columns
  limits::LimitSpec bm;
  bm.kind = limits::Kind::ScaledBM;
  bm.sigma = 0.5;
  bm.grid = 4;
  auto src2 = sampling::derive_stream(Seed{1}, 0);
  const std::string bmcsv = io::limit_csv(limits::simulate(bm, src2), bm, "1");
  CHECK(bmcsv.find("sigma=0.5") != std::string::npos);
  CHECK(bmcsv.find("0,0,0,0,0\n") != std::string::npos);  // t=0 row
}

TEST_CASE("svg_render: structure, determinism, zoom window") {
  auto src = sampling::derive_stream(Seed{6}, 0);
  walks::WalkSpec spec;
  spec.construction = walks::Construction::IidConstant;
  spec.alpha = kPi / 2.0;
  spec.n = 1000;
  const walks::WalkRealization w = walks::generate_walk(spec, src);

  io::RenderOptions opts;
  const std::string svg = io::svg_render(w.path, opts, "6", "construction=iid");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("viewBox=") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("construction=iid") != std::string::npos);

  // byte determinism
  CHECK(io::svg_render(w.path, opts, "6", "construction=iid") == svg);

  // zoom to the first tenth: vertices 0..100 -> 101 points -> 100 separators
  io::RenderOptions zoom = opts;
  zoom.zoom_window = {0.0, 0.1};
  const std::string zsvg = io::svg_render(w.path, zoom, "6", "construction=iid");
  const auto points_at = zsvg.find("points=\"");
  REQUIRE(points_at != std::string::npos);
  const auto points_end = zsvg.find('"', points_at + 8);
  const std::string points = zsvg.substr(points_at + 8, points_end - points_at - 8);
  std::size_t spaces = 0;
  for (char c : points)
    if (c == ' ') ++spaces;
  CHECK(spaces == 100);

  io::RenderOptions bad = opts;
  bad.zoom_window = {0.0, 0.0001};  // selects fewer than 2 vertices
  CHECK_THROWS_AS(io::svg_render(w.path, bad, "6", ""), std::invalid_argument);
  bad.zoom_window = {0.7, 0.2};
  CHECK_THROWS_AS(io::svg_render(w.path, bad, "6", ""), std::invalid_argument);
  io::RenderOptions degenerate = opts;
  degenerate.width = 0.0;
  CHECK_THROWS_AS(io::svg_render(w.path, degenerate, "6", ""), std::invalid_argument);
}

TEST_CASE("plan JSON: round trip preserves every field") {
  const std::string text = R"({
    "seed": "0x5EED",
    "replicates": 100,
    "target": {"type": "walk", "construction": "markov", "coeff": 4.0,
               "exponent": 1.5, "n": 1000},
    "rescale": "by-n",
    "estimators": [{"name": "endpoint_sqnorm"}, {"name": "autocov", "lag": 2},
                   {"name": "lipschitz_constant", "grid": 500}]
  })";
  const auto plan = io::plan_from_json(nlohmann::json::parse(text));
  CHECK(plan.master_seed.value == 0x5EED);
  CHECK(plan.seed_text == "0x5EED");
  CHECK(plan.replicates == 100);
  const auto& spec = std::get<walks::WalkSpec>(plan.target);
  CHECK(spec.construction == walks::Construction::MarkovIncrements);
  CHECK(spec.coeff == 4.0);
  CHECK(spec.exponent == 1.5);
  CHECK(spec.n == 1000);
  REQUIRE(plan.rescale.has_value());
  CHECK(*plan.rescale == walks::RescaleMode::ByN);
  REQUIRE(plan.estimators.size() == 3);
  CHECK(plan.estimators[1].lag == 2);
  CHECK(plan.estimators[2].grid == 500);

  // to_json -> from_json -> to_json is a fixed point
  const nlohmann::json once = io::plan_to_json(plan);
  const nlohmann::json twice = io::plan_to_json(io::plan_from_json(once));
  CHECK(once.dump() == twice.dump());
}

TEST_CASE("plan JSON: limit targets and numeric drift") {
  const std::string text = R"({
    "seed": 12,
    "replicates": 5,
    "target": {"type": "limit", "kind": "c2", "kappa": 16, "drift": "derived",
               "grid": 200},
    "estimators": [{"name": "curvature_at_mid"}]
  })";
  const auto plan = io::plan_from_json(nlohmann::json::parse(text));
  const auto& spec = std::get<limits::LimitSpec>(plan.target);
  CHECK(spec.kind == limits::Kind::LimitC2);
  CHECK(spec.kappa == 16.0);
  CHECK(spec.drift_coeff == doctest::Approx(limits::derived_drift(16.0)).epsilon(1e-15));
  CHECK(spec.grid == 200);
  CHECK_FALSE(plan.rescale.has_value());

  auto numeric = nlohmann::json::parse(text);
  numeric["target"]["drift"] = 0.25;
  CHECK(std::get<limits::LimitSpec>(io::plan_from_json(numeric).target).drift_coeff == 0.25);

  auto paper = nlohmann::json::parse(text);
  paper["target"]["drift"] = "paper";
  CHECK(std::get<limits::LimitSpec>(io::plan_from_json(paper).target).drift_coeff ==
        doctest::Approx(limits::paper_drift(16.0)).epsilon(1e-15));
}

TEST_CASE("plan JSON: malformed inputs are rejected") {
  auto parse = [](const char* text) { return io::plan_from_json(nlohmann::json::parse(text)); };
  CHECK_THROWS_AS(parse(R"({"replicates": 5})"), std::invalid_argument);
  CHECK_THROWS_AS(parse(R"({"seed": 1, "replicates": 5, "target": {"type": "thing"},
                            "estimators": [{"name": "endpoint_x"}]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse(R"({"seed": 1, "replicates": 5,
                            "target": {"type": "walk", "construction": "spiral", "n": 5},
                            "estimators": [{"name": "endpoint_x"}]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse(R"({"seed": 1, "replicates": 5,
                            "target": {"type": "walk", "construction": "iid",
                                       "alpha": 1.0, "n": 5},
                            "estimators": []})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse(R"({"seed": 1, "replicates": 5,
                            "target": {"type": "walk", "construction": "iid",
                                       "alpha": 1.0, "n": 5},
                            "rescale": "sideways",
                            "estimators": [{"name": "endpoint_x"}]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse(R"({"seed": "zzz", "replicates": 5,
                            "target": {"type": "walk", "construction": "iid",
                                       "alpha": 1.0, "n": 5},
                            "estimators": [{"name": "endpoint_x"}]})"),
                  std::invalid_argument);
  // misplaced keys must not be silently dropped: rescale belongs at the top
  // level, not inside the target
  CHECK_THROWS_AS(parse(R"({"seed": 1, "replicates": 5,
                            "target": {"type": "walk", "construction": "iid",
                                       "alpha": 1.0, "n": 5, "rescale": "by-n"},
                            "estimators": [{"name": "endpoint_x"}]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse(R"({"seed": 1, "replicates": 5, "workers": 4,
                            "target": {"type": "walk", "construction": "iid",
                                       "alpha": 1.0, "n": 5},
                            "estimators": [{"name": "endpoint_x"}]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse(R"({"seed": 1, "replicates": 5,
                            "target": {"type": "walk", "construction": "iid",
                                       "alpha": 1.0, "n": 5},
                            "estimators": [{"name": "autocov", "vertex": 3}]})"),
                  std::invalid_argument);
}

TEST_CASE("results_jsonl: one parseable record per estimator") {
  montecarlo::ExperimentPlan plan;
  plan.master_seed = Seed{5};
  plan.seed_text = "5";
  plan.replicates = 50;
  walks::WalkSpec spec;
  spec.construction = walks::Construction::IidConstant;
  spec.alpha = kPi / 2.0;
  spec.n = 200;
  plan.target = spec;
  plan.rescale = walks::RescaleMode::BySqrtN;
  plan.estimators = {{"endpoint_sqnorm"}, {"autocov", 3, 1000}};

  const auto values = montecarlo::run(plan);
  const std::string jsonl = io::results_jsonl(plan, values);
  CHECK(count_lines(jsonl) == 2);

  std::size_t start = 0;
  std::vector<nlohmann::json> records;
  while (start < jsonl.size()) {
    const auto end = jsonl.find('\n', start);
    records.push_back(nlohmann::json::parse(jsonl.substr(start, end - start)));
    start = end + 1;
  }
  REQUIRE(records.size() == 2);
  CHECK(records[0]["name"] == "endpoint_sqnorm");
  CHECK(records[0]["n_samples"] == 50);
  CHECK(records[0]["seed"] == "5");
  const auto agg = montecarlo::aggregate(values[0]);
  CHECK(records[0]["value"].get<double>() == doctest::Approx(agg.mean).epsilon(1e-15));
  CHECK(records[0]["stderr"].get<double>() ==
        doctest::Approx(agg.sd / std::sqrt(50.0)).epsilon(1e-12));
  CHECK(records[1]["name"] == "autocov");
  CHECK(records[1]["params"]["lag"] == 3);

  // byte determinism across runs
  CHECK(io::results_jsonl(plan, montecarlo::run(plan)) == jsonl);

  CHECK_THROWS_AS(io::results_jsonl(plan, {}), std::invalid_argument);
}
