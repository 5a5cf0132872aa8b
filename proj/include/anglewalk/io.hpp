#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "anglewalk/limits.hpp"
#include "anglewalk/montecarlo.hpp"
#include "anglewalk/walks.hpp"

// File formats. Everything here is byte-deterministic: the same inputs
// always serialize to the same bytes, which is what makes "re-run the
// printed command and diff" a meaningful check.
namespace anglewalk::io {

inline constexpr std::string_view kFormatVersion = "anglewalk v1";

// Shortest round-trip decimal form (std::to_chars); "0.1" not
// "0.10000000000000001", yet parsing recovers the exact double.
std::string format_double(double v);

// Enum <-> tag names used in files and on the command line.
std::string_view construction_name(walks::Construction c);
std::optional<walks::Construction> construction_from_name(std::string_view name);
std::string_view rescale_name(walks::RescaleMode m);
std::optional<walks::RescaleMode> rescale_from_name(std::string_view name);
std::string_view limit_kind_name(limits::Kind k);
std::optional<limits::Kind> limit_kind_from_name(std::string_view name);

// Walk path CSV: header comment
//   # anglewalk v1, seed=<seed>, construction=<tag>, n=<n>, scale=<s>, <spec params>
// then "t,x,y" rows, one per vertex, t = k/n.
std::string walk_csv(const walks::Polyline& path, const walks::WalkSpec& spec,
                     std::string_view seed_text);

// Limit path CSV: same header shape, tagged kind=bm|c1|c2 and grid=<m>, with
// "t,x,y,phi,driver" rows; phi/driver are written as 0 for ScaledBM.
std::string limit_csv(const limits::LimitRealization& real, const limits::LimitSpec& spec,
                      std::string_view seed_text);

struct RenderOptions {
  double width = 800.0;    // px
  double height = 800.0;   // px
  double stroke_width = 1.0;  // px
  double margin = 0.05;    // fraction of the data extent added on each side
  std::optional<std::pair<double, double>> zoom_window;  // [t_min, t_max] of vertices kept
};

// Single <polyline> with the viewBox fitted to the (windowed) data. The
// y axis is flipped so the figure has the usual mathematical orientation.
std::string svg_render(const walks::Polyline& path, const RenderOptions& opts,
                       std::string_view seed_text, std::string_view spec_comment);

// Experiment plan JSON:
// {
//   "seed": 1 | "0x5EED",
//   "replicates": 2000,
//   "target": {"type":"walk","construction":"iid","alpha":1.5707,"n":1000}
//           | {"type":"walk","construction":"iid-shrinking","coeff":6.28,"exponent":0.75,"n":1000}
//           | {"type":"limit","kind":"c2","kappa":16,"drift":"derived"|"paper"|0.25,"grid":1000},
//   "rescale": "none"|"by-n"|"by-sqrt-n"|"by-alpha-sqrt-n",   (optional)
//   "estimators": [{"name":"endpoint_sqnorm"}, {"name":"autocov","lag":2},
//                  {"name":"lipschitz_constant","grid":500}]
// }
montecarlo::ExperimentPlan plan_from_json(const nlohmann::json& j);
nlohmann::json plan_to_json(const montecarlo::ExperimentPlan& plan);

// Aggregated results, one JSON object per line per estimator:
// {"name":..., "params":{...}, "value":mean, "stderr":sd/sqrt(R),
//  "n_samples":R, "seed":"..."}
std::string results_jsonl(const montecarlo::ExperimentPlan& plan,
                          const std::vector<std::vector<double>>& values);

}  // namespace anglewalk::io
