#include "anglewalk/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

namespace anglewalk::io {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc{}) throw std::runtime_error("format_double: to_chars failed");
  return std::string(buf, res.ptr);
}

std::string_view construction_name(walks::Construction c) {
  switch (c) {
    case walks::Construction::IidConstant:
      return "iid";
    case walks::Construction::IidShrinking:
      return "iid-shrinking";
    case walks::Construction::MarkovIncrements:
      return "markov";
  }
  return "?";
}

std::optional<walks::Construction> construction_from_name(std::string_view name) {
  if (name == "iid") return walks::Construction::IidConstant;
  if (name == "iid-shrinking" || name == "shrinking") return walks::Construction::IidShrinking;
  if (name == "markov") return walks::Construction::MarkovIncrements;
  return std::nullopt;
}

std::string_view rescale_name(walks::RescaleMode m) {
  switch (m) {
    case walks::RescaleMode::ByN:
      return "by-n";
    case walks::RescaleMode::BySqrtN:
      return "by-sqrt-n";
    case walks::RescaleMode::ByAlphaSqrtN:
      return "by-alpha-sqrt-n";
  }
  return "?";
}

std::optional<walks::RescaleMode> rescale_from_name(std::string_view name) {
  if (name == "by-n") return walks::RescaleMode::ByN;
  if (name == "by-sqrt-n") return walks::RescaleMode::BySqrtN;
  if (name == "by-alpha-sqrt-n") return walks::RescaleMode::ByAlphaSqrtN;
  return std::nullopt;
}

std::string_view limit_kind_name(limits::Kind k) {
  switch (k) {
    case limits::Kind::ScaledBM:
      return "bm";
    case limits::Kind::LimitC1:
      return "c1";
    case limits::Kind::LimitC2:
      return "c2";
  }
  return "?";
}

std::optional<limits::Kind> limit_kind_from_name(std::string_view name) {
  if (name == "bm") return limits::Kind::ScaledBM;
  if (name == "c1") return limits::Kind::LimitC1;
  if (name == "c2") return limits::Kind::LimitC2;
  return std::nullopt;
}

namespace {

std::string walk_spec_params(const walks::WalkSpec& spec) {
  std::string out;
  if (spec.construction == walks::Construction::IidConstant) {
    out += ", alpha=" + format_double(spec.alpha);
  } else {
    out += ", coeff=" + format_double(spec.coeff);
    out += ", exponent=" + format_double(spec.exponent);
    out += ", alpha_n=" + format_double(spec.alpha_n());
  }
  return out;
}

std::string limit_spec_params(const limits::LimitSpec& spec) {
  if (spec.kind == limits::Kind::ScaledBM) {
    return ", sigma=" + format_double(spec.sigma);
  }
  return ", kappa=" + format_double(spec.kappa) +
         ", drift_coeff=" + format_double(spec.drift_coeff);
}

std::string csv_header(std::string_view seed_text, std::string_view tag_key,
                       std::string_view tag, std::string_view size_key, std::size_t n,
                       double scale, std::string_view params) {
  std::string out = "# ";
  out += kFormatVersion;
  out += ", seed=";
  out += seed_text;
  out += ", ";
  out += tag_key;
  out += '=';
  out += tag;
  out += ", ";
  out += size_key;
  out += '=' + std::to_string(n);
  out += ", scale=" + format_double(scale);
  out += params;
  out += "\n";
  return out;
}

}  // namespace

std::string walk_csv(const walks::Polyline& path, const walks::WalkSpec& spec,
                     std::string_view seed_text) {
  const std::size_t n = path.step_count();
  std::string out = csv_header(seed_text, "construction", construction_name(spec.construction),
                               "n", n, path.scale(), walk_spec_params(spec));
  out += "t,x,y\n";
  const auto nd = static_cast<double>(n);
  for (std::size_t k = 0; k <= n; ++k) {
    const Vec2 v = path.vertex(k);
    out += format_double(static_cast<double>(k) / nd);
    out += ',';
    out += format_double(v.x);
    out += ',';
    out += format_double(v.y);
    out += '\n';
  }
  return out;
}

std::string limit_csv(const limits::LimitRealization& real, const limits::LimitSpec& spec,
                      std::string_view seed_text) {
  const std::size_t m = real.path.step_count();
  std::string out = csv_header(seed_text, "kind", limit_kind_name(spec.kind), "grid", m,
                               real.path.scale(), limit_spec_params(spec));
  out += "t,x,y,phi,driver\n";
  const auto md = static_cast<double>(m);
  for (std::size_t k = 0; k <= m; ++k) {
    const Vec2 v = real.path.vertex(k);
    const double phi = real.phase.empty() ? 0.0 : real.phase[k];
    const double drv = real.driver.empty() ? 0.0 : real.driver[k];
    out += format_double(static_cast<double>(k) / md);
    out += ',';
    out += format_double(v.x);
    out += ',';
    out += format_double(v.y);
    out += ',';
    out += format_double(phi);
    out += ',';
    out += format_double(drv);
    out += '\n';
  }
  return out;
}

std::string svg_render(const walks::Polyline& path, const RenderOptions& opts,
                       std::string_view seed_text, std::string_view spec_comment) {
  if (!(opts.width > 0.0) || !(opts.height > 0.0)) {
    throw std::invalid_argument("svg_render: dimensions must be positive");
  }
  if (!(opts.margin >= 0.0)) throw std::invalid_argument("svg_render: margin must be >= 0");
  const std::size_t n = path.step_count();
  std::size_t k_min = 0, k_max = n;
  if (opts.zoom_window) {
    const auto [t0, t1] = *opts.zoom_window;
    if (!(t0 >= 0.0) || !(t0 < t1) || t1 > 1.0) {
      throw std::invalid_argument("svg_render: zoom window needs 0 <= t_min < t_max <= 1");
    }
    const auto nd = static_cast<double>(n);
    k_min = static_cast<std::size_t>(std::ceil(t0 * nd - 1e-9));
    k_max = static_cast<std::size_t>(std::floor(t1 * nd + 1e-9));
    if (k_max > n) k_max = n;
    if (k_min + 1 > k_max) {
      throw std::invalid_argument("svg_render: zoom window selects fewer than 2 vertices");
    }
  }

  // Bounding box in flipped-y coordinates (SVG y grows downward).
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
  for (std::size_t k = k_min; k <= k_max; ++k) {
    const Vec2 v = path.vertex(k);
    const double y = -v.y;
    if (k == k_min) {
      xmin = xmax = v.x;
      ymin = ymax = y;
    } else {
      xmin = std::min(xmin, v.x);
      xmax = std::max(xmax, v.x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  double span = std::max(xmax - xmin, ymax - ymin);
  if (span <= 0.0) span = 1.0;  // single point or exact overlap: arbitrary unit box
  const double pad = opts.margin * span;
  double bx = xmin - pad, by = ymin - pad;
  double bw = (xmax - xmin) + 2.0 * pad, bh = (ymax - ymin) + 2.0 * pad;
  if (bw <= 0.0) {
    bx -= 0.5 * span;
    bw = span;
  }
  if (bh <= 0.0) {
    by -= 0.5 * span;
    bh = span;
  }
  // stroke width given in px; convert to user units so it renders as asked
  const double stroke = opts.stroke_width * bw / opts.width;

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_double(opts.width) +
         "\" height=\"" + format_double(opts.height) + "\" viewBox=\"" + format_double(bx) +
         " " + format_double(by) + " " + format_double(bw) + " " + format_double(bh) + "\">\n";
  out += "<!-- ";
  out += kFormatVersion;
  out += ", seed=";
  out += seed_text;
  out += ", ";
  out += spec_comment;
  out += " -->\n";
  out += "<polyline fill=\"none\" stroke=\"#1a6fb5\" stroke-width=\"" + format_double(stroke) +
         "\" points=\"";
  for (std::size_t k = k_min; k <= k_max; ++k) {
    const Vec2 v = path.vertex(k);
    if (k != k_min) out += ' ';
    out += format_double(v.x);
    out += ',';
    out += format_double(-v.y);
  }
  out += "\"/>\n</svg>\n";
  return out;
}

namespace {

sampling::Seed seed_from_json(const json& j, std::string& seed_text) {
  if (j.is_number_unsigned() || j.is_number_integer()) {
    const auto v = j.get<std::uint64_t>();
    seed_text = std::to_string(v);
    return sampling::Seed{v};
  }
  if (j.is_string()) {
    seed_text = j.get<std::string>();
    const auto parsed = sampling::parse_seed(seed_text);
    if (!parsed) throw std::invalid_argument("plan: bad seed '" + seed_text + "'");
    return *parsed;
  }
  throw std::invalid_argument("plan: seed must be an integer or a string");
}

// Misplaced keys (e.g. "rescale" inside "target") would otherwise be dropped
// on the floor and silently change the experiment, so reject them loudly.
void require_known_keys(const json& obj, std::string_view where,
                        std::initializer_list<std::string_view> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const auto a : allowed) {
      if (item.key() == a) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw std::invalid_argument("plan: unknown key '" + item.key() + "' in " +
                                  std::string(where));
    }
  }
}

}  // namespace

montecarlo::ExperimentPlan plan_from_json(const json& j) {
  montecarlo::ExperimentPlan plan;
  if (!j.is_object()) throw std::invalid_argument("plan: not a JSON object");
  require_known_keys(j, "the plan", {"seed", "replicates", "target", "rescale", "estimators"});
  if (!j.contains("seed")) throw std::invalid_argument("plan: missing seed");
  plan.master_seed = seed_from_json(j.at("seed"), plan.seed_text);
  plan.replicates = j.value("replicates", std::size_t{1});

  const json& t = j.at("target");
  const std::string type = t.at("type").get<std::string>();
  if (type == "walk") {
    require_known_keys(t, "the walk target",
                       {"type", "construction", "alpha", "coeff", "exponent", "n"});
    walks::WalkSpec spec;
    const auto cname = t.at("construction").get<std::string>();
    const auto c = construction_from_name(cname);
    if (!c) throw std::invalid_argument("plan: unknown construction '" + cname + "'");
    spec.construction = *c;
    spec.alpha = t.value("alpha", 0.0);
    spec.coeff = t.value("coeff", 0.0);
    spec.exponent = t.value("exponent", 0.0);
    spec.n = t.at("n").get<std::uint64_t>();
    spec.validate();
    plan.target = spec;
  } else if (type == "limit") {
    require_known_keys(t, "the limit target", {"type", "kind", "sigma", "kappa", "drift", "grid"});
    limits::LimitSpec spec;
    const auto kname = t.at("kind").get<std::string>();
    const auto k = limit_kind_from_name(kname);
    if (!k) throw std::invalid_argument("plan: unknown limit kind '" + kname + "'");
    spec.kind = *k;
    spec.sigma = t.value("sigma", 1.0);
    spec.kappa = t.value("kappa", 0.0);
    spec.grid = t.at("grid").get<std::size_t>();
    if (spec.kind != limits::Kind::ScaledBM) {
      const json& d = t.at("drift");
      if (d.is_string()) {
        const auto rule = d.get<std::string>();
        if (rule == "derived") {
          spec.drift_coeff = limits::derived_drift(spec.kappa);
        } else if (rule == "paper") {
          spec.drift_coeff = limits::paper_drift(spec.kappa);
        } else {
          throw std::invalid_argument("plan: drift must be derived, paper, or a number");
        }
      } else {
        spec.drift_coeff = d.get<double>();
      }
    }
    spec.validate();
    plan.target = spec;
  } else {
    throw std::invalid_argument("plan: target type must be walk or limit");
  }

  if (j.contains("rescale")) {
    const auto rname = j.at("rescale").get<std::string>();
    if (rname != "none") {
      const auto mode = rescale_from_name(rname);
      if (!mode) throw std::invalid_argument("plan: unknown rescale '" + rname + "'");
      plan.rescale = mode;
    }
  }

  if (!j.contains("estimators") || !j.at("estimators").is_array() ||
      j.at("estimators").empty()) {
    throw std::invalid_argument("plan: estimators must be a nonempty array");
  }
  for (const json& e : j.at("estimators")) {
    require_known_keys(e, "an estimator", {"name", "lag", "grid"});
    montecarlo::EstimatorSpec es;
    es.name = e.at("name").get<std::string>();
    es.lag = e.value("lag", std::size_t{1});
    es.grid = e.value("grid", std::size_t{1000});
    plan.estimators.push_back(std::move(es));
  }
  return plan;
}

namespace {

json target_to_json(const montecarlo::ExperimentPlan& plan) {
  json t;
  if (const auto* w = std::get_if<walks::WalkSpec>(&plan.target)) {
    t["type"] = "walk";
    t["construction"] = std::string(construction_name(w->construction));
    if (w->construction == walks::Construction::IidConstant) {
      t["alpha"] = w->alpha;
    } else {
      t["coeff"] = w->coeff;
      t["exponent"] = w->exponent;
    }
    t["n"] = w->n;
  } else {
    const auto& l = std::get<limits::LimitSpec>(plan.target);
    t["type"] = "limit";
    t["kind"] = std::string(limit_kind_name(l.kind));
    if (l.kind == limits::Kind::ScaledBM) {
      t["sigma"] = l.sigma;
    } else {
      t["kappa"] = l.kappa;
      t["drift"] = l.drift_coeff;
    }
    t["grid"] = l.grid;
  }
  return t;
}

}  // namespace

json plan_to_json(const montecarlo::ExperimentPlan& plan) {
  json j;
  // seeds round-trip as text so hex spellings survive
  j["seed"] = plan.seed_text;
  j["replicates"] = plan.replicates;
  j["target"] = target_to_json(plan);
  j["rescale"] = plan.rescale ? std::string(rescale_name(*plan.rescale)) : "none";
  json ests = json::array();
  for (const auto& e : plan.estimators) {
    json je;
    je["name"] = e.name;
    if (e.name == "autocov") je["lag"] = e.lag;
    if (e.name == "lipschitz_constant") je["grid"] = e.grid;
    ests.push_back(std::move(je));
  }
  j["estimators"] = std::move(ests);
  return j;
}

std::string results_jsonl(const montecarlo::ExperimentPlan& plan,
                          const std::vector<std::vector<double>>& values) {
  if (values.size() != plan.estimators.size()) {
    throw std::invalid_argument("results_jsonl: values/estimators size mismatch");
  }
  std::string out;
  for (std::size_t e = 0; e < values.size(); ++e) {
    const auto stats = montecarlo::aggregate(values[e]);
    json rec;
    rec["name"] = plan.estimators[e].name;
    json params = target_to_json(plan);
    params["rescale"] = plan.rescale ? std::string(rescale_name(*plan.rescale)) : "none";
    if (plan.estimators[e].name == "autocov") params["lag"] = plan.estimators[e].lag;
    if (plan.estimators[e].name == "lipschitz_constant") params["grid"] = plan.estimators[e].grid;
    rec["params"] = std::move(params);
    rec["value"] = stats.mean;
    rec["stderr"] = stats.sd / std::sqrt(static_cast<double>(stats.count));
    rec["n_samples"] = stats.count;
    rec["seed"] = plan.seed_text;
    out += rec.dump();
    out += '\n';
  }
  return out;
}

}  // namespace anglewalk::io
