#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "anglewalk/analysis.hpp"
#include "anglewalk/io.hpp"
#include "anglewalk/limits.hpp"
#include "anglewalk/montecarlo.hpp"
#include "anglewalk/sampling.hpp"
#include "anglewalk/walks.hpp"

namespace py = pybind11;

namespace {

using namespace anglewalk;

walks::WalkSpec make_spec(const std::string& construction, std::uint64_t n, double alpha,
                          double coeff, double exponent) {
  auto cons = io::construction_from_name(construction);
  if (!cons) throw std::invalid_argument("unknown construction: " + construction);
  walks::WalkSpec spec;
  spec.construction = *cons;
  spec.alpha = alpha;
  spec.coeff = coeff;
  spec.exponent = exponent;
  spec.n = n;
  spec.validate();
  return spec;
}

py::array_t<double> vertices_array(const walks::Polyline& path) {
  const auto rows = static_cast<py::ssize_t>(path.step_count() + 1);
  py::array_t<double> out({rows, py::ssize_t{2}});
  auto buf = out.mutable_unchecked<2>();
  for (py::ssize_t k = 0; k < rows; ++k) {
    const Vec2 v = path.vertex(static_cast<std::size_t>(k));
    buf(k, 0) = v.x;
    buf(k, 1) = v.y;
  }
  return out;
}

py::array_t<double> copy_array(const std::vector<double>& v) {
  py::array_t<double> out({static_cast<py::ssize_t>(v.size())},
                          {static_cast<py::ssize_t>(sizeof(double))});
  std::memcpy(out.request().ptr, v.data(), v.size() * sizeof(double));
  return out;
}

}  // namespace

PYBIND11_MODULE(_anglewalk, m) {
  m.doc() = "angle-constrained planar random walks: simulation and analysis core";

  py::class_<walks::Polyline>(m, "Polyline")
      .def_property_readonly("step_count", &walks::Polyline::step_count)
      .def_property_readonly("scale", &walks::Polyline::scale)
      .def("vertex",
           [](const walks::Polyline& p, std::size_t k) {
             const Vec2 v = p.vertex(k);
             return py::make_tuple(v.x, v.y);
           },
           py::arg("k"))
      .def("eval_at",
           [](const walks::Polyline& p, double t) {
             const Vec2 v = p.eval_at(t);
             return py::make_tuple(v.x, v.y);
           },
           py::arg("t"))
      .def("vertices", &vertices_array,
           "all vertices with the scale applied, as an (n+1, 2) array");

  m.def(
      "simulate_walk",
      [](const std::string& construction, std::uint64_t n, double alpha, double coeff,
         double exponent, std::uint64_t seed, std::uint64_t stream,
         const std::string& rescale) {
        auto spec = make_spec(construction, n, alpha, coeff, exponent);
        auto src = sampling::derive_stream(sampling::Seed{seed}, stream);
        auto wr = walks::generate_walk(spec, src);
        if (rescale == "none") return wr.path;
        auto mode = io::rescale_from_name(rescale);
        if (!mode) throw std::invalid_argument("unknown rescale: " + rescale);
        return walks::rescale(wr.path, *mode, spec.alpha_n());
      },
      py::arg("construction"), py::arg("n"), py::arg("alpha") = 0.0,
      py::arg("coeff") = 0.0, py::arg("exponent") = 0.0, py::arg("seed") = 1,
      py::arg("stream") = 0, py::arg("rescale") = "none",
      "one walk realization as a Polyline; constructions: iid (uses alpha), "
      "iid-shrinking and markov (use coeff/exponent)");

  m.def(
      "walk_angles",
      [](const std::string& construction, std::uint64_t n, double alpha, double coeff,
         double exponent, std::uint64_t seed, std::uint64_t stream) {
        auto spec = make_spec(construction, n, alpha, coeff, exponent);
        auto src = sampling::derive_stream(sampling::Seed{seed}, stream);
        auto wr = walks::generate_walk(spec, src);
        return copy_array(wr.angles.theta);
      },
      py::arg("construction"), py::arg("n"), py::arg("alpha") = 0.0,
      py::arg("coeff") = 0.0, py::arg("exponent") = 0.0, py::arg("seed") = 1,
      py::arg("stream") = 0,
      "the turning angles Theta_2..Theta_n of the same realization simulate_walk "
      "produces for these arguments");

  py::class_<limits::LimitRealization>(m, "LimitRealization")
      .def_readonly("drift_coeff", &limits::LimitRealization::drift_coeff)
      .def_property_readonly("path",
                             [](const limits::LimitRealization& r) { return r.path; })
      .def_property_readonly(
          "phase", [](const limits::LimitRealization& r) { return copy_array(r.phase); })
      .def_property_readonly(
          "driver", [](const limits::LimitRealization& r) { return copy_array(r.driver); })
      .def("curvature_series", [](const limits::LimitRealization& r) {
        auto pts = limits::limit_curvature_series(r);
        py::array_t<double> out({static_cast<py::ssize_t>(pts.size()), py::ssize_t{2}});
        auto buf = out.mutable_unchecked<2>();
        for (py::ssize_t i = 0; i < static_cast<py::ssize_t>(pts.size()); ++i) {
          buf(i, 0) = pts[static_cast<std::size_t>(i)].t;
          buf(i, 1) = pts[static_cast<std::size_t>(i)].curvature;
        }
        return out;
      });

  m.def(
      "simulate_limit",
      [](const std::string& kind, std::size_t grid, double sigma, double kappa,
         const std::string& drift, std::uint64_t seed, std::uint64_t stream) {
        auto k = io::limit_kind_from_name(kind);
        if (!k) throw std::invalid_argument("unknown limit kind: " + kind);
        limits::LimitSpec spec;
        spec.kind = *k;
        spec.sigma = sigma;
        spec.kappa = kappa;
        spec.grid = grid;
        if (*k != limits::Kind::ScaledBM) {
          if (drift == "derived") {
            spec.drift_coeff = limits::derived_drift(kappa);
          } else if (drift == "paper") {
            spec.drift_coeff = limits::paper_drift(kappa);
          } else {
            spec.drift_coeff = std::stod(drift);
          }
        }
        spec.validate();
        auto src = sampling::derive_stream(sampling::Seed{seed}, stream);
        return limits::simulate(spec, src);
      },
      py::arg("kind"), py::arg("grid"), py::arg("sigma") = 1.0, py::arg("kappa") = 0.0,
      py::arg("drift") = "derived", py::arg("seed") = 1, py::arg("stream") = 0,
      "one limit-process realization; kinds: bm (uses sigma), c1 and c2 (use kappa "
      "and drift, where drift is 'derived', 'paper', or a number)");

  m.def("sinc", &analysis::sinc, py::arg("a"));
  m.def("sigma_alpha_sq", &analysis::sigma_alpha_sq, py::arg("alpha"));
  m.def("step_autocov_exact", &analysis::step_autocov_exact, py::arg("alpha"),
        py::arg("k"));
  m.def("msd_exact", &analysis::msd_exact, py::arg("alpha"), py::arg("n"));
  m.def("tv_fourier_bound", &analysis::tv_fourier_bound, py::arg("alpha"), py::arg("r"),
        py::arg("truncation") = 1000000);
  m.def("tv_packaged_bound", &analysis::tv_packaged_bound, py::arg("alpha"), py::arg("r"),
        py::arg("amplitude") = 1.0);
  m.def(
      "tv_empirical",
      [](const std::vector<double>& angles, int bins) {
        return analysis::tv_empirical(angles, bins);
      },
      py::arg("angles"), py::arg("bins") = 256);
  m.def("discrete_curvature", &analysis::discrete_curvature, py::arg("path"),
        py::arg("i"));
  m.def("lipschitz_constant", &analysis::lipschitz_constant, py::arg("path"),
        py::arg("grid"));
  m.def(
      "scaling_fit",
      [](const std::vector<double>& x, const std::vector<double>& y) {
        auto fit = analysis::scaling_fit(x, y);
        return py::dict(py::arg("exponent") = fit.exponent,
                        py::arg("log_prefactor") = fit.log_prefactor,
                        py::arg("r_squared") = fit.r_squared);
      },
      py::arg("x"), py::arg("y"));
  m.def("derived_drift", &limits::derived_drift, py::arg("kappa"));
  m.def("paper_drift", &limits::paper_drift, py::arg("kappa"));

  m.def(
      "aggregate",
      [](const std::vector<double>& values) {
        auto s = montecarlo::aggregate(values);
        return py::dict(py::arg("mean") = s.mean, py::arg("sd") = s.sd,
                        py::arg("ci_halfwidth") = s.ci_halfwidth,
                        py::arg("count") = s.count);
      },
      py::arg("values"));
  m.def(
      "ks_two_sample",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        auto r = montecarlo::ks_two_sample(a, b);
        return py::dict(py::arg("statistic") = r.statistic, py::arg("n_a") = r.n_a,
                        py::arg("n_b") = r.n_b);
      },
      py::arg("a"), py::arg("b"));
}
