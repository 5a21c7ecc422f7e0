#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "radmax/covering.hpp"
#include "radmax/dilation_set.hpp"
#include "radmax/experiments.hpp"
#include "radmax/io_util.hpp"
#include "radmax/maximal.hpp"
#include "radmax/regions.hpp"
#include "radmax/spherical.hpp"

namespace py = pybind11;
using namespace radmax;

namespace {

py::object json_to_py(const io::json& j) {
  switch (j.type()) {
    case io::json::value_t::null: return py::none();
    case io::json::value_t::boolean: return py::bool_(j.get<bool>());
    case io::json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case io::json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case io::json::value_t::number_float: return py::float_(j.get<double>());
    case io::json::value_t::string: return py::str(j.get<std::string>());
    case io::json::value_t::array: {
      py::list out;
      for (const auto& item : j) out.append(json_to_py(item));
      return out;
    }
    case io::json::value_t::object: {
      py::dict out;
      for (const auto& [key, value] : j.items())
        out[py::str(key)] = json_to_py(value);
      return out;
    }
    default: return py::none();
  }
}

DilationSet set_from_spec_json(const std::string& text) {
  return generate(io::set_spec_from_json(io::json::parse(text)));
}

RadialFunction fn_from_json(const std::string& text) {
  return io::radial_function_from_json(io::json::parse(text));
}

py::dict fit_dict(const ExponentFit& f) {
  py::dict d;
  d["slope"] = f.slope;
  d["intercept"] = f.intercept;
  d["r_squared"] = f.r_squared;
  d["m_min"] = f.m_min;
  d["m_max"] = f.m_max;
  return d;
}

std::pair<std::pair<std::int64_t, std::int64_t>, std::pair<std::int64_t, std::int64_t>>
vertex_tuple(const ExponentPair& v) {
  return {{v.inv_p.num(), v.inv_p.den()}, {v.inv_q.num(), v.inv_q.den()}};
}

}  // namespace

PYBIND11_MODULE(radmax, m) {
  m.doc() = "spherical maximal averages over fractal dilation sets, radial case";

  py::register_exception<EmptyWindowError>(m, "EmptyWindowError");
  py::register_exception<ConvergenceError>(m, "QuadratureConvergenceError");

  py::class_<AnalyticProfile>(m, "AnalyticProfile")
      .def_readonly("beta", &AnalyticProfile::beta)
      .def_readonly("gamma", &AnalyticProfile::gamma)
      .def_readonly("sup_delta_beta_N_finite", &AnalyticProfile::sup_delta_beta_N_finite)
      .def_readonly("sup_delta_log_N_finite", &AnalyticProfile::sup_delta_log_N_finite)
      .def_readonly("power_law", &AnalyticProfile::power_law)
      .def_readonly("description", &AnalyticProfile::description);

  py::class_<DilationSet>(m, "DilationSet")
      .def_property_readonly("depth", &DilationSet::depth)
      .def_property_readonly("cells", [](const DilationSet& s) { return s.cells(); })
      .def_property_readonly("profile",
                             [](const DilationSet& s) -> py::object {
                               if (!s.profile()) return py::none();
                               return py::cast(*s.profile());
                             })
      .def("to_json", [](const DilationSet& s) {
        return io::dilation_set_to_json(s).dump();
      });

  m.def("generate", &set_from_spec_json, py::arg("spec_json"),
        "Build a dilation set from a JSON generator spec.");
  m.def("restrict",
        [](const DilationSet& s, int level, std::uint64_t position) {
          return restrict_to(s, WindowSpec{level, position});
        },
        py::arg("set"), py::arg("level"), py::arg("position"));
  m.def("ancestors",
        [](const DilationSet& s, int level) { return ancestors(s, level); },
        py::arg("set"), py::arg("level"));

  py::class_<CoveringProfile>(m, "CoveringProfile")
      .def_property_readonly("depth", &CoveringProfile::depth)
      .def("count", &CoveringProfile::count, py::arg("k"), py::arg("m"))
      .def("global_count", &CoveringProfile::global_count, py::arg("m"));
  m.def("covering_profile",
        [](const DilationSet& s) { return CoveringProfile(s); }, py::arg("set"));

  m.def("minkowski_estimate",
        [](const CoveringProfile& p, int m_min, int m_max) {
          return fit_dict(minkowski_estimate(p, {m_min, m_max}));
        },
        py::arg("profile"), py::arg("m_min"), py::arg("m_max"));
  m.def("nu_sharp_estimate",
        [](const CoveringProfile& p, double alpha, int m_min, int m_max) {
          return fit_dict(nu_sharp_estimate(p, alpha, {m_min, m_max}));
        },
        py::arg("profile"), py::arg("alpha"), py::arg("m_min"), py::arg("m_max"));
  m.def("assouad_spectrum_estimate",
        [](const CoveringProfile& p, const std::vector<double>& thetas, int m_min,
           int m_max) {
          py::list out;
          for (const auto& [theta, fit] :
               assouad_spectrum_estimate(p, thetas, {m_min, m_max})) {
            py::dict row = fit_dict(fit);
            row["theta"] = theta;
            out.append(row);
          }
          return out;
        },
        py::arg("profile"), py::arg("thetas"), py::arg("m_min"), py::arg("m_max"));
  m.def("legendre_nu_sharp", &legendre_nu_sharp, py::arg("nu_profile"),
        py::arg("alpha"));
  m.def("omega_mpq", &omega_mpq, py::arg("profile"), py::arg("p"), py::arg("q"),
        py::arg("m"), py::arg("k"));
  m.def("fracprop_check",
        [](const CoveringProfile& p, double beta, double gamma,
           const std::vector<double>& alphas, double slack, int m_min, int m_max) {
          const auto rep = fracprop_check(p, beta, gamma, alphas, slack, {m_min, m_max});
          py::list rows;
          for (const auto& r : rep.rows) {
            py::dict d;
            d["alpha"] = r.alpha;
            d["estimate"] = r.estimate;
            d["lower"] = r.lower;
            d["upper"] = r.upper;
            d["pass"] = r.pass;
            rows.append(d);
          }
          py::dict out;
          out["rows"] = rows;
          out["all_pass"] = rep.all_pass;
          return out;
        },
        py::arg("profile"), py::arg("beta"), py::arg("gamma"), py::arg("alphas"),
        py::arg("slack"), py::arg("m_min"), py::arg("m_max"));

  m.def("triangle_vertices",
        [](int d, const std::string& beta) {
          py::list out;
          for (const auto& v : triangle_vertices(d, Rational::parse(beta)))
            out.append(vertex_tuple(v));
          return out;
        },
        py::arg("d"), py::arg("beta"));
  m.def("quadrangle_vertices_radial",
        [](const std::string& beta, const std::string& gamma) {
          py::list out;
          for (const auto& v :
               quadrangle_vertices_radial(Rational::parse(beta), Rational::parse(gamma)))
            out.append(vertex_tuple(v));
          return out;
        },
        py::arg("beta"), py::arg("gamma"));
  m.def("quadrangle_vertices_general",
        [](int d, const std::string& beta, const std::string& gamma) {
          py::list out;
          for (const auto& v : quadrangle_vertices_general(d, Rational::parse(beta),
                                                           Rational::parse(gamma)))
            out.append(vertex_tuple(v));
          return out;
        },
        py::arg("d"), py::arg("beta"), py::arg("gamma"));
  m.def("region_membership",
        [](int d, const std::string& beta, const std::string& gamma,
           const std::string& mode, const std::string& inv_p, const std::string& inv_q) {
          const TypeRegion region =
              mode == "closure"
                  ? TypeRegion::closure2(Rational::parse(beta), Rational::parse(gamma))
                  : TypeRegion::triangle(d, Rational::parse(beta));
          const Membership res = region_membership(
              region, {Rational::parse(inv_p), Rational::parse(inv_q)});
          return res == Membership::interior   ? "interior"
                 : res == Membership::boundary ? "boundary"
                                               : "exterior";
        },
        py::arg("d"), py::arg("beta"), py::arg("gamma"), py::arg("mode"),
        py::arg("inv_p"), py::arg("inv_q"));
  m.def("endpoint_classify",
        [](const AnalyticProfile& profile, int d, const std::string& inv_p,
           const std::string& inv_q) {
          const auto res = endpoint_classify(
              profile, d, {Rational::parse(inv_p), Rational::parse(inv_q)});
          py::dict out;
          out["verdict"] = res.verdict == EndpointVerdict::in_T       ? "in_T"
                           : res.verdict == EndpointVerdict::not_in_T ? "not_in_T"
                                                                      : "unresolved";
          out["case"] = res.case_id;
          out["detail"] = res.detail;
          return out;
        },
        py::arg("profile"), py::arg("d"), py::arg("inv_p"), py::arg("inv_q"));

  m.def("kernel", &kernel, py::arg("d"), py::arg("t"), py::arg("r"), py::arg("s"));
  m.def("sphere_average",
        [](const std::string& fn_json, int d, double r, double t, double tol) {
          const auto q = sphere_average(fn_from_json(fn_json), d, r, t, tol);
          py::dict out;
          out["value"] = q.value;
          out["error"] = q.abs_error_estimate;
          out["evaluations"] = q.evaluations;
          return out;
        },
        py::arg("fn_json"), py::arg("d"), py::arg("r"), py::arg("t"),
        py::arg("tol") = 1e-9);
  m.def("sphere_average_mc",
        [](const std::string& fn_json, int d, double r, double t, long samples,
           std::uint64_t seed) {
          return sphere_average_mc(fn_from_json(fn_json), d, r, t, samples, seed);
        },
        py::arg("fn_json"), py::arg("d"), py::arg("r"), py::arg("t"),
        py::arg("samples") = 100000, py::arg("seed") = 12345);

  m.def("maximal_value",
        [](const DilationSet& s, const std::string& fn_json, int d, double r,
           double tol) { return maximal_value(s, fn_from_json(fn_json), d, r, tol); },
        py::arg("set"), py::arg("fn_json"), py::arg("d"), py::arg("r"),
        py::arg("tol") = 1e-9);
  m.def("domination_check",
        [](const DilationSet& s, const std::string& fn_json, int d, double p,
           double rmax, int cells_per_unit, double tol) {
          const RadialFunction f = fn_from_json(fn_json);
          const auto grid = RadialGrid::make(rmax, cells_per_unit, d, f.breakpoints());
          const auto rep = domination_check(s, f, d, p, grid, tol);
          py::dict out;
          out["max_ratio"] = rep.max_ratio;
          out["argmax_r"] = rep.argmax_r;
          out["skipped"] = rep.skipped;
          out["nodes"] = rep.rows.size();
          return out;
        },
        py::arg("set"), py::arg("fn_json"), py::arg("d"), py::arg("p") = 2.0,
        py::arg("rmax") = 8.0, py::arg("cells_per_unit") = 8, py::arg("tol") = 1e-8);

  m.def("experiment_pq",
        [](const DilationSet& s, int d, double p, double q, int kmin, int kmax) {
          return json_to_py(io::record_to_json(experiment_pq(s, d, p, q, kmin, kmax)));
        },
        py::arg("set"), py::arg("d"), py::arg("p"), py::arg("q"), py::arg("kmin") = 6,
        py::arg("kmax") = 13);
  m.def("experiment_knapp",
        [](const DilationSet& s, int d, double p, double q, int level,
           std::uint64_t position, int mmin, int mmax, double tol) {
          return json_to_py(io::record_to_json(
              experiment_knapp(s, d, p, q, WindowSpec{level, position}, mmin, mmax, tol)));
        },
        py::arg("set"), py::arg("d"), py::arg("p"), py::arg("q"),
        py::arg("level") = 0, py::arg("position") = 0, py::arg("mmin") = 4,
        py::arg("mmax") = 10, py::arg("tol") = 1e-9);
  m.def("claim_annulus",
        [](int d, const std::vector<int>& deltas, double t,
           const std::vector<double>& xs, double c1) {
          const auto rep = claim_annulus(d, deltas, t, xs, c1);
          py::dict out;
          out["min_ratio"] = rep.min_ratio;
          out["max_ratio"] = rep.max_ratio;
          out["pass"] = rep.pass;
          return out;
        },
        py::arg("d"), py::arg("deltas"), py::arg("t"), py::arg("x_grid"),
        py::arg("c1") = 0.0);
  m.def("experiment_stein_log",
        [](const DilationSet& s, int d, double q, int mmin, int mmax, bool allow) {
          return json_to_py(
              io::record_to_json(experiment_stein_log(s, d, q, mmin, mmax, allow)));
        },
        py::arg("set"), py::arg("d"), py::arg("q"), py::arg("mmin") = 6,
        py::arg("mmax") = 14, py::arg("allow_positive_measure") = false);
  m.def("region_scan",
        [](const DilationSet& s, int d, int resolution, int mmin, int mmax) {
          const auto scan = region_scan(s, d, resolution, {mmin, mmax});
          py::list rows;
          for (const auto& r : scan.rows) {
            py::dict row;
            row["inv_p"] = r.inv_p;
            row["inv_q"] = r.inv_q;
            row["exponent_easy"] = r.exponent_easy;
            row["exponent_knapp"] = r.exponent_knapp;
            row["excluded"] = r.excluded;
            row["predicted_member"] = r.predicted_member;
            rows.append(row);
          }
          return rows;
        },
        py::arg("set"), py::arg("d"), py::arg("resolution"), py::arg("mmin"),
        py::arg("mmax"));

  m.def("weighted_norm",
        [](const std::vector<double>& values, double rmax, int cells_per_unit, int d,
           double q, const std::vector<double>& snap) {
          const auto grid = RadialGrid::make(rmax, cells_per_unit, d, snap);
          if (values.size() != grid.nodes.size())
            throw std::invalid_argument("values length must match the grid");
          return weighted_norm(values, grid, q);
        },
        py::arg("values"), py::arg("rmax"), py::arg("cells_per_unit"), py::arg("d"),
        py::arg("q"), py::arg("snap") = std::vector<double>{});
}
