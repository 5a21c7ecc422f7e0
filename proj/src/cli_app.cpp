#include "radmax/cli_app.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <sstream>

#include "radmax/covering.hpp"
#include "radmax/dilation_set.hpp"
#include "radmax/experiments.hpp"
#include "radmax/io_util.hpp"
#include "radmax/maximal.hpp"
#include "radmax/quadrature.hpp"
#include "radmax/rational.hpp"
#include "radmax/regions.hpp"
#include "radmax/spherical.hpp"

namespace radmax::cli {

namespace {

using io::json;

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  if (out.empty()) throw UsageError("empty numeric list");
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_double_list(text)) out.push_back(static_cast<int>(v));
  return out;
}

Rational parse_rational_flag(const std::string& text, const std::string& flag) {
  try {
    return Rational::parse(text);
  } catch (const std::exception& e) {
    throw UsageError("invalid rational for " + flag + ": " + text);
  }
}

DilationSet load_set(const json& params) {
  const std::string path = params.at("set_spec").get<std::string>();
  const json j = json::parse(io::read_text_file(path));
  if (j.contains("cells")) return io::dilation_set_from_json(j);
  return generate(io::set_spec_from_json(j));
}

RadialFunction load_function(const json& params) {
  if (params.contains("fn_json"))
    return io::radial_function_from_json(
        json::parse(params.at("fn_json").get<std::string>()));
  if (params.contains("fn_file"))
    return io::radial_function_from_json(
        json::parse(io::read_text_file(params.at("fn_file").get<std::string>())));
  throw UsageError("a radial function is required (--fn-json or --fn)");
}

ScaleWindow window_from(const json& params, int depth) {
  ScaleWindow w = default_scale_window(depth);
  if (params.contains("mmin")) w.m_min = params.at("mmin").get<int>();
  if (params.contains("mmax")) w.m_max = params.at("mmax").get<int>();
  return w;
}

void emit(const RunPlan& plan, const std::string& content, std::ostream& out) {
  if (plan.out_path.empty()) {
    out << content;
    if (!content.empty() && content.back() != '\n') out << '\n';
  } else {
    io::write_text_file(io::resolve_out_path(plan.out_path), content);
  }
}

void emit_json(const RunPlan& plan, json j, std::ostream& out) {
  if (!j.contains("schema")) j["schema"] = "radmax.v1";
  emit(plan, j.dump(2) + "\n", out);
}

// ---- command implementations --------------------------------------------------

void cmd_set_make(const RunPlan& plan, std::ostream& out) {
  SetSpec spec;
  spec.depth = plan.params.at("depth").get<int>();
  const std::string gen = plan.params.at("generator").get<std::string>();
  if (gen == "full_interval") {
    spec.generator = FullIntervalSpec{};
  } else if (gen == "finite_points") {
    spec.generator =
        FinitePointsSpec{parse_double_list(plan.params.at("points").get<std::string>())};
  } else if (gen == "cantor") {
    spec.generator = CantorSpec{plan.params.at("base").get<int>(),
                                parse_int_list(plan.params.at("digits").get<std::string>())};
  } else if (gen == "convex_sequence") {
    spec.generator = ConvexSequenceSpec{plan.params.at("beta").get<double>()};
  } else if (gen == "assouad_regular") {
    spec.generator = AssouadRegularSpec{plan.params.at("beta").get<double>(),
                                        plan.params.at("gamma").get<double>(),
                                        plan.params.value("stride", 2)};
  } else {
    throw UsageError("unknown generator: " + gen);
  }
  const DilationSet set = generate(spec);
  json j = io::dilation_set_to_json(set);
  j["spec"] = io::set_spec_to_json(spec);
  emit_json(plan, j, out);
}

void cmd_dim_estimate(const RunPlan& plan, std::ostream& out) {
  const DilationSet set = load_set(plan.params);
  const CoveringProfile prof(set, plan.threads);
  const auto w = window_from(plan.params, set.depth());
  const ExponentFit fit = minkowski_estimate(prof, w);
  if (plan.format == "csv") {
    emit(plan, io::csv_fits({{0.0, fit}}, "theta"), out);
  } else {
    json j = io::fit_to_json(fit);
    j["schema"] = "dim_estimate.v1";
    emit_json(plan, j, out);
  }
}

void cmd_dim_profile(const RunPlan& plan, std::ostream& out) {
  const DilationSet set = load_set(plan.params);
  emit(plan, io::csv_profile(CoveringProfile(set, plan.threads)), out);
}

void cmd_nusharp(const RunPlan& plan, std::ostream& out) {
  const DilationSet set = load_set(plan.params);
  const CoveringProfile prof(set, plan.threads);
  const auto w = window_from(plan.params, set.depth());
  const auto alphas = parse_double_list(plan.params.at("alpha").get<std::string>());
  std::vector<std::pair<double, ExponentFit>> rows;
  for (double a : alphas) rows.emplace_back(a, nu_sharp_estimate(prof, a, w));
  if (plan.format == "csv") {
    emit(plan, io::csv_fits(rows, "alpha"), out);
  } else {
    json list = json::array();
    for (const auto& [a, f] : rows) {
      json row = io::fit_to_json(f);
      row["alpha"] = a;
      list.push_back(row);
    }
    emit_json(plan, json{{"schema", "nusharp.v1"}, {"estimates", list}}, out);
  }
}

void cmd_spectrum(const RunPlan& plan, std::ostream& out) {
  const DilationSet set = load_set(plan.params);
  const CoveringProfile prof(set, plan.threads);
  const auto w = window_from(plan.params, set.depth());
  const auto thetas = parse_double_list(plan.params.at("thetas").get<std::string>());
  const auto rows = assouad_spectrum_estimate(prof, thetas, w);
  if (plan.format == "csv") {
    emit(plan, io::csv_fits(rows, "theta"), out);
  } else {
    json list = json::array();
    for (const auto& [t, f] : rows) {
      json row = io::fit_to_json(f);
      row["theta"] = t;
      list.push_back(row);
    }
    emit_json(plan, json{{"schema", "spectrum.v1"}, {"estimates", list}}, out);
  }
}

TypeRegion region_from(const json& params) {
  const int d = params.at("d").get<int>();
  const Rational beta = parse_rational_flag(params.at("beta").get<std::string>(), "--beta");
  const std::string mode = params.value("mode", "triangle");
  if (mode == "triangle") return TypeRegion::triangle(d, beta);
  if (mode == "closure") {
    if (d != 2) throw UsageError("--mode closure requires --d 2");
    const Rational gamma =
        parse_rational_flag(params.value("gamma", "1"), "--gamma");
    return TypeRegion::closure2(beta, gamma);
  }
  throw UsageError("unknown mode: " + mode);
}

void cmd_region_vertices(const RunPlan& plan, std::ostream& out) {
  const int d = plan.params.at("d").get<int>();
  const Rational beta = parse_rational_flag(plan.params.at("beta").get<std::string>(), "--beta");
  std::vector<std::pair<std::string, ExponentPair>> verts;
  std::string mode = "triangle";
  std::string gamma_str;
  const auto tri = triangle_vertices(d, beta);
  verts.emplace_back("P1", tri[0]);
  verts.emplace_back("P2", tri[1]);
  verts.emplace_back("P3rad", tri[2]);
  if (plan.params.value("general", false)) {
    mode = "general";
    const Rational gamma =
        parse_rational_flag(plan.params.value("gamma", "1"), "--gamma");
    gamma_str = gamma.str();
    const auto quad = quadrangle_vertices_general(d, beta, gamma);
    verts.clear();
    verts.emplace_back("P1", quad[0]);
    verts.emplace_back("P2", quad[1]);
    verts.emplace_back("P3", quad[2]);
    verts.emplace_back("P4", quad[3]);
  } else if (plan.params.value("radial", false)) {
    mode = "radial";
    const Rational gamma =
        parse_rational_flag(plan.params.value("gamma", "1"), "--gamma");
    gamma_str = gamma.str();
    if (d == 2) {
      const auto quad = quadrangle_vertices_radial(beta, gamma);
      verts.emplace_back("P4rad", quad[2]);
      verts.emplace_back("P5rad", quad[3]);
    }
  }
  emit_json(plan, io::vertices_to_json(d, beta.str(), gamma_str, mode, verts), out);
}

void cmd_region_membership(const RunPlan& plan, std::ostream& out) {
  const TypeRegion region = region_from(plan.params);
  const ExponentPair pt{
      parse_rational_flag(plan.params.at("inv_p").get<std::string>(), "--inv-p"),
      parse_rational_flag(plan.params.at("inv_q").get<std::string>(), "--inv-q")};
  const Membership m = region_membership(region, pt);
  const char* name = m == Membership::interior  ? "interior"
                     : m == Membership::boundary ? "boundary"
                                                 : "exterior";
  emit_json(plan,
            json{{"schema", "region_membership.v1"},
                 {"inv_p", pt.inv_p.str()},
                 {"inv_q", pt.inv_q.str()},
                 {"membership", name}},
            out);
}

void cmd_region_boundary(const RunPlan& plan, std::ostream& out) {
  const TypeRegion region = region_from(plan.params);
  const int resolution = plan.params.value("resolution", 200);
  const auto pts = closure_boundary(region, resolution);
  emit(plan, io::csv_polyline(pts), out);
}

void cmd_region_classify(const RunPlan& plan, std::ostream& out) {
  AnalyticProfile profile;
  if (plan.params.contains("set_spec")) {
    const DilationSet set = load_set(plan.params);
    if (!set.profile()) throw UsageError("the set carries no analytic profile");
    profile = *set.profile();
  } else {
    profile.beta = std::stod(plan.params.at("beta").get<std::string>());
    profile.gamma = std::stod(plan.params.at("gamma").get<std::string>());
    profile.sup_delta_beta_N_finite = plan.params.value("sup_finite", true);
    profile.sup_delta_log_N_finite = plan.params.value("log_finite", true);
    profile.power_law = plan.params.value("power_law", true);
  }
  const int d = plan.params.at("d").get<int>();
  const ExponentPair pt{
      parse_rational_flag(plan.params.at("inv_p").get<std::string>(), "--inv-p"),
      parse_rational_flag(plan.params.at("inv_q").get<std::string>(), "--inv-q")};
  const ClassifyResult res = endpoint_classify(profile, d, pt);
  const char* verdict = res.verdict == EndpointVerdict::in_T       ? "in_T"
                        : res.verdict == EndpointVerdict::not_in_T ? "not_in_T"
                                                                   : "unresolved";
  emit_json(plan,
            json{{"schema", "region_classify.v1"},
                 {"verdict", verdict},
                 {"case", res.case_id},
                 {"detail", res.detail}},
            out);
}

void cmd_avg(const RunPlan& plan, std::ostream& out) {
  const RadialFunction f = load_function(plan.params);
  const int d = plan.params.at("d").get<int>();
  const double r = plan.params.at("r").get<double>();
  const double t = plan.params.at("t").get<double>();
  if (t < 1.0 || t > 2.0) throw UsageError("--t must lie in [1,2]");
  const double tol = plan.params.value("tol", 1e-9);
  json j{{"schema", "avg.v1"}};
  if (plan.params.value("mc", false)) {
    const long samples = plan.params.value("samples", 100000);
    const auto [mean, se] = sphere_average_mc(f, d, r, t, samples, plan.seed);
    j["value"] = mean;
    j["std_error"] = se;
    j["samples"] = samples;
  } else {
    const auto q = sphere_average(f, d, r, t, tol);
    j["value"] = q.value;
    j["error"] = q.abs_error_estimate;
    j["evaluations"] = q.evaluations;
  }
  emit_json(plan, j, out);
}

void cmd_maximal(const RunPlan& plan, std::ostream& out) {
  const DilationSet set = load_set(plan.params);
  const RadialFunction f = load_function(plan.params);
  const int d = plan.params.at("d").get<int>();
  const double tol = plan.params.value("tol", 1e-9);
  const double p = plan.params.value("p", 2.0);
  if (plan.params.contains("r")) {
    const double r = plan.params.at("r").get<double>();
    json j{{"schema", "maximal.v1"},
           {"r", r},
           {"value", maximal_value(set, f, d, r, tol)}};
    emit_json(plan, j, out);
    return;
  }
  const double rmax = plan.params.value("rmax", 8.0);
  const int cells = plan.params.value("cells_per_unit", 16);
  const auto grid = RadialGrid::make(rmax, cells, d, f.breakpoints());
  const auto report = domination_check(set, f, d, p, grid, tol);
  emit(plan, io::csv_domination(report, d), out);
}

void cmd_experiment(const RunPlan& plan, std::ostream& out) {
  const std::string which = plan.params.at("which").get<std::string>();
  if (which == "pq") {
    const DilationSet set = load_set(plan.params);
    const auto rec = experiment_pq(set, plan.params.at("d").get<int>(),
                                   plan.params.at("p").get<double>(),
                                   plan.params.at("q").get<double>(),
                                   plan.params.value("kmin", 6),
                                   plan.params.value("kmax", 13));
    emit(plan,
         plan.format == "csv" ? io::csv_record(rec) : io::record_to_json(rec).dump(2) + "\n",
         out);
  } else if (which == "knapp") {
    const DilationSet set = load_set(plan.params);
    WindowSpec w{plan.params.value("window_level", 0),
                 plan.params.value("window_pos", std::uint64_t{0})};
    const auto rec = experiment_knapp(
        set, plan.params.at("d").get<int>(), plan.params.at("p").get<double>(),
        plan.params.at("q").get<double>(), w, plan.params.value("mmin", 4),
        plan.params.value("mmax", 10), plan.params.value("tol", 1e-9));
    emit(plan,
         plan.format == "csv" ? io::csv_record(rec) : io::record_to_json(rec).dump(2) + "\n",
         out);
  } else if (which == "annulus") {
    std::vector<int> deltas = parse_int_list(plan.params.value("deltas", "4,5,6,7,8,9,10"));
    std::vector<double> xs = parse_double_list(plan.params.value("x_grid", "0.25,0.5,0.75,1.0"));
    const auto rep = claim_annulus(plan.params.at("d").get<int>(), deltas,
                                   plan.params.value("t", 1.0), xs,
                                   plan.params.value("c1", 0.0));
    json rows = json::array();
    for (const auto& r : rep.rows)
      rows.push_back({{"m", r.m}, {"x", r.x}, {"ratio", r.ratio}});
    emit_json(plan,
              json{{"schema", "annulus.v1"},
                   {"rows", rows},
                   {"min_ratio", rep.min_ratio},
                   {"max_ratio", rep.max_ratio},
                   {"pass", rep.pass}},
              out);
  } else if (which == "stein") {
    const DilationSet set = load_set(plan.params);
    const auto rec = experiment_stein_log(
        set, plan.params.at("d").get<int>(), plan.params.at("q").get<double>(),
        plan.params.value("mmin", 6), plan.params.value("mmax", 14),
        plan.params.value("allow_full", false));
    emit(plan,
         plan.format == "csv" ? io::csv_record(rec) : io::record_to_json(rec).dump(2) + "\n",
         out);
  } else if (which == "scan") {
    const DilationSet set = load_set(plan.params);
    ScaleWindow w = window_from(plan.params, set.depth());
    const auto scan = region_scan(set, plan.params.at("d").get<int>(),
                                  plan.params.value("resolution", 32), w);
    emit(plan, io::csv_scan(scan), out);
  } else {
    throw UsageError("unknown experiment: " + which);
  }
}

}  // namespace

RunPlan parse(const std::vector<std::string>& args) {
  RunPlan plan;
  json& P = plan.params;

  CLI::App app{"numerical laboratory for restricted spherical maximal averages on "
               "radial functions"};
  app.require_subcommand(1);

  std::string out_path, format = "json";
  std::uint64_t seed = 12345;
  int threads = 0;
  app.add_option("--out", out_path, "output file (default: stdout)");
  app.add_option("--format", format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", seed, "root seed for randomized runs");
  app.add_option("--threads", threads, "worker cap (results are identical)");

  // set make
  auto* set_cmd = app.add_subcommand("set", "dilation set operations");
  auto* make = set_cmd->add_subcommand("make", "build a dilation set");
  std::string generator, points, digits;
  int depth = 10, base = 3, stride = 2;
  double beta_d = 0.5, gamma_d = 1.0;
  make->add_option("--generator", generator,
                   "full_interval|finite_points|cantor|convex_sequence|assouad_regular")
      ->required();
  make->add_option("--depth", depth, "dyadic resolution, in [1,30]")->required();
  make->add_option("--points", points, "comma list for finite_points");
  make->add_option("--base", base, "cantor base");
  make->add_option("--digits", digits, "cantor kept digits, comma list");
  make->add_option("--beta", beta_d, "generator beta");
  make->add_option("--gamma", gamma_d, "generator gamma");
  make->add_option("--stride", stride, "assouad_regular milestone stride");

  // dim estimate / dim profile
  auto* dim = app.add_subcommand("dim", "dimension estimates");
  auto* dim_est = dim->add_subcommand("estimate", "upper Minkowski dimension fit");
  std::string set_spec;
  int mmin = -1, mmax = -1;
  dim_est->add_option("--set-spec", set_spec, "set spec or dump (JSON file)")->required();
  dim_est->add_option("--mmin", mmin, "coarsest scale");
  dim_est->add_option("--mmax", mmax, "finest scale");
  auto* dim_prof = dim->add_subcommand("profile", "window covering counts as CSV");
  dim_prof->add_option("--set-spec", set_spec, "set spec or dump (JSON file)")
      ->required();

  // nusharp
  auto* nusharp = app.add_subcommand("nusharp", "window covering exponent estimate");
  std::string alphas;
  nusharp->add_option("--set-spec", set_spec, "set spec (JSON file)")->required();
  nusharp->add_option("--alpha", alphas, "comma list of alpha values")->required();
  nusharp->add_option("--mmin", mmin, "coarsest scale");
  nusharp->add_option("--mmax", mmax, "finest scale");

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "Assouad spectrum estimates");
  std::string thetas;
  spectrum->add_option("--set-spec", set_spec, "set spec (JSON file)")->required();
  spectrum->add_option("--thetas", thetas, "comma list of theta values")->required();
  spectrum->add_option("--mmin", mmin, "coarsest scale");
  spectrum->add_option("--mmax", mmax, "finest scale");

  // region
  auto* region = app.add_subcommand("region", "type region geometry");
  std::string beta_r = "1", gamma_r = "1", mode = "triangle", inv_p, inv_q;
  int d = 2, resolution = 200;
  bool radial = false, general = false;
  bool sup_finite = true, log_finite = true, power_law = true;
  auto* rv = region->add_subcommand("vertices", "closed-form vertices");
  rv->add_option("--d", d, "dimension")->required();
  rv->add_option("--beta", beta_r, "rational a/b or decimal")->required();
  rv->add_option("--gamma", gamma_r, "rational a/b or decimal");
  rv->add_flag("--radial", radial, "include the radial quadrangle (d=2)");
  rv->add_flag("--general", general, "the non-radial quadrangle instead");
  auto* rm = region->add_subcommand("membership", "classify a point");
  rm->add_option("--d", d)->required();
  rm->add_option("--beta", beta_r)->required();
  rm->add_option("--gamma", gamma_r);
  rm->add_option("--mode", mode, "triangle|closure");
  rm->add_option("--inv-p", inv_p, "1/p as rational")->required();
  rm->add_option("--inv-q", inv_q, "1/q as rational")->required();
  auto* rb = region->add_subcommand("boundary", "trace the region boundary");
  rb->add_option("--d", d)->required();
  rb->add_option("--beta", beta_r)->required();
  rb->add_option("--gamma", gamma_r);
  rb->add_option("--mode", mode, "triangle|closure");
  rb->add_option("--resolution", resolution, ">= 8");
  auto* rc = region->add_subcommand("classify", "endpoint case table");
  rc->add_option("--d", d)->required();
  rc->add_option("--set-spec", set_spec, "set whose profile to classify");
  rc->add_option("--beta", beta_r, "profile beta (without --set-spec)");
  rc->add_option("--gamma", gamma_r, "profile gamma");
  rc->add_option("--sup-finite", sup_finite, "delta^beta covering supremum finite");
  rc->add_option("--log-finite", log_finite, "delta log(1/delta) supremum finite");
  rc->add_option("--power-law", power_law, "covering counts follow a power law");
  rc->add_option("--inv-p", inv_p, "1/p as rational")->required();
  rc->add_option("--inv-q", inv_q, "1/q as rational")->required();

  // avg
  auto* avg = app.add_subcommand("avg", "single spherical average");
  double r_val = 1.0, t_val = 1.0, tol = 1e-9, c1 = 0.0, p_val = 2.0, q_val = 2.0;
  std::string fn_json, fn_file;
  bool mc = false;
  long samples = 100000;
  avg->add_option("--d", d)->required();
  avg->add_option("--r", r_val, "|x|")->required();
  avg->add_option("--t", t_val, "dilation in [1,2]")->required();
  avg->add_option("--fn-json", fn_json, "radial function JSON literal");
  avg->add_option("--fn", fn_file, "radial function JSON file");
  avg->add_option("--tol", tol, "absolute tolerance");
  avg->add_flag("--mc", mc, "Monte Carlo oracle instead of quadrature");
  avg->add_option("--samples", samples, "Monte Carlo samples");

  // maximal
  auto* maximal = app.add_subcommand("maximal", "restricted maximal operator");
  double rmax = 8.0;
  int cells_per_unit = 16;
  bool has_r = false;
  maximal->add_option("--set-spec", set_spec)->required();
  maximal->add_option("--fn-json", fn_json);
  maximal->add_option("--fn", fn_file);
  maximal->add_option("--d", d)->required();
  auto* r_opt = maximal->add_option("--r", r_val, "single radius");
  maximal->add_option("--p", p_val, "decomposition exponent");
  maximal->add_option("--rmax", rmax, "grid extent for the domination dump");
  maximal->add_option("--cells-per-unit", cells_per_unit, "grid resolution");
  maximal->add_option("--tol", tol, "quadrature tolerance");
  (void)has_r;

  // experiment
  auto* experiment = app.add_subcommand("experiment", "scaling experiments");
  int kmin = 6, kmax = 13, window_level = 0;
  std::uint64_t window_pos = 0;
  std::string deltas = "4,5,6,7,8,9,10", x_grid = "0.25,0.5,0.75,1.0";
  bool allow_full = false;
  auto* epq = experiment->add_subcommand("pq", "step-train scaling");
  epq->add_option("--set-spec", set_spec)->required();
  epq->add_option("--d", d)->required();
  epq->add_option("--p", p_val)->required();
  epq->add_option("--q", q_val)->required();
  epq->add_option("--kmin", kmin);
  epq->add_option("--kmax", kmax);
  auto* ekn = experiment->add_subcommand("knapp", "thin annulus scaling");
  ekn->add_option("--set-spec", set_spec)->required();
  ekn->add_option("--d", d)->required();
  ekn->add_option("--p", p_val)->required();
  ekn->add_option("--q", q_val)->required();
  ekn->add_option("--window-level", window_level);
  ekn->add_option("--window-pos", window_pos);
  ekn->add_option("--mmin", mmin);
  ekn->add_option("--mmax", mmax);
  ekn->add_option("--tol", tol);
  auto* ean = experiment->add_subcommand("annulus", "pointwise annulus claim");
  ean->add_option("--d", d)->required();
  ean->add_option("--t", t_val, "annulus radius");
  ean->add_option("--deltas", deltas, "comma list of dyadic exponents");
  ean->add_option("--x-grid", x_grid, "comma list of radii");
  ean->add_option("--c1", c1, "offset parameter, |c1| <= 1/10");
  auto* est = experiment->add_subcommand("stein", "log-weighted endpoint");
  est->add_option("--set-spec", set_spec)->required();
  est->add_option("--d", d)->required();
  est->add_option("--q", q_val)->required();
  est->add_option("--mmin", mmin);
  est->add_option("--mmax", mmax);
  est->add_flag("--allow-full", allow_full, "trend reporting for full-measure sets");
  auto* esc = experiment->add_subcommand("scan", "necessary-condition region scan");
  esc->add_option("--set-spec", set_spec)->required();
  esc->add_option("--d", d)->required();
  esc->add_option("--resolution", resolution);
  esc->add_option("--mmin", mmin);
  esc->add_option("--mmax", mmax);

  // Let global flags (--out, --format, --seed, --threads) appear after
  // subcommand arguments.
  const std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* a) {
    a->fallthrough(true);
    for (CLI::App* sub : a->get_subcommands({})) enable_fallthrough(sub);
  };
  for (CLI::App* sub : app.get_subcommands({})) enable_fallthrough(sub);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream msg;
    msg << e.get_name() << ": " << e.what();
    throw UsageError(msg.str());
  }

  plan.out_path = out_path;
  plan.format = format;
  plan.seed = seed;
  plan.threads = threads;

  auto put_window = [&] {
    if (mmin >= 0) P["mmin"] = mmin;
    if (mmax >= 0) P["mmax"] = mmax;
  };

  if (make->parsed()) {
    plan.command = "set_make";
    P["generator"] = generator;
    P["depth"] = depth;
    if (!points.empty()) P["points"] = points;
    P["base"] = base;
    if (!digits.empty()) P["digits"] = digits;
    P["beta"] = beta_d;
    P["gamma"] = gamma_d;
    P["stride"] = stride;
  } else if (dim_est->parsed()) {
    plan.command = "dim_estimate";
    P["set_spec"] = set_spec;
    put_window();
  } else if (dim_prof->parsed()) {
    plan.command = "dim_profile";
    P["set_spec"] = set_spec;
  } else if (nusharp->parsed()) {
    plan.command = "nusharp";
    P["set_spec"] = set_spec;
    P["alpha"] = alphas;
    put_window();
  } else if (spectrum->parsed()) {
    plan.command = "spectrum";
    P["set_spec"] = set_spec;
    P["thetas"] = thetas;
    put_window();
  } else if (rv->parsed()) {
    plan.command = "region_vertices";
    P["d"] = d;
    P["beta"] = beta_r;
    P["gamma"] = gamma_r;
    P["radial"] = radial;
    P["general"] = general;
  } else if (rm->parsed()) {
    plan.command = "region_membership";
    P["d"] = d;
    P["beta"] = beta_r;
    P["gamma"] = gamma_r;
    P["mode"] = mode == "closure" ? "closure" : "triangle";
    P["inv_p"] = inv_p;
    P["inv_q"] = inv_q;
  } else if (rb->parsed()) {
    plan.command = "region_boundary";
    P["d"] = d;
    P["beta"] = beta_r;
    P["gamma"] = gamma_r;
    P["mode"] = mode == "closure" ? "closure" : "triangle";
    P["resolution"] = resolution;
  } else if (rc->parsed()) {
    plan.command = "region_classify";
    P["d"] = d;
    if (!set_spec.empty()) P["set_spec"] = set_spec;
    P["beta"] = beta_r;
    P["gamma"] = gamma_r;
    P["sup_finite"] = sup_finite;
    P["log_finite"] = log_finite;
    P["power_law"] = power_law;
    P["inv_p"] = inv_p;
    P["inv_q"] = inv_q;
  } else if (avg->parsed()) {
    plan.command = "avg";
    P["d"] = d;
    P["r"] = r_val;
    P["t"] = t_val;
    if (!fn_json.empty()) P["fn_json"] = fn_json;
    if (!fn_file.empty()) P["fn_file"] = fn_file;
    P["tol"] = tol;
    P["mc"] = mc;
    P["samples"] = samples;
  } else if (maximal->parsed()) {
    plan.command = "maximal";
    P["set_spec"] = set_spec;
    if (!fn_json.empty()) P["fn_json"] = fn_json;
    if (!fn_file.empty()) P["fn_file"] = fn_file;
    P["d"] = d;
    if (r_opt->count() > 0) P["r"] = r_val;
    P["p"] = p_val;
    P["rmax"] = rmax;
    P["cells_per_unit"] = cells_per_unit;
    P["tol"] = tol;
  } else if (epq->parsed()) {
    plan.command = "experiment";
    P["which"] = "pq";
    P["set_spec"] = set_spec;
    P["d"] = d;
    P["p"] = p_val;
    P["q"] = q_val;
    P["kmin"] = kmin;
    P["kmax"] = kmax;
  } else if (ekn->parsed()) {
    plan.command = "experiment";
    P["which"] = "knapp";
    P["set_spec"] = set_spec;
    P["d"] = d;
    P["p"] = p_val;
    P["q"] = q_val;
    P["window_level"] = window_level;
    P["window_pos"] = window_pos;
    if (mmin >= 0) P["mmin"] = mmin;
    if (mmax >= 0) P["mmax"] = mmax;
    P["tol"] = tol;
  } else if (ean->parsed()) {
    plan.command = "experiment";
    P["which"] = "annulus";
    P["d"] = d;
    P["t"] = t_val;
    P["deltas"] = deltas;
    P["x_grid"] = x_grid;
    P["c1"] = c1;
  } else if (est->parsed()) {
    plan.command = "experiment";
    P["which"] = "stein";
    P["set_spec"] = set_spec;
    P["d"] = d;
    P["q"] = q_val;
    if (mmin >= 0) P["mmin"] = mmin;
    if (mmax >= 0) P["mmax"] = mmax;
    P["allow_full"] = allow_full;
  } else if (esc->parsed()) {
    plan.command = "experiment";
    P["which"] = "scan";
    P["set_spec"] = set_spec;
    P["d"] = d;
    P["resolution"] = resolution;
    if (mmin >= 0) P["mmin"] = mmin;
    if (mmax >= 0) P["mmax"] = mmax;
  } else {
    throw UsageError("no subcommand given");
  }
  return plan;
}

int execute(const RunPlan& plan, std::ostream& out, std::ostream& err) {
  try {
    if (plan.command == "set_make") cmd_set_make(plan, out);
    else if (plan.command == "dim_estimate") cmd_dim_estimate(plan, out);
    else if (plan.command == "dim_profile") cmd_dim_profile(plan, out);
    else if (plan.command == "nusharp") cmd_nusharp(plan, out);
    else if (plan.command == "spectrum") cmd_spectrum(plan, out);
    else if (plan.command == "region_vertices") cmd_region_vertices(plan, out);
    else if (plan.command == "region_membership") cmd_region_membership(plan, out);
    else if (plan.command == "region_boundary") cmd_region_boundary(plan, out);
    else if (plan.command == "region_classify") cmd_region_classify(plan, out);
    else if (plan.command == "avg") cmd_avg(plan, out);
    else if (plan.command == "maximal") cmd_maximal(plan, out);
    else if (plan.command == "experiment") cmd_experiment(plan, out);
    else throw UsageError("unknown command: " + plan.command);
    return 0;
  } catch (const UsageError&) {
    throw;
  } catch (const ConvergenceError& e) {
    err << "{\"error\":\"convergence\",\"message\":\"" << e.what()
        << "\",\"best_value\":" << io::format_double(e.best().value) << "}\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  } catch (const std::out_of_range& e) {
    throw UsageError(e.what());
  } catch (const std::exception& e) {
    err << "{\"error\":\"runtime\",\"message\":\"" << e.what() << "\"}\n";
    return 1;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  try {
    const RunPlan plan = parse(args);
    return execute(plan, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace radmax::cli
