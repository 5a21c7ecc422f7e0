#include "radmax/io_util.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace radmax::io {

std::string format_double(double v) {
  char buf[40];
  // Shortest representation that round-trips.
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

// --- set specs -----------------------------------------------------------------

json set_spec_to_json(const SetSpec& spec) {
  json j;
  j["depth"] = spec.depth;
  if (std::holds_alternative<FullIntervalSpec>(spec.generator)) {
    j["generator"] = "full_interval";
    j["params"] = json::object();
  } else if (const auto* g = std::get_if<FinitePointsSpec>(&spec.generator)) {
    j["generator"] = "finite_points";
    j["params"] = {{"points", g->points}};
  } else if (const auto* g = std::get_if<CantorSpec>(&spec.generator)) {
    j["generator"] = "cantor";
    j["params"] = {{"base", g->base}, {"digits", g->digits}};
  } else if (const auto* g = std::get_if<ConvexSequenceSpec>(&spec.generator)) {
    j["generator"] = "convex_sequence";
    j["params"] = {{"beta", g->beta}};
  } else if (const auto* g = std::get_if<AssouadRegularSpec>(&spec.generator)) {
    j["generator"] = "assouad_regular";
    j["params"] = {{"beta", g->beta},
                   {"gamma", g->gamma},
                   {"milestone_stride", g->milestone_stride}};
  }
  return j;
}

SetSpec set_spec_from_json(const json& j) {
  SetSpec spec;
  spec.depth = j.at("depth").get<int>();
  const std::string name = j.at("generator").get<std::string>();
  const json params = j.value("params", json::object());
  if (name == "full_interval") {
    spec.generator = FullIntervalSpec{};
  } else if (name == "finite_points") {
    spec.generator = FinitePointsSpec{params.at("points").get<std::vector<double>>()};
  } else if (name == "cantor") {
    spec.generator = CantorSpec{params.at("base").get<int>(),
                                params.at("digits").get<std::vector<int>>()};
  } else if (name == "convex_sequence") {
    spec.generator = ConvexSequenceSpec{params.at("beta").get<double>()};
  } else if (name == "assouad_regular") {
    spec.generator = AssouadRegularSpec{params.at("beta").get<double>(),
                                        params.at("gamma").get<double>(),
                                        params.value("milestone_stride", 2)};
  } else {
    throw std::invalid_argument("unknown generator: " + name);
  }
  return spec;
}

json profile_to_json(const AnalyticProfile& p) {
  return {{"beta", p.beta},
          {"gamma", p.gamma},
          {"sup_delta_beta_N_finite", p.sup_delta_beta_N_finite},
          {"sup_delta_log_N_finite", p.sup_delta_log_N_finite},
          {"power_law", p.power_law},
          {"description", p.description}};
}

AnalyticProfile profile_from_json(const json& j) {
  AnalyticProfile p;
  p.beta = j.at("beta").get<double>();
  p.gamma = j.at("gamma").get<double>();
  p.sup_delta_beta_N_finite = j.at("sup_delta_beta_N_finite").get<bool>();
  p.sup_delta_log_N_finite = j.at("sup_delta_log_N_finite").get<bool>();
  p.power_law = j.value("power_law", false);
  p.description = j.value("description", "");
  return p;
}

json dilation_set_to_json(const DilationSet& set) {
  json j;
  j["schema"] = "dilation_set.v1";
  j["depth"] = set.depth();
  j["cells"] = set.cells();
  if (set.profile()) j["profile"] = profile_to_json(*set.profile());
  return j;
}

DilationSet dilation_set_from_json(const json& j) {
  std::optional<AnalyticProfile> profile;
  if (j.contains("profile")) profile = profile_from_json(j.at("profile"));
  return DilationSet(j.at("depth").get<int>(),
                     j.at("cells").get<std::vector<std::uint64_t>>(), profile);
}

// --- radial functions ------------------------------------------------------------

json radial_function_to_json(const RadialFunction& f) {
  json j;
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, RadialFunction::Indicator>) {
          j["kind"] = "indicator_interval";
          j["params"] = {{"a", k.a}, {"b", k.b}, {"height", k.height}};
        } else if constexpr (std::is_same_v<T, RadialFunction::StepTrain>) {
          j["kind"] = "step_train";
          json steps = json::array();
          for (const auto& s : k.steps)
            steps.push_back({{"a", s.a}, {"b", s.b}, {"height", s.height}});
          j["params"] = {{"steps", steps}};
        } else if constexpr (std::is_same_v<T, RadialFunction::PowerLog>) {
          j["kind"] = "power_log";
          j["params"] = {{"exponent", k.exponent},
                         {"log_exponent", k.log_exponent},
                         {"a", k.a},
                         {"b", k.b},
                         {"amplitude", k.amplitude}};
        } else {
          j["kind"] = "smooth_bump";
          j["params"] = {{"center", k.center},
                         {"width", k.width},
                         {"amplitude", k.amplitude}};
        }
      },
      f.kind());
  return j;
}

RadialFunction radial_function_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const json& p = j.at("params");
  if (kind == "indicator_interval")
    return RadialFunction::indicator(p.at("a").get<double>(), p.at("b").get<double>(),
                                     p.value("height", 1.0));
  if (kind == "step_train") {
    std::vector<RadialFunction::Step> steps;
    for (const auto& s : p.at("steps"))
      steps.push_back({s.at("a").get<double>(), s.at("b").get<double>(),
                       s.at("height").get<double>()});
    return RadialFunction::step_train(std::move(steps));
  }
  if (kind == "power_log")
    return RadialFunction::power_log(p.at("exponent").get<double>(),
                                     p.at("log_exponent").get<double>(),
                                     p.at("a").get<double>(), p.at("b").get<double>(),
                                     p.value("amplitude", 1.0));
  if (kind == "smooth_bump")
    return RadialFunction::smooth_bump(p.at("center").get<double>(),
                                       p.at("width").get<double>(),
                                       p.value("amplitude", 1.0));
  throw std::invalid_argument("unknown radial function kind: " + kind);
}

// --- fits and records -------------------------------------------------------------

json fit_to_json(const ExponentFit& f) {
  return {{"slope", f.slope},
          {"intercept", f.intercept},
          {"r_squared", f.r_squared},
          {"m_min", f.m_min},
          {"m_max", f.m_max}};
}

ExponentFit fit_from_json(const json& j) {
  ExponentFit f;
  f.slope = j.at("slope").get<double>();
  f.intercept = j.at("intercept").get<double>();
  f.r_squared = j.at("r_squared").get<double>();
  f.m_min = j.at("m_min").get<int>();
  f.m_max = j.at("m_max").get<int>();
  return f;
}

json record_to_json(const ExperimentRecord& r) {
  json extra = json::object();
  for (const auto& [k, v] : r.extra) extra[k] = v;
  return {{"schema", "experiment.v1"}, {"id", r.id},
          {"scale_log2", r.scale_log2}, {"measured_log2", r.measured_log2},
          {"fit", fit_to_json(r.fit)},  {"predicted", r.predicted},
          {"pass", r.pass},             {"extra", extra}};
}

ExperimentRecord record_from_json(const json& j) {
  ExperimentRecord r;
  r.id = j.at("id").get<std::string>();
  r.scale_log2 = j.at("scale_log2").get<std::vector<double>>();
  r.measured_log2 = j.at("measured_log2").get<std::vector<double>>();
  r.fit = fit_from_json(j.at("fit"));
  r.predicted = j.at("predicted").get<double>();
  r.pass = j.at("pass").get<bool>();
  for (const auto& [k, v] : j.at("extra").items())
    r.extra.emplace_back(k, v.get<double>());
  return r;
}

json vertices_to_json(int d, const std::string& beta, const std::string& gamma,
                      const std::string& mode,
                      const std::vector<std::pair<std::string, ExponentPair>>& verts) {
  json list = json::array();
  for (const auto& [name, v] : verts) {
    list.push_back({{"name", name},
                    {"inv_p", {v.inv_p.num(), v.inv_p.den()}},
                    {"inv_q", {v.inv_q.num(), v.inv_q.den()}}});
  }
  return {{"schema", "region_vertices.v1"}, {"d", d},      {"beta", beta},
          {"gamma", gamma},                 {"mode", mode}, {"vertices", list}};
}

// --- CSV --------------------------------------------------------------------------

namespace {
std::string csv_header(const std::string& schema) {
  return "# schema=" + schema + "\n";
}
}  // namespace

std::string csv_profile(const CoveringProfile& p) {
  std::ostringstream out;
  out << csv_header("covering_profile.v1") << "k,m,count\n";
  for (int m = 0; m <= p.depth(); ++m)
    for (int k = 0; k <= m; ++k)
      out << k << ',' << m << ',' << p.count(k, m) << '\n';
  return out.str();
}

std::string csv_fits(const std::vector<std::pair<double, ExponentFit>>& rows,
                     const std::string& x_name) {
  std::ostringstream out;
  out << csv_header("exponent_fits.v1")
      << x_name << ",slope,intercept,r_squared,m_min,m_max\n";
  for (const auto& [x, f] : rows)
    out << format_double(x) << ',' << format_double(f.slope) << ','
        << format_double(f.intercept) << ',' << format_double(f.r_squared) << ','
        << f.m_min << ',' << f.m_max << '\n';
  return out.str();
}

std::string csv_polyline(const std::vector<BoundaryPoint>& pts) {
  std::ostringstream out;
  out << csv_header("region_boundary.v1") << "inv_p,inv_q,active_constraint\n";
  for (const auto& p : pts)
    out << format_double(p.inv_p) << ',' << format_double(p.inv_q) << ',' << p.active
        << '\n';
  return out.str();
}

std::string csv_scan(const RegionScanResult& scan) {
  std::ostringstream out;
  out << csv_header("region_scan.v1")
      << "inv_p,inv_q,exponent_easy,exponent_knapp,excluded,predicted_member\n";
  for (const auto& r : scan.rows)
    out << format_double(r.inv_p) << ',' << format_double(r.inv_q) << ','
        << format_double(r.exponent_easy) << ',' << format_double(r.exponent_knapp)
        << ',' << (r.excluded ? 1 : 0) << ',' << (r.predicted_member ? 1 : 0) << '\n';
  return out.str();
}

std::string csv_domination(const DominationReport& report, int d) {
  std::ostringstream out;
  out << csv_header("domination.v1");
  if (d >= 3) {
    out << "r,maximal,mp,r1,r2,ratio\n";
    for (const auto& row : report.rows)
      out << format_double(row.r) << ',' << format_double(row.maximal) << ','
          << format_double(row.pieces.mp) << ',' << format_double(row.pieces.r1) << ','
          << format_double(row.pieces.r2) << ',' << format_double(row.ratio) << '\n';
  } else {
    out << "r,maximal,mp_minus,mp_plus,r1_minus,r1_plus,r2_minus,r2_plus,ratio\n";
    for (const auto& row : report.rows)
      out << format_double(row.r) << ',' << format_double(row.maximal) << ','
          << format_double(row.pieces.mp_minus) << ','
          << format_double(row.pieces.mp_plus) << ','
          << format_double(row.pieces.r1_minus) << ','
          << format_double(row.pieces.r1_plus) << ','
          << format_double(row.pieces.r2_minus) << ','
          << format_double(row.pieces.r2_plus) << ',' << format_double(row.ratio)
          << '\n';
  }
  return out.str();
}

std::string csv_record(const ExperimentRecord& r) {
  std::ostringstream out;
  const char* x_name = r.id == "pq_scaling" ? "k" : "log2_delta";
  out << csv_header("experiment." + r.id + ".v1") << x_name << ",log2_ratio\n";
  for (std::size_t i = 0; i < r.scale_log2.size(); ++i)
    out << format_double(r.scale_log2[i]) << ',' << format_double(r.measured_log2[i])
        << '\n';
  out << "# fit slope=" << format_double(r.fit.slope)
      << " intercept=" << format_double(r.fit.intercept)
      << " r_squared=" << format_double(r.fit.r_squared)
      << " predicted=" << format_double(r.predicted) << " pass=" << (r.pass ? 1 : 0)
      << '\n';
  return out.str();
}

// --- files ------------------------------------------------------------------------

std::string resolve_out_path(const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  const char* dir = std::getenv("RADMAX_OUT_DIR");
  if (!dir || !*dir) return path;
  std::string base(dir);
  if (base.back() != '/') base += '/';
  return base + path;
}

void write_text_file(const std::string& path, const std::string& content) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace radmax::io
