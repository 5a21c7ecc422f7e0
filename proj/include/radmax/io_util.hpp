#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "radmax/covering.hpp"
#include "radmax/dilation_set.hpp"
#include "radmax/experiments.hpp"
#include "radmax/fit.hpp"
#include "radmax/maximal.hpp"
#include "radmax/radial_function.hpp"
#include "radmax/regions.hpp"

namespace radmax::io {

using nlohmann::json;

/// Deterministic shortest round-trip double formatting for artifacts.
std::string format_double(double v);

// JSON round-trips ------------------------------------------------------------

json set_spec_to_json(const SetSpec& spec);
SetSpec set_spec_from_json(const json& j);

json profile_to_json(const AnalyticProfile& p);
AnalyticProfile profile_from_json(const json& j);

json dilation_set_to_json(const DilationSet& set);
DilationSet dilation_set_from_json(const json& j);

json radial_function_to_json(const RadialFunction& f);
RadialFunction radial_function_from_json(const json& j);

json fit_to_json(const ExponentFit& f);
ExponentFit fit_from_json(const json& j);

json record_to_json(const ExperimentRecord& r);
ExperimentRecord record_from_json(const json& j);

json vertices_to_json(int d, const std::string& beta, const std::string& gamma,
                      const std::string& mode,
                      const std::vector<std::pair<std::string, ExponentPair>>& verts);

// CSV emission (first line carries the schema version) -------------------------

std::string csv_profile(const CoveringProfile& p);
std::string csv_fits(const std::vector<std::pair<double, ExponentFit>>& rows,
                     const std::string& x_name);
std::string csv_polyline(const std::vector<BoundaryPoint>& pts);
std::string csv_scan(const RegionScanResult& scan);
std::string csv_domination(const DominationReport& report, int d);
std::string csv_record(const ExperimentRecord& r);

// Files ------------------------------------------------------------------------

/// Resolves relative paths against RADMAX_OUT_DIR when set.
std::string resolve_out_path(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace radmax::io
