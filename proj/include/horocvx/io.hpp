#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

#include "horocvx/flow.hpp"
#include "horocvx/hconvex.hpp"

namespace horocvx {

using json = nlohmann::json;

constexpr int kSchemaVersion = 1;
constexpr const char* kToolVersion = "0.1.0";

// "s1:N", "s2:L" or "s2:LxM" (M must be 2L).
GridPtr parse_grid_spec(const std::string& spec);

json grid_to_json(const Grid& g);
GridPtr grid_from_json(const json& j);

struct FieldFile {
  std::string kind;  // "scalar_field", "support_field", "euclid_support"
  GridPtr grid;
  ScalarField values;
};

json field_to_json(const std::string& kind, const Grid& g, const ScalarField& values);
// Throws InvalidArgument on schema problems or when expected_kind is given and differs.
FieldFile field_from_json(const json& j, const std::string& expected_kind = "");

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);
FieldFile read_field(const std::string& path, const std::string& expected_kind = "");
void write_field(const std::string& path, const std::string& kind, const Grid& g, const ScalarField& values);

// Hyperbolic point from "origin" or the spatial part [x_1..x_{n+1}].
HPoint hpoint_from_json(int n, const json& j);

// Builds a field on `grid` from a description:
//   number                                   constant
//   {"type":"ball","center":..,"radius":r}   phi of a geodesic ball
//   {"type":"point","center":..}             phi of a point
//   {"type":"polynomial","terms":[{"coeff":c,"powers":[i,j,k]}]}  sum c z_0^i z_1^j z_2^k
//   {"type":"file","path":..}                values of a field file on the same grid
//   {"n":..,"grid":..,"values":..}           inline field file
ScalarField build_scalar(const json& spec, GridPtr grid, const std::string& base_dir = "");

struct FlowJob {
  GridPtr grid;
  FlowConfig cfg;
  SupportField initial;
};

// {"grid":"s1:64","k":0,"p":0,"f":<spec>,"initial":<spec>, optional step controls}.
FlowJob flow_job_from_json(const json& j, const std::string& base_dir = "");

void write_trace_csv(std::ostream& os, const FlowTrace& trace);

struct RunManifest {
  std::string command;
  json parameters = json::object();
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  unsigned long long seed = 0;
  std::string version = kToolVersion;
  std::string grid;
};

json manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const json& j);
// Writes <output>.manifest.json.
void write_manifest(const std::string& output_path, const RunManifest& m);

// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace horocvx
