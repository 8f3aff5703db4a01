#include "horocvx/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "horocvx/util.hpp"

namespace horocvx {

namespace {

int parse_int(const std::string& s, const std::string& what) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw InvalidArgument("malformed " + what + ": '" + s + "'");
  return v;
}

template <class T>
T get(const json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key)) throw InvalidArgument(ctx + ": missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument(ctx + ": '" + key + "' has the wrong type");
  }
}

std::string resolve(const std::string& path, const std::string& base_dir) {
  std::filesystem::path p(path);
  if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
  return p.string();
}

}  // namespace

GridPtr parse_grid_spec(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) throw InvalidArgument("grid spec must be s1:N or s2:LxM, got '" + spec + "'");
  std::string kind = spec.substr(0, colon), rest = spec.substr(colon + 1);
  if (kind == "s1") return make_grid(1, parse_int(rest, "grid node count"));
  if (kind == "s2") {
    auto x = rest.find('x');
    int L = parse_int(rest.substr(0, x), "grid polar count");
    if (x != std::string::npos && parse_int(rest.substr(x + 1), "grid azimuth count") != 2 * L)
      throw InvalidArgument("s2 grid requires azimuth count 2L");
    return make_grid(2, L);
  }
  throw InvalidArgument("unknown grid kind '" + kind + "'");
}

json grid_to_json(const Grid& g) {
  if (g.n() == 1) return {{"type", "uniform_s1"}, {"nodes", g.resolution()}};
  return {{"type", "gl_product"}, {"polar", g.polar()}, {"azimuth", g.azimuth()}};
}

GridPtr grid_from_json(const json& j) {
  if (j.is_string()) return parse_grid_spec(j.get<std::string>());
  if (!j.is_object()) throw InvalidArgument("grid must be an object or a spec string");
  std::string type = get<std::string>(j, "type", "grid");
  if (type == "uniform_s1") return make_grid(1, get<int>(j, "nodes", "grid"));
  if (type == "gl_product") {
    int L = get<int>(j, "polar", "grid");
    if (get<int>(j, "azimuth", "grid") != 2 * L) throw InvalidArgument("gl_product grid requires azimuth = 2 polar");
    return make_grid(2, L);
  }
  throw InvalidArgument("unknown grid type '" + type + "'");
}

json field_to_json(const std::string& kind, const Grid& g, const ScalarField& values) {
  check_size(g, values);
  return {{"schema_version", kSchemaVersion}, {"kind", kind}, {"n", g.n()}, {"grid", grid_to_json(g)},
          {"values", values}};
}

FieldFile field_from_json(const json& j, const std::string& expected_kind) {
  if (!j.is_object()) throw InvalidArgument("field file must be a JSON object");
  if (j.contains("schema_version") && j.at("schema_version") != kSchemaVersion)
    throw InvalidArgument("field schema version mismatch: expected " + std::to_string(kSchemaVersion));
  FieldFile f;
  f.kind = j.value("kind", std::string("scalar_field"));
  if (!expected_kind.empty() && f.kind != expected_kind)
    throw InvalidArgument("expected a " + expected_kind + ", got a " + f.kind);
  int n = get<int>(j, "n", "field");
  if (!j.contains("grid")) throw InvalidArgument("field: missing 'grid'");
  f.grid = grid_from_json(j.at("grid"));
  if (f.grid->n() != n) throw InvalidArgument("field: 'n' does not match the grid");
  f.values = get<std::vector<double>>(j, "values", "field");
  if (f.values.size() != f.grid->size())
    throw InvalidArgument("field: expected " + std::to_string(f.grid->size()) + " values, got " +
                          std::to_string(f.values.size()));
  for (double v : f.values)
    if (!std::isfinite(v)) throw InvalidArgument("field: non-finite value");
  return f;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidArgument("malformed JSON in '" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  out << j.dump(1) << '\n';
}

FieldFile read_field(const std::string& path, const std::string& expected_kind) {
  return field_from_json(read_json_file(path), expected_kind);
}

void write_field(const std::string& path, const std::string& kind, const Grid& g, const ScalarField& values) {
  write_json_file(path, field_to_json(kind, g, values));
}

HPoint hpoint_from_json(int n, const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "origin") return origin(n);
    throw InvalidArgument("point must be \"origin\" or a spatial vector");
  }
  if (!j.is_array() || j.size() != std::size_t(n + 1))
    throw InvalidArgument("point needs " + std::to_string(n + 1) + " spatial coordinates");
  Dir x{};
  double s = 0;
  for (int i = 0; i <= n; ++i) {
    x[i] = j[i].get<double>();
    s += x[i] * x[i];
  }
  return LorentzVec::make(n, x, std::sqrt(1 + s));
}

ScalarField build_scalar(const json& spec, GridPtr grid, const std::string& base_dir) {
  const Grid& g = *grid;
  const int n = g.n();
  if (spec.is_number()) return ScalarField(g.size(), spec.get<double>());
  if (!spec.is_object()) throw InvalidArgument("field description must be a number or an object");
  if (spec.contains("values")) {
    FieldFile f = field_from_json(spec);
    if (!f.grid->same_as(g)) throw InvalidArgument("inline field lives on a different grid");
    return f.values;
  }
  std::string type = get<std::string>(spec, "type", "field description");
  if (type == "ball" || type == "point") {
    HPoint X = hpoint_from_json(n, spec.value("center", json("origin")));
    if (type == "point") return support_of_point(grid, X).phi;
    return support_of_ball(grid, X, get<double>(spec, "radius", "ball")).phi;
  }
  if (type == "polynomial") {
    ScalarField out(g.size(), 0.0);
    for (const json& t : get<json>(spec, "terms", "polynomial")) {
      double c = get<double>(t, "coeff", "polynomial term");
      auto pw = get<std::vector<int>>(t, "powers", "polynomial term");
      if (pw.size() > std::size_t(n + 1)) throw InvalidArgument("polynomial term has too many powers");
      for (std::size_t i = 0; i < g.size(); ++i) {
        double m = c;
        for (std::size_t a = 0; a < pw.size(); ++a) m *= std::pow(g.nodes()[i][a], pw[a]);
        out[i] += m;
      }
    }
    return out;
  }
  if (type == "file") {
    FieldFile f = read_field(resolve(get<std::string>(spec, "path", "file"), base_dir));
    if (!f.grid->same_as(g)) throw InvalidArgument("field file lives on a different grid");
    return f.values;
  }
  throw InvalidArgument("unknown field description type '" + type + "'");
}

FlowJob flow_job_from_json(const json& j, const std::string& base_dir) {
  if (!j.is_object()) throw InvalidArgument("flow config must be an object");
  FlowJob job;
  if (!j.contains("grid")) throw InvalidArgument("flow config: missing 'grid'");
  job.grid = grid_from_json(j.at("grid"));
  FlowConfig& c = job.cfg;
  c.k = get<int>(j, "k", "flow config");
  c.p = get<double>(j, "p", "flow config");
  c.f = build_scalar(j.value("f", json(1.0)), job.grid, base_dir);
  c.dt = j.value("dt", c.dt);
  c.safety = j.value("safety", c.safety);
  c.dt_max = j.value("dt_max", c.dt_max);
  c.eps_stop = j.value("eps_stop", c.eps_stop);
  c.max_steps = j.value("max_steps", c.max_steps);
  c.max_retries = j.value("max_retries", c.max_retries);
  c.enforce_even = j.value("enforce_even", c.enforce_even);
  c.band_project = j.value("band_project", c.band_project);
  c.assumption_warn_only = j.value("assumption_warn_only", c.assumption_warn_only);
  c.trace_every = j.value("trace_every", c.trace_every);
  if (!j.contains("initial")) throw InvalidArgument("flow config: missing 'initial'");
  job.initial = make_field(job.grid, build_scalar(j.at("initial"), job.grid, base_dir));
  return job;
}

std::string format_double(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

void write_trace_csv(std::ostream& os, const FlowTrace& trace) {
  os << "t,dt,Wk,Jp,minEigA,maxGradRatio,evenErr,gammaVar,speedSup\n";
  for (const TraceRecord& r : trace) {
    for (double v : {r.t, r.dt, r.Wk, r.Jp, r.minEigA, r.maxGradRatio, r.evenErr, r.gammaVar})
      os << format_double(v) << ',';
    os << format_double(r.speedSup) << '\n';
  }
}

json manifest_to_json(const RunManifest& m) {
  return {{"schema_version", kSchemaVersion}, {"command", m.command}, {"parameters", m.parameters},
          {"inputs", m.inputs}, {"outputs", m.outputs}, {"seed", m.seed}, {"version", m.version},
          {"grid", m.grid}};
}

RunManifest manifest_from_json(const json& j) {
  if (j.value("schema_version", kSchemaVersion) != kSchemaVersion)
    throw InvalidArgument("manifest schema version mismatch");
  RunManifest m;
  m.command = get<std::string>(j, "command", "manifest");
  m.parameters = j.value("parameters", json::object());
  m.inputs = j.value("inputs", std::vector<std::string>{});
  m.outputs = j.value("outputs", std::vector<std::string>{});
  m.seed = j.value("seed", 0ULL);
  m.version = j.value("version", std::string(kToolVersion));
  m.grid = j.value("grid", std::string());
  return m;
}

void write_manifest(const std::string& output_path, const RunManifest& m) {
  write_json_file(output_path + ".manifest.json", manifest_to_json(m));
}

}  // namespace horocvx
