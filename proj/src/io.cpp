#include "equidesign/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace equidesign {

using nlohmann::json;

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void bad_config(const std::string& msg) {
  throw std::runtime_error("config: " + msg);
}

ValleySpec valley_from_json(const json& j) {
  std::string type = j.value("type", "zero");
  if (type == "zero") return ZeroValley{};
  if (type == "gaussian") {
    GaussianValley v;
    v.amplitude = j.value("amplitude", v.amplitude);
    v.width = j.value("width", v.width);
    if (j.contains("center")) {
      v.cx = j["center"].at(0).get<double>();
      v.cy = j["center"].at(1).get<double>();
    }
    if (!(v.amplitude > 0) || !(v.width > 0)) bad_config("gaussian valley needs positive amplitude/width");
    if (v.cx * v.cx + v.cy * v.cy > 1.0 + 1e-12) bad_config("gaussian valley center outside the unit disk");
    return v;
  }
  if (type == "anisotropic_gaussian") {
    AnisotropicGaussianValley v;
    v.width_x = j.value("width_x", v.width_x);
    v.width_y = j.value("width_y", v.width_y);
    if (!(v.width_x > 0) || !(v.width_y > 0)) bad_config("anisotropic valley needs positive widths");
    return v;
  }
  if (type == "clover") {
    CloverValley v;
    v.depth = j.value("depth", v.depth);
    v.scale = j.value("scale", v.scale);
    if (!(v.depth > 0) || !(v.scale > 0)) bad_config("clover valley needs positive depth/scale");
    return v;
  }
  if (type == "from_file") {
    FromFileValley v;
    v.path = j.at("path").get<std::string>();
    return v;
  }
  bad_config("unknown valley type '" + type + "'");
}

json valley_to_json(const ValleySpec& spec) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ZeroValley>) {
          return {{"type", "zero"}};
        } else if constexpr (std::is_same_v<T, GaussianValley>) {
          return {{"type", "gaussian"},
                  {"amplitude", s.amplitude},
                  {"width", s.width},
                  {"center", {s.cx, s.cy}}};
        } else if constexpr (std::is_same_v<T, AnisotropicGaussianValley>) {
          return {{"type", "anisotropic_gaussian"}, {"width_x", s.width_x}, {"width_y", s.width_y}};
        } else if constexpr (std::is_same_v<T, CloverValley>) {
          return {{"type", "clover"}, {"depth", s.depth}, {"scale", s.scale}};
        } else {
          return {{"type", "from_file"}, {"path", s.path}};
        }
      },
      spec);
}

ControlSpec control_from_json(const json& j) {
  std::string type = j.value("type", "zero");
  if (type == "zero") return ZeroControl{};
  if (type == "file") return FileControl{j.at("path").get<std::string>()};
  if (type == "random") {
    RandomControl c;
    c.seed = j.value("seed", c.seed);
    c.scale = j.value("scale", c.scale);
    return c;
  }
  bad_config("unknown control type '" + type + "'");
}

json control_to_json(const ControlSpec& spec) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ZeroControl>) {
          return {{"type", "zero"}};
        } else if constexpr (std::is_same_v<T, FileControl>) {
          return {{"type", "file"}, {"path", s.path}};
        } else {
          return {{"type", "random"}, {"seed", s.seed}, {"scale", s.scale}};
        }
      },
      spec);
}

}  // namespace

RunConfig config_from_json(const json& root) {
  const json& j = root.contains("config") ? root.at("config") : root;
  RunConfig cfg;
  if (j.contains("grid")) {
    cfg.n_phi = j["grid"].value("n_phi", cfg.n_phi);
    cfg.n_radial = j["grid"].value("n_radial", cfg.n_radial);
  }
  if (j.contains("valley")) cfg.valley = valley_from_json(j["valley"]);
  if (j.contains("control")) cfg.control = control_from_json(j["control"]);

  if (j.contains("optimize")) {
    const json& o = j["optimize"];
    auto& c = cfg.optimize;
    c.alpha = o.value("alpha", c.alpha);
    c.tol = o.value("tol", c.tol);
    c.k_max = o.value("max_iters", c.k_max);
    c.ls.s0 = o.value("s0", c.ls.s0);
    c.ls.c1 = o.value("c1", c.ls.c1);
    c.ls.shrink = o.value("shrink", c.ls.shrink);
    c.ls.max_backtracks = o.value("max_backtracks", c.ls.max_backtracks);
    c.restart_period = o.value("restart_period", c.restart_period);
    std::string method = o.value("method", std::string("ncg"));
    if (method == "ncg") c.method = Method::ncg;
    else if (method == "steepest") c.method = Method::steepest;
    else bad_config("unknown method '" + method + "'");
    if (o.contains("box") && !o["box"].is_null()) {
      double lo = o["box"].at(0).get<double>();
      double hi = o["box"].at(1).get<double>();
      if (!(lo <= hi)) bad_config("box bounds must satisfy M1 <= M2");
      c.box = {lo, hi};
    }
    if (!(c.alpha > 0) || !(c.tol > 0) || c.k_max < 1) bad_config("optimize needs alpha>0, tol>0, max_iters>=1");
    if (!(c.ls.c1 > 0 && c.ls.c1 < 1) || !(c.ls.shrink > 0 && c.ls.shrink < 1) || !(c.ls.s0 > 0))
      bad_config("line-search parameters out of range");
  }
  if (j.contains("fixed_point")) {
    const json& f = j["fixed_point"];
    cfg.optimize.fp.tol = f.value("tol", cfg.optimize.fp.tol);
    cfg.optimize.fp.max_sweeps = f.value("max_sweeps", cfg.optimize.fp.max_sweeps);
    cfg.optimize.fp.theta = f.value("theta", cfg.optimize.fp.theta);
    if (!(cfg.optimize.fp.theta > 0 && cfg.optimize.fp.theta <= 1)) bad_config("theta must be in (0,1]");
  }
  if (j.contains("gradcheck")) {
    const json& gcj = j["gradcheck"];
    cfg.gradcheck.seed = gcj.value("seed", cfg.gradcheck.seed);
    cfg.gradcheck.scale = gcj.value("scale", cfg.gradcheck.scale);
    cfg.gradcheck.tolerance = gcj.value("tolerance", cfg.gradcheck.tolerance);
    if (gcj.contains("steps")) cfg.gradcheck.steps = gcj["steps"].get<std::vector<double>>();
  }
  std::string model = j.value("derivative_model", std::string("consistent"));
  if (model == "consistent") cfg.optimize.model = DerivativeModel::consistent;
  else if (model == "pointwise") cfg.optimize.model = DerivativeModel::pointwise;
  else bad_config("unknown derivative_model '" + model + "'");
  std::string stencil = j.value("stencil", std::string("corrected"));
  if (stencil == "corrected") cfg.stencil = StencilVariant::corrected;
  else if (stencil == "legacy") cfg.stencil = StencilVariant::legacy;
  else bad_config("unknown stencil '" + stencil + "'");
  cfg.output_dir = j.value("output_dir", cfg.output_dir);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  json j;
  in >> j;
  return config_from_json(j);
}

json config_to_json(const RunConfig& cfg) {
  json o;
  o["grid"] = {{"n_phi", cfg.n_phi}, {"n_radial", cfg.n_radial}};
  o["valley"] = valley_to_json(cfg.valley);
  o["control"] = control_to_json(cfg.control);
  const auto& c = cfg.optimize;
  o["optimize"] = {{"alpha", c.alpha},
                   {"tol", c.tol},
                   {"max_iters", c.k_max},
                   {"s0", c.ls.s0},
                   {"c1", c.ls.c1},
                   {"shrink", c.ls.shrink},
                   {"max_backtracks", c.ls.max_backtracks},
                   {"restart_period", c.restart_period},
                   {"method", c.method == Method::ncg ? "ncg" : "steepest"}};
  if (c.box)
    o["optimize"]["box"] = {c.box->first, c.box->second};
  else
    o["optimize"]["box"] = nullptr;
  o["fixed_point"] = {{"tol", c.fp.tol}, {"max_sweeps", c.fp.max_sweeps}, {"theta", c.fp.theta}};
  o["gradcheck"] = {{"seed", cfg.gradcheck.seed},
                    {"scale", cfg.gradcheck.scale},
                    {"steps", cfg.gradcheck.steps},
                    {"tolerance", cfg.gradcheck.tolerance}};
  o["derivative_model"] = c.model == DerivativeModel::consistent ? "consistent" : "pointwise";
  o["stencil"] = cfg.stencil == StencilVariant::corrected ? "corrected" : "legacy";
  o["output_dir"] = cfg.output_dir;
  return o;
}

void write_field_csv(const std::string& path, const PolarGrid& g, const Vec& values) {
  if (values.size() != g.size()) throw std::invalid_argument("write_field_csv: length mismatch");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "i,j,phi,r,x,y,value\n";
  for (int j = 0; j < g.n_radial; ++j) {
    double r = g.r[j];
    for (int i = 0; i < g.n_phi; ++i) {
      double phi = g.phi[i];
      out << (i + 1) << ',' << (j + 1) << ',' << fmt17(phi) << ',' << fmt17(r) << ','
          << fmt17(r * std::cos(phi)) << ',' << fmt17(r * std::sin(phi)) << ','
          << fmt17(values[g.flat(i, j)]) << '\n';
    }
  }
}

Vec read_field_csv(const std::string& path, const PolarGrid& g) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open field file: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "i,j,phi,r,x,y,value")
    throw std::runtime_error("field file " + path + ": bad header");
  Vec out(g.size());
  int count = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (count >= g.size()) throw std::runtime_error("field file " + path + ": too many rows");
    auto last = line.rfind(',');
    if (last == std::string::npos) throw std::runtime_error("field file " + path + ": bad row");
    out[count++] = std::strtod(line.c_str() + last + 1, nullptr);
  }
  if (count != g.size())
    throw std::runtime_error("field file " + path + ": row count does not match the grid");
  return out;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
}

Vec random_h10_field(const PolarGrid& g, unsigned seed, double scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(g.size());
  for (int k = 0; k < g.size(); ++k) v[k] = scale * gauss(rng);
  for (int i = 0; i < g.n_phi; ++i) {
    v[g.flat(i, g.n_radial - 1)] = 0.0;  // boundary ring
    v[g.flat(i, 0)] = v[0];              // origin ring is a single value
  }
  return v;
}

Vec build_control(const RunConfig& cfg, const PolarGrid& g) {
  return std::visit(
      [&](const auto& s) -> Vec {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ZeroControl>) {
          return Vec::Zero(g.size());
        } else if constexpr (std::is_same_v<T, FileControl>) {
          return read_field_csv(s.path, g);
        } else {
          return random_h10_field(g, s.seed, s.scale);
        }
      },
      cfg.control);
}

int thread_cap() {
  const char* env = std::getenv("EQUIDESIGN_THREADS");
  if (!env || !*env) return 0;  // unset: no cap
  int n = std::atoi(env);
  return n < 1 ? 1 : n;
}

}  // namespace equidesign
