#pragma once

#include <json.hpp>
#include <string>

#include "equidesign/objective.hpp"
#include "equidesign/optimizer.hpp"

namespace equidesign {

// Initial control: zero, a sampled field from CSV, or a seeded random
// H1_0 field (boundary ring zero, origin ring constant).
struct ZeroControl {};
struct FileControl {
  std::string path;
};
struct RandomControl {
  unsigned seed = 0;
  double scale = 1.0;
};
using ControlSpec = std::variant<ZeroControl, FileControl, RandomControl>;

struct GradCheckParams {
  unsigned seed = 1;
  double scale = 1.0;
  std::vector<double> steps = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  double tolerance = 1e-4;
};

struct RunConfig {
  int n_phi = 150;
  int n_radial = 100;
  ValleySpec valley = ZeroValley{};
  ControlSpec control = ZeroControl{};
  OptimizeConfig optimize;
  GradCheckParams gradcheck;
  StencilVariant stencil = StencilVariant::corrected;
  std::string output_dir = "out";
};

// Parses a config file; partial configs are filled with defaults. A report
// JSON produced by a previous run (object with a "config" key) is accepted
// and rerun from its embedded effective config.
RunConfig load_config(const std::string& path);
RunConfig config_from_json(const nlohmann::json& j);
// Fully resolved effective config; embedding this in every report makes runs
// reproducible from their own outputs.
nlohmann::json config_to_json(const RunConfig& cfg);

// Field CSV: header "i,j,phi,r,x,y,value", one row per node in flat order,
// i/j 1-based, reals at 17 significant digits (bit-exact round trip).
void write_field_csv(const std::string& path, const PolarGrid& g, const Vec& values);
Vec read_field_csv(const std::string& path, const PolarGrid& g);

void write_json_file(const std::string& path, const nlohmann::json& j);

Vec random_h10_field(const PolarGrid& g, unsigned seed, double scale);
Vec build_control(const RunConfig& cfg, const PolarGrid& g);

// EQUIDESIGN_THREADS cap (>=1); recorded in reports. All numerics are
// currently single-threaded, so this is an upper bound, not a demand.
int thread_cap();

}  // namespace equidesign
