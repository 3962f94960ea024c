// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Uses the shipped configs; outputs land under the build tree.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "equidesign/commands.hpp"

using namespace equidesign;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int n, const char* name, bool ok, const std::string& detail) {
  std::printf("criterion %2d (%s): %s%s%s\n", n, name, ok ? "PASS" : "FAIL",
              detail.empty() ? "" : " | ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string cfg_path(const char* name) {
  return std::string(EQUIDESIGN_CONFIG_DIR) + "/" + name;
}

RunConfig shipped(const char* name, const char* outdir) {
  RunConfig cfg = load_config(cfg_path(name));
  cfg.output_dir = (fs::path(EQUIDESIGN_WORK_DIR) / outdir).string();
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

double manufactured_error(int N, int M) {
  Discretization d = make_discretization(N, M);
  Vec U = solve(d.lap, scale_rhs(d.grid, Vec::Constant(d.grid.size(), 1.0)));
  Vec exact = sample(d.grid, [](double, double, double r, double) {
    return 0.25 * (1.0 - r * r);
  });
  return (U - exact).cwiseAbs().maxCoeff();
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Local maxima of rho along the vertical diameter (phi = 3pi/2 to pi/2).
int vertical_axis_peaks(const PolarGrid& g, const Vec& rho) {
  int N = g.n_phi, M = g.n_radial;
  std::vector<double> prof;
  for (int j = M - 1; j >= 1; --j) prof.push_back(rho[g.flat(3 * N / 4, j)]);
  for (int j = 0; j < M; ++j) prof.push_back(rho[g.flat(N / 4, j)]);
  int peaks = 0;
  for (std::size_t i = 1; i + 1 < prof.size(); ++i)
    if (prof[i] > prof[i - 1] && prof[i] >= prof[i + 1]) ++peaks;
  return peaks;
}

double clover_mass(const PolarGrid& g, const Vec& rho, double scale) {
  Vec mask = sample(g, [&](double, double, double r, double phi) {
    return r <= scale * std::abs(std::cos(2.0 * phi)) ? 1.0 : 0.0;
  });
  return l2_inner(g, mask, rho);
}

}  // namespace

int main() {
  fs::create_directories(EQUIDESIGN_WORK_DIR);
  std::ostringstream detail;

  // 1. Operator correctness: manufactured solution accuracy and order.
  {
    auto t0 = std::chrono::steady_clock::now();
    double e1 = manufactured_error(32, 24);
    double e2 = manufactured_error(64, 48);
    double e3 = manufactured_error(128, 96);
    double o1 = std::log2(e1 / e2), o2 = std::log2(e2 / e3);
    double t = elapsed_s(t0);
    detail.str("");
    detail << "max_err(64,48)=" << e2 << " orders=" << o1 << "," << o2 << " t=" << t << "s";
    report(1, "operator correctness", e2 <= 1e-3 && o1 >= 1.5 && o2 >= 1.5 && t <= 10.0,
           detail.str());
  }

  // 2. Poincare hypothesis: lambda_1 vs the Bessel-zero reference.
  {
    auto t0 = std::chrono::steady_clock::now();
    const double j01 = 2.404825557695773;
    double ref = j01 * j01;
    Discretization d = make_discretization(64, 48);
    double lam = smallest_eigenvalue(d.lap, d.grid);
    double t = elapsed_s(t0);
    detail.str("");
    detail << "lambda1=" << lam << " ref=" << ref << " c_omega=" << 1.0 / lam << " t=" << t << "s";
    report(2, "Poincare hypothesis", std::abs(lam - ref) <= 0.02 * ref && 1.0 / lam < 4.0 && t <= 30.0,
           detail.str());
  }

  // 3. Forward solver on every shipped config: convergence, mass, sign,
  //    uniqueness across initial guesses.
  {
    bool ok = true;
    detail.str("");
    for (const char* name : {"example1.json", "example2.json", "example3.json",
                             "baseline.json", "sanity.json"}) {
      RunConfig cfg = load_config(cfg_path(name));
      Discretization d = make_discretization(cfg.n_phi, cfg.n_radial, cfg.stencil);
      Vec u = build_control(cfg, d.grid);
      EquilibriumState st = solve_equilibrium(d, u, cfg.optimize.fp);
      Vec warm = st.U + 0.01 * sample(d.grid, [](double, double, double r, double) {
                   return 1.0 - r * r;
                 });
      EquilibriumState st2 = solve_equilibrium(d, u, cfg.optimize.fp, &warm);
      double dev = (st.U - st2.U).cwiseAbs().maxCoeff();
      double mass_err = std::abs(integrate(d.grid, st.rho) - 1.0);
      bool this_ok = st.fp_iterations <= 200 && st.fp_residual < 1e-10 &&
                     mass_err <= 1e-12 && st.U.minCoeff() >= -1e-10 && dev <= 1e-9;
      if (!this_ok) detail << name << " failed ";
      ok = ok && this_ok;
    }
    if (ok) detail << "all shipped configs converge, mass=1, U>=0, unique";
    report(3, "forward solver", ok, detail.str());
  }

  // 4. Zero-field baseline: boundary concentration and radial monotonicity.
  {
    Discretization d = make_discretization(64, 48);
    EquilibriumState st = solve_equilibrium(d, Vec::Zero(d.grid.size()));
    const PolarGrid& g = d.grid;
    Eigen::Index amax;
    st.rho.maxCoeff(&amax);
    double r_argmax = g.r[static_cast<int>(amax) / g.n_phi];
    bool monotone = true;
    double angvar = 0.0;
    double prev = st.rho[0];
    for (int j = 1; j < g.n_radial; ++j) {
      double lo = st.rho[g.flat(0, j)], hi = lo;
      for (int i = 1; i < g.n_phi; ++i) {
        lo = std::min(lo, st.rho[g.flat(i, j)]);
        hi = std::max(hi, st.rho[g.flat(i, j)]);
      }
      angvar = std::max(angvar, hi - lo);
      if (lo < prev - 1e-8) monotone = false;
      prev = hi;
    }
    detail.str("");
    detail << "argmax_r=" << r_argmax << " monotone=" << monotone << " angvar=" << angvar;
    report(4, "zero-field baseline", r_argmax > 0.8 && monotone && angvar <= 1e-8, detail.str());
  }

  // 5. Adjoint gradient vs finite differences.
  {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig c1 = shipped("gradcheck_example1.json", "gradcheck_example1");
    RunConfig c2 = shipped("gradcheck_regularizer.json", "gradcheck_regularizer");
    int rc1 = cmd_gradcheck(c1);
    int rc2 = cmd_gradcheck(c2);
    auto err = [](const RunConfig& c) {
      auto j = nlohmann::json::parse(slurp(fs::path(c.output_dir) / "gradcheck.json"));
      return j["min_rel_err"].get<double>();
    };
    double e1 = err(c1), e2 = err(c2);
    double t = elapsed_s(t0);
    detail.str("");
    detail << "example1 min_rel_err=" << e1 << " regularizer=" << e2 << " t=" << t << "s";
    report(5, "adjoint gradient check", rc1 == 0 && rc2 == 0 && e1 <= 1e-4 && e2 <= 1e-6 && t <= 60.0,
           detail.str());
  }

  // 6. Example 1: convergence by tolerance, monotone J, central concentration.
  OptimizeResult ex1;
  {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg = shipped("example1.json", "example1");
    Discretization d = make_discretization(cfg.n_phi, cfg.n_radial, cfg.stencil);
    Vec V = valley_eval(cfg.valley, d.grid);
    ex1 = ncg_minimize(d, build_control(cfg, d.grid), V, cfg.optimize);
    double prev = ex1.report.J0;
    bool monotone = true;
    for (const auto& it : ex1.report.iterates) {
      if (it.J > prev + 1e-15) monotone = false;
      prev = it.J;
    }
    Eigen::Index amax;
    ex1.state.rho.maxCoeff(&amax);
    double r_argmax = d.grid.r[static_cast<int>(amax) / d.grid.n_phi];
    double t = elapsed_s(t0);
    detail.str("");
    detail << "reason=" << to_string(ex1.report.reason) << " k=" << ex1.report.iterations
           << " argmax_r=" << r_argmax << " t=" << t << "s";
    report(6, "example 1", ex1.report.reason == StopReason::tol &&
           ex1.report.iterations <= 150 && monotone && r_argmax <= 0.1 && t <= 600.0,
           detail.str());
  }

  // 7. Example 2: vertical elongation and bimodality.
  {
    RunConfig cfg = shipped("example2.json", "example2");
    Discretization d = make_discretization(cfg.n_phi, cfg.n_radial, cfg.stencil);
    Vec V = valley_eval(cfg.valley, d.grid);
    OptimizeResult res = ncg_minimize(d, build_control(cfg, d.grid), V, cfg.optimize);
    Vec x = sample(d.grid, [](double xx, double, double, double) { return xx; });
    Vec y = sample(d.grid, [](double, double yy, double, double) { return yy; });
    double mx = l2_inner(d.grid, x, res.state.rho);
    double my = l2_inner(d.grid, y, res.state.rho);
    Vec cx = (x.array() - mx).square();
    Vec cy = (y.array() - my).square();
    double vr = l2_inner(d.grid, cy, res.state.rho) / l2_inner(d.grid, cx, res.state.rho);
    int peaks = vertical_axis_peaks(d.grid, res.state.rho);
    detail.str("");
    detail << "reason=" << to_string(res.report.reason) << " var_ratio=" << vr
           << " peaks=" << peaks;
    report(7, "example 2", vr >= 1.5 && peaks >= 2, detail.str());
  }

  // 8. Example 3: clover-region mass gain over the zero-control baseline.
  {
    RunConfig cfg = shipped("example3.json", "example3");
    Discretization d = make_discretization(cfg.n_phi, cfg.n_radial, cfg.stencil);
    Vec V = valley_eval(cfg.valley, d.grid);
    double scale = std::get<CloverValley>(cfg.valley).scale;
    EquilibriumState base = solve_equilibrium(d, Vec::Zero(d.grid.size()));
    OptimizeResult res = ncg_minimize(d, build_control(cfg, d.grid), V, cfg.optimize);
    double m_opt = clover_mass(d.grid, res.state.rho, scale);
    double m_base = clover_mass(d.grid, base.rho, scale);
    detail.str("");
    detail << "reason=" << to_string(res.report.reason) << " mass_opt=" << m_opt
           << " mass_base=" << m_base;
    report(8, "example 3", m_opt > m_base, detail.str());
  }

  // 9. Optimizer sanity: pure Tikhonov drives u to 0; FR ratio is exactly 1.
  {
    RunConfig cfg = shipped("sanity.json", "sanity");
    Discretization d = make_discretization(cfg.n_phi, cfg.n_radial, cfg.stencil);
    OptimizeResult res = ncg_minimize(d, build_control(cfg, d.grid),
                                      valley_eval(cfg.valley, d.grid), cfg.optimize);
    double norm = std::sqrt(h1_inner(d.grid, res.u, res.u));
    Vec f = random_h10_field(d.grid, 2, 1.0);
    bool beta_one = fr_beta(d.grid, f, f) == 1.0;
    detail.str("");
    detail << "reason=" << to_string(res.report.reason) << " |u|_H1=" << norm
           << " bound=" << 10.0 * cfg.optimize.tol << " fr_beta=" << (beta_one ? 1 : 0);
    report(9, "optimizer sanity", res.report.reason == StopReason::tol &&
           norm <= 10.0 * cfg.optimize.tol && beta_one, detail.str());
  }

  // 10. Reproducibility: rerunning a command from its own emitted JSON
  //     reproduces every output byte for byte.
  {
    bool ok = true;
    detail.str("");

    auto rerun_check = [&](const RunConfig& cfg, int (*cmd)(const RunConfig&),
                           const char* report_file, std::initializer_list<const char*> files) {
      cmd(cfg);
      std::vector<std::string> before;
      for (const char* f : files) before.push_back(slurp(fs::path(cfg.output_dir) / f));
      RunConfig again = load_config((fs::path(cfg.output_dir) / report_file).string());
      cmd(again);
      std::size_t idx = 0;
      for (const char* f : files) {
        if (slurp(fs::path(cfg.output_dir) / f) != before[idx++]) {
          detail << f << " differs ";
          ok = false;
        }
      }
    };

    rerun_check(shipped("baseline.json", "repro_forward"), cmd_forward, "forward.json",
                {"u.csv", "U.csv", "rho.csv", "forward.json"});
    rerun_check(shipped("sanity.json", "repro_optimize"), cmd_optimize, "history.json",
                {"u_opt.csv", "U_opt.csv", "rho_opt.csv", "V.csv", "history.json"});
    rerun_check(shipped("gradcheck_regularizer.json", "repro_gradcheck"), cmd_gradcheck,
                "gradcheck.json", {"gradcheck.json"});
    if (ok) detail << "forward, optimize, gradcheck reruns byte-identical";
    report(10, "reproducibility", ok, detail.str());
  }

  if (g_failures) std::printf("%d criterion(s) FAILED\n", g_failures);
  else std::printf("all criteria passed\n");
  return g_failures == 0 ? 0 : 1;
}
