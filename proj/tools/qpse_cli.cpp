// Command-line driver: convergence tables, benchmarks and figure data.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qpse/checkpoint.hpp"
#include "qpse/errors.hpp"
#include "qpse/harness/config.hpp"
#include "qpse/harness/export.hpp"
#include "qpse/harness/study.hpp"
#include "qpse/harness/tables.hpp"
#include "qpse/norms.hpp"

namespace fs = std::filesystem;
using namespace qpse;
using namespace qpse::harness;

namespace {

struct Common {
  std::string method;
  std::vector<int> N;
  std::vector<double> tau;
  double T = 0.0;
  int taylor_order = 5;
  std::string reference = "auto";
  std::string out = "qpse-out";
  std::string cache;
  bool paper_scale = false;
  int threads = 1;
  bool quiet = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--method", c.method, "pm, qsm or pm,qsm");
  app->add_option("--N", c.N, "half-widths N (points per axis 2N)")->delimiter(',');
  app->add_option("--tau", c.tau, "time steps")->delimiter(',');
  app->add_option("--T", c.T, "final time");
  app->add_option("--taylor-order", c.taylor_order, "QSM Taylor order")->capture_default_str();
  app->add_option("--reference", c.reference, "reference checkpoint path, or auto")->capture_default_str();
  app->add_option("--out", c.out, "output directory")->capture_default_str();
  app->add_option("--cache", c.cache, "reference cache directory (default <out>/cache)");
  app->add_flag("--paper-scale", c.paper_scale, "full-size references (hours, several GB)");
  app->add_option("--threads", c.threads, "concurrent study cells")->capture_default_str();
  app->add_flag("--quiet", c.quiet, "no progress messages");
}

RunContext context(const Common& c) {
  RunContext ctx;
  ctx.cache_dir = c.cache.empty() ? fs::path(c.out) / "cache" : fs::path(c.cache);
  ctx.threads = c.threads;
  if (!c.quiet) ctx.log = [](const std::string& m) { std::cerr << "[qpse] " << m << std::endl; };
  return ctx;
}

std::vector<Method> parse_methods(const std::string& s) {
  std::vector<Method> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_method(item));
  return out;
}

void apply_overrides(ExperimentConfig& cfg, const Common& c) {
  if (!c.method.empty()) cfg.methods = parse_methods(c.method);
  if (!c.N.empty()) cfg.N = c.N;
  if (!c.tau.empty()) cfg.tau = c.tau;
  if (c.T > 0.0) cfg.T = c.T;
  cfg.taylor_order = c.taylor_order;
  if (c.reference != "auto") cfg.reference.path = fs::path(c.reference);
}

void write_outputs(const ErrorReport& report, const fs::path& dir, const std::string& stem) {
  fs::create_directories(dir);
  std::ofstream csv(dir / (stem + ".csv"));
  write_report_csv(csv, report);
  std::ofstream txt(dir / (stem + ".summary.txt"));
  write_report_summary(txt, report);
  write_report_summary(std::cout, report);
  std::cout << "wrote " << (dir / (stem + ".csv")).string() << "\n";
}

ErrorReport run_study(const ExperimentConfig& cfg, const RunContext& ctx) {
  return cfg.study == StudyKind::Temporal ? run_temporal_study(cfg, ctx) : run_spatial_study(cfg, ctx);
}

// A solution of the problem at T: a stored checkpoint, or a fresh PM/QSM run.
SpectralState solve(const Problem& problem, const Common& c, const std::string& state_path) {
  if (!state_path.empty()) return read_checkpoint(fs::path(state_path), problem.projection).state;
  const Method m = c.method.empty() ? Method::PM : parse_methods(c.method).front();
  const int N = c.N.empty() ? 8 : c.N.front();
  const double tau = c.tau.empty() ? 1e-5 : c.tau.front();
  if (!c.quiet) std::cerr << "[qpse] propagating " << problem.id << " with " << to_string(m) << " N=" << N << "\n";
  return propagate(problem, m, N, tau, step_count(problem.T, tau), SolverSettings{c.taylor_order}).state;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasiperiodic Schrodinger solvers (PM-OS2, QSM-OS2) and verification harness"};
  app.require_subcommand(1);

  auto* problems = app.add_subcommand("problems", "list builtin problems");

  Common run_opts;
  std::string config_path;
  auto* run = app.add_subcommand("run", "run the study described by a JSON config");
  run->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);
  add_common(run, run_opts);

  Common table_opts;
  std::vector<std::string> table_list;
  auto* tables = app.add_subcommand("tables", "reproduce named tables (table1..table4)");
  tables->add_option("names", table_list, "table names")->required();
  add_common(tables, table_opts);

  Common bench_opts;
  std::string bench_problem = "1d-sqrt3";
  std::vector<int> qsm_N{8, 16, 32};
  std::size_t pm_steps = 200, qsm_steps = 10;
  auto* bench = app.add_subcommand("bench", "per-step cost of PM and QSM against D");
  add_common(bench, bench_opts);
  bench->add_option("--problem", bench_problem)->capture_default_str();
  bench->add_option("--qsm-N", qsm_N, "QSM half-widths")->delimiter(',');
  bench->add_option("--pm-steps", pm_steps)->capture_default_str();
  bench->add_option("--qsm-steps", qsm_steps)->capture_default_str();
  bool bench_estimate = false;
  bench->add_flag("--fftw-estimate", bench_estimate, "time PM with FFTW_ESTIMATE plans instead of FFTW_MEASURE");

  Common dens_opts;
  std::string dens_problem = "1d-sqrt3", dens_state, dens_file = "density.csv";
  std::vector<double> dens_box;
  std::vector<int> dens_res;
  double dens_eps = 0.0;
  auto* dens = app.add_subcommand("export-density", "sample |u(x,T)|^2 on a box");
  add_common(dens, dens_opts);
  dens->add_option("--problem", dens_problem)->capture_default_str();
  dens->add_option("--state", dens_state, "checkpoint to export instead of propagating");
  dens->add_option("--box", dens_box, "lo,hi per axis")->delimiter(',')->required();
  dens->add_option("--resolution", dens_res, "points per axis")->delimiter(',')->required();
  dens->add_option("--drop", dens_eps, "skip modes with |c| <= drop");
  dens->add_option("--file", dens_file)->capture_default_str();

  Common diff_opts;
  std::string diff_problem = "1d-sqrt3", diff_state, diff_file = "diffraction.csv";
  double threshold = 0.0;
  int symmetry = 0;
  auto* diff = app.add_subcommand("export-diffraction", "Fourier exponents above a magnitude threshold");
  add_common(diff, diff_opts);
  diff->add_option("--problem", diff_problem)->capture_default_str();
  diff->add_option("--state", diff_state, "checkpoint to export instead of propagating");
  diff->add_option("--threshold", threshold)->required();
  diff->add_option("--file", diff_file)->capture_default_str();
  diff->add_option("--check-symmetry", symmetry, "also test rotational symmetry of this order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (problems->parsed()) {
      for (const auto& p : builtin_problems()) {
        std::cout << p.id << "\n  " << p.description << "\n  d=" << p.projection->d() << " n=" << p.projection->n()
                  << " potential modes=" << p.potential.modes().size() << (p.potential.is_real() ? " (real)" : " (complex)")
                  << " initial modes=" << p.initial.size() << " T=" << p.T << " kinetic=" << p.kinetic_coefficient << "\n";
      }
      return 0;
    }
    if (run->parsed()) {
      ExperimentConfig cfg = load_config(config_path);
      apply_overrides(cfg, run_opts);
      RunContext ctx = context(run_opts);
      const fs::path out(run_opts.out);
      const std::string stem = fs::path(config_path).stem().string();
      if (cfg.study == StudyKind::Single) {
        validate_config(cfg);
        Problem problem = resolve_problem(cfg);
        fs::create_directories(out);
        for (Method m : cfg.methods)
          for (int N : cfg.N)
            for (double tau : cfg.tau) {
              auto r = propagate(problem, m, N, tau, step_count(problem.T, tau),
                                 SolverSettings{cfg.taylor_order, cfg.embedding}, 1);
              std::ostringstream name;
              name << stem << "-" << to_string(m) << "-N" << N << "-tau" << tau;
              write_checkpoint(out / (name.str() + ".qps"), r.state, m == Method::PM ? MethodTag::PM : MethodTag::QSM);
              std::ofstream traj(out / (name.str() + ".traj.csv"));
              write_trajectory(traj, r.trajectory);
              if (cfg.diffraction) {
                std::ofstream f(out / (name.str() + ".diffraction.csv"));
                write_diffraction(f, export_diffraction(r.state, cfg.diffraction->threshold));
              }
              if (cfg.density) {
                std::ofstream f(out / (name.str() + ".density.csv"));
                export_density(f, r.state, cfg.density->box, cfg.density->resolution);
              }
              std::cout << name.str() << ": l2 norm " << l2_norm(r.state) << ", " << r.step_seconds << " s\n";
            }
        return 0;
      }
      write_outputs(run_study(cfg, ctx), out, stem);
      return 0;
    }
    if (tables->parsed()) {
      if (table_opts.paper_scale) {
        std::cerr << "warning: --paper-scale builds N_ref = 64 four-dimensional references; expect hours and "
                     "more than 4 GB of memory\n";
      }
      RunContext ctx = context(table_opts);
      for (const auto& name : table_list) {
        ExperimentConfig cfg = table_config(name, table_opts.paper_scale);
        apply_overrides(cfg, table_opts);
        write_outputs(run_study(cfg, ctx), fs::path(table_opts.out), name);
      }
      return 0;
    }
    if (bench->parsed()) {
      RunContext ctx = context(bench_opts);
      const Problem& p = find_problem(bench_problem);
      BenchPlan plan;
      plan.pm_N = bench_opts.N.empty() ? std::vector<int>{32, 64, 128, 256} : bench_opts.N;
      plan.qsm_N = qsm_N;
      if (!bench_opts.tau.empty()) plan.tau = bench_opts.tau.front();
      plan.pm_steps = pm_steps;
      plan.qsm_steps = qsm_steps;
      if (bench_estimate) plan.planner = qpse::torus::PlannerRigor::Estimate;
      if (!bench_opts.method.empty()) {
        auto ms = parse_methods(bench_opts.method);
        if (std::find(ms.begin(), ms.end(), Method::PM) == ms.end()) plan.pm_N.clear();
        if (std::find(ms.begin(), ms.end(), Method::QSM) == ms.end()) plan.qsm_N.clear();
      }
      BenchReport r = run_complexity_bench(p, plan, ctx);
      fs::create_directories(bench_opts.out);
      std::ofstream f(fs::path(bench_opts.out) / "bench.csv");
      write_bench_csv(f, r);
      write_bench_csv(std::cout, r);
      return 0;
    }
    if (dens->parsed()) {
      Problem p = find_problem(dens_problem);
      if (dens_opts.T > 0.0) p.T = dens_opts.T;
      SpectralState u = solve(p, dens_opts, dens_state);
      if (dens_box.size() != 2 * dens_res.size()) throw ConfigError("--box needs lo,hi for every --resolution axis");
      std::vector<std::pair<double, double>> box;
      for (std::size_t a = 0; a < dens_res.size(); ++a) box.emplace_back(dens_box[2 * a], dens_box[2 * a + 1]);
      fs::create_directories(dens_opts.out);
      std::ofstream f(fs::path(dens_opts.out) / dens_file);
      export_density(f, u, box, dens_res, dens_eps);
      std::cout << "wrote " << (fs::path(dens_opts.out) / dens_file).string() << "\n";
      return 0;
    }
    if (diff->parsed()) {
      Problem p = find_problem(diff_problem);
      if (diff_opts.T > 0.0) p.T = diff_opts.T;
      SpectralState u = solve(p, diff_opts, diff_state);
      auto records = export_diffraction(u, threshold);
      fs::create_directories(diff_opts.out);
      std::ofstream f(fs::path(diff_opts.out) / diff_file);
      write_diffraction(f, records);
      std::cout << records.size() << " exponents above " << threshold << ", wrote "
                << (fs::path(diff_opts.out) / diff_file).string() << "\n";
      if (symmetry > 0) {
        auto pool = export_diffraction(u, 0.0);
        SymmetryOptions o{&pool, &p.rotation, u.bounding_halfwidth()};
        if (symmetry != p.symmetry_order) o.rotation = nullptr;
        auto v = check_rotational_symmetry(records, symmetry, 1e-9, 1e-6, o);
        std::cout << "order " << symmetry << ": " << (v.symmetric ? "symmetric" : "not symmetric") << ", checked "
                  << v.checked << ", missing " << v.missing << ", unresolved " << v.unresolved
                  << ", worst relative magnitude gap " << v.worst_relative << "\n";
        if (!v.detail.empty()) std::cout << "  " << v.detail << "\n";
      }
      return 0;
    }
  } catch (const qpse::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
