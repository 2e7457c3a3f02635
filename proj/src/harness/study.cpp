#include "qpse/harness/study.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "qpse/checkpoint.hpp"
#include "qpse/errors.hpp"
#include "qpse/pm/pm.hpp"
#include "qpse/qsm/qsm.hpp"

namespace qpse::harness {

namespace {

using Clock = std::chrono::steady_clock;

void say(const RunContext& ctx, const std::string& msg) {
  if (ctx.log) ctx.log(msg);
}

std::string sci(double v, int digits) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(digits) << v;
  return s.str();
}

// Runs body(i) for i in [0, count) on up to `threads` workers. Results are
// written by index, so the outcome does not depend on scheduling.
template <class Body>
void parallel_for(std::size_t count, int threads, Body body) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

PropagationResult propagate(const Problem& problem, Method method, int N, double tau, std::size_t M,
                            const SolverSettings& settings, std::size_t checkpoint_every) {
  if (checkpoint_every == 0) checkpoint_every = M;
  if (method == Method::PM) {
    pm::PmOptions o;
    o.kinetic_coefficient = problem.kinetic_coefficient;
    o.state_embedding = settings.embedding;
    return pm::pm_propagate(problem.initial, problem.potential, N, tau, M, checkpoint_every, o);
  }
  qsm::QsmOptions o;
  o.kinetic_coefficient = problem.kinetic_coefficient;
  o.taylor_order = settings.taylor_order;
  o.state_embedding = settings.embedding;
  return qsm::qsm_propagate(problem.initial, problem.potential, N, tau, M, checkpoint_every, o);
}

std::string reference_key(const Problem& problem, const ReferenceSpec& spec, const SolverSettings& settings) {
  nlohmann::json j = {{"format", 1},
                      {"problem", problem_fingerprint(problem)},
                      {"method", to_string(spec.method)},
                      {"N", spec.N},
                      {"tau", sci(spec.tau, 16)},
                      {"taylor_order", spec.method == Method::QSM ? settings.taylor_order : 0},
                      {"embedding", static_cast<int>(settings.embedding)}};
  return fnv1a_hex(j.dump());
}

Reference obtain_reference(const Problem& problem, const ReferenceSpec& spec, const SolverSettings& settings,
                           const RunContext& ctx) {
  if (spec.path) {
    say(ctx, "loading reference " + spec.path->string());
    auto cp = read_checkpoint(*spec.path, problem.projection);
    return Reference{std::move(cp.state), spec.path->filename().string(), true, 0.0};
  }
  const std::string key = reference_key(problem, spec, settings);
  std::filesystem::path file;
  if (!ctx.cache_dir.empty()) {
    file = ctx.cache_dir / ("ref-" + key + ".qps");
    if (std::filesystem::exists(file)) {
      say(ctx, "reference cache hit " + file.string());
      auto cp = read_checkpoint(file, problem.projection);
      return Reference{std::move(cp.state), key, true, 0.0};
    }
  }
  const std::size_t M = step_count(problem.T, spec.tau);
  say(ctx, "building reference " + to_string(spec.method) + " N=" + std::to_string(spec.N) + " tau=" +
               sci(spec.tau, 3) + " (" + std::to_string(M) + " steps)");
  const auto start = Clock::now();
  PropagationResult r = propagate(problem, spec.method, spec.N, spec.tau, M, settings);
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (!file.empty()) {
    std::filesystem::create_directories(ctx.cache_dir);
    // Write then rename so an interrupted run never leaves a partial cache entry.
    auto tmp = file;
    tmp += ".tmp";
    write_checkpoint(tmp, r.state, spec.method == Method::PM ? MethodTag::PM : MethodTag::QSM);
    std::filesystem::rename(tmp, file);
    say(ctx, "reference stored " + file.string() + " (" + sci(seconds, 3) + " s)");
  }
  return Reference{std::move(r.state), key, false, seconds};
}

const ErrorRow* ErrorReport::find(Method method, int N, double tau) const {
  for (const auto& r : rows) {
    if (r.method == method && r.N == N && r.tau == tau) return &r;
  }
  return nullptr;
}

void fill_orders(ErrorReport& report) {
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    auto& row = report.rows[i];
    row.ord.reset();
    if (i == 0) continue;
    const auto& prev = report.rows[i - 1];
    if (prev.method != row.method || prev.N != row.N || prev.tau == row.tau) continue;
    if (prev.err < kOrderNoiseFloor || row.err < kOrderNoiseFloor) continue;
    row.ord = compute_order(prev.err, row.err, prev.tau, row.tau);
  }
}

namespace {

struct Cell {
  Method method;
  int N;
  double tau;
};

ErrorReport run_cells(const ExperimentConfig& cfg, const RunContext& ctx, const std::vector<Cell>& cells,
                      const std::string& study) {
  validate_config(cfg);
  const Problem problem = resolve_problem(cfg);
  const SolverSettings settings{cfg.taylor_order, cfg.embedding};
  // The reference is complete before any dependent cell starts.
  const Reference ref = obtain_reference(problem, cfg.reference, settings, ctx);

  ErrorReport report{study, problem.id, ref.key, std::vector<ErrorRow>(cells.size())};
  parallel_for(cells.size(), ctx.threads, [&](std::size_t i) {
    const Cell& c = cells[i];
    const std::size_t M = step_count(problem.T, c.tau);
    PropagationResult r = propagate(problem, c.method, c.N, c.tau, M, settings);
    ErrorRow row{c.method, c.N, c.tau, aligned_error(r.table, ref.state, cfg.alignment), std::nullopt,
                 r.setup_seconds + r.step_seconds, r.setup_seconds};
    report.rows[i] = row;
    say(ctx, to_string(c.method) + " N=" + std::to_string(c.N) + " tau=" + sci(c.tau, 3) + " Err=" + sci(row.err, 3));
  });
  fill_orders(report);
  return report;
}

}  // namespace

ErrorReport run_spatial_study(const ExperimentConfig& cfg, const RunContext& ctx) {
  std::vector<Cell> cells;
  if (cfg.tau.empty()) throw ConfigError("tau list is empty");
  for (Method m : cfg.methods)
    for (int N : cfg.N) cells.push_back({m, N, cfg.tau.front()});
  return run_cells(cfg, ctx, cells, "spatial");
}

ErrorReport run_temporal_study(const ExperimentConfig& cfg, const RunContext& ctx) {
  std::vector<Cell> cells;
  if (cfg.N.empty()) throw ConfigError("N list is empty");
  for (Method m : cfg.methods)
    for (double t : cfg.tau) cells.push_back({m, cfg.N.front(), t});
  return run_cells(cfg, ctx, cells, "temporal");
}

void write_report_csv(std::ostream& out, const ErrorReport& report) {
  out << "# study=" << report.study << " problem=" << report.problem << " reference=" << report.reference_key << "\n";
  out << "method,N,tau,err,ord,wall_seconds\n";
  for (const auto& r : report.rows) {
    out << to_string(r.method) << ',' << r.N << ',' << sci(r.tau, 16) << ',' << sci(r.err, 16) << ',';
    if (r.ord) out << sci(*r.ord, 16);
    out << ',' << sci(r.wall_seconds, 16) << '\n';
  }
}

void write_report_summary(std::ostream& out, const ErrorReport& report) {
  out << report.study << " study, " << report.problem << "\n";
  out << std::left << std::setw(8) << "method" << std::setw(6) << "N" << std::setw(12) << "tau" << std::setw(12)
      << "Err" << std::setw(8) << "Ord" << "wall(s)\n";
  for (const auto& r : report.rows) {
    std::ostringstream ord;
    if (r.ord) ord << std::fixed << std::setprecision(2) << *r.ord;
    else ord << "-";
    out << std::left << std::setw(8) << to_string(r.method) << std::setw(6) << r.N << std::setw(12) << sci(r.tau, 3)
        << std::setw(12) << sci(r.err, 3) << std::setw(8) << ord.str() << sci(r.wall_seconds, 3) << "\n";
  }
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope fit needs two or more points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

BenchReport run_complexity_bench(const Problem& problem, const BenchPlan& plan, const RunContext& ctx) {
  BenchReport report{problem.id, {}, std::nullopt, std::nullopt};
  const std::size_t n = problem.projection->n();
  // Timings run one at a time regardless of ctx.threads.
  for (int N : plan.pm_N) {
    BenchRow best{Method::PM, N, LatticeIndexSet(n, N).size(), plan.pm_steps,
                  std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    pm::PmOptions o;
    o.kinetic_coefficient = problem.kinetic_coefficient;
    o.state_embedding = torus::EmbedMode::Alias;
    o.planner = plan.planner;
    for (int rep = 0; rep < plan.repeats; ++rep) {
      auto t0 = Clock::now();
      pm::PmPlan p(problem.potential, N, plan.tau, o);
      const double build = std::chrono::duration<double>(Clock::now() - t0).count();
      auto table = torus::embed_state(problem.initial, N, torus::EmbedMode::Alias);
      auto r = pm::pm_propagate_table(std::move(table), p, plan.pm_steps, plan.pm_steps);
      best.build_seconds = std::min(best.build_seconds, build);
      best.step_seconds = std::min(best.step_seconds, r.step_seconds);
    }
    say(ctx, "bench pm N=" + std::to_string(N) + " per-step " + sci(best.per_step_seconds(), 3) + " s");
    report.rows.push_back(best);
  }
  for (int N : plan.qsm_N) {
    BenchRow best{Method::QSM, N, LatticeIndexSet(n, N).size(), plan.qsm_steps,
                  std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    qsm::QsmOptions o;
    o.kinetic_coefficient = problem.kinetic_coefficient;
    o.state_embedding = torus::EmbedMode::Alias;
    const int reps = best.D >= 2048 ? 1 : plan.repeats;
    for (int rep = 0; rep < reps; ++rep) {
      auto t0 = Clock::now();
      qsm::QsmPropagator prop(problem.potential, N, plan.tau, o);
      const double build = std::chrono::duration<double>(Clock::now() - t0).count();
      auto c = qsm::to_vector(torus::embed_state(problem.initial, N, torus::EmbedMode::Alias));
      auto r = qsm::qsm_propagate_vector(std::move(c), prop, plan.qsm_steps, plan.qsm_steps);
      best.build_seconds = std::min(best.build_seconds, build);
      best.step_seconds = std::min(best.step_seconds, r.step_seconds);
    }
    say(ctx, "bench qsm N=" + std::to_string(N) + " build " + sci(best.build_seconds, 3) + " s, per-step " +
                 sci(best.per_step_seconds(), 3) + " s");
    report.rows.push_back(best);
  }
  std::vector<double> pd, pt, qd, qt;
  for (const auto& r : report.rows) {
    if (r.method == Method::PM) {
      pd.push_back(static_cast<double>(r.D));
      pt.push_back(r.per_step_seconds());
    } else {
      qd.push_back(static_cast<double>(r.D));
      qt.push_back(r.build_seconds + r.per_step_seconds());
    }
  }
  if (pd.size() >= 2) report.pm_slope = loglog_slope(pd, pt);
  if (qd.size() >= 2) report.qsm_slope = loglog_slope(qd, qt);
  return report;
}

void write_bench_csv(std::ostream& out, const BenchReport& report) {
  out << "# bench problem=" << report.problem;
  if (report.pm_slope) out << " pm_slope=" << sci(*report.pm_slope, 6);
  if (report.qsm_slope) out << " qsm_slope=" << sci(*report.qsm_slope, 6);
  out << "\nmethod,N,D,steps,build_seconds,per_step_seconds,per_step_with_build_seconds\n";
  for (const auto& r : report.rows) {
    out << to_string(r.method) << ',' << r.N << ',' << r.D << ',' << r.steps << ',' << sci(r.build_seconds, 16) << ','
        << sci(r.per_step_seconds(), 16) << ',' << sci(r.per_step_with_build(), 16) << '\n';
  }
}

}  // namespace qpse::harness
