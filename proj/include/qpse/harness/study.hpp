#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qpse/harness/config.hpp"
#include "qpse/trajectory.hpp"

namespace qpse::harness {

using Logger = std::function<void(const std::string&)>;

struct RunContext {
  /// Reference checkpoints live here as ref-<hash>.qps; empty disables caching.
  std::filesystem::path cache_dir;
  /// Independent cells run on this many threads.
  int threads = 1;
  Logger log;
};

struct SolverSettings {
  int taylor_order = 5;
  torus::EmbedMode embedding = torus::EmbedMode::Alias;
};

/// pm_propagate or qsm_propagate with the problem's kinetic coefficient.
PropagationResult propagate(const Problem& problem, Method method, int N, double tau, std::size_t M,
                            const SolverSettings& settings = {}, std::size_t checkpoint_every = 0);

struct Reference {
  SpectralState state;
  std::string key;
  bool from_cache = false;
  double seconds = 0.0;
};

/// Cache key of a generated reference (hash of problem fingerprint, method,
/// N_ref, tau_ref, Taylor order and embedding).
std::string reference_key(const Problem& problem, const ReferenceSpec& spec, const SolverSettings& settings);

/// Loads spec.path, or the cached checkpoint for reference_key, or computes
/// and caches the reference.
Reference obtain_reference(const Problem& problem, const ReferenceSpec& spec, const SolverSettings& settings,
                           const RunContext& ctx);

struct ErrorRow {
  Method method = Method::PM;
  int N = 0;
  double tau = 0.0;
  double err = 0.0;
  std::optional<double> ord;
  double wall_seconds = 0.0;
  double setup_seconds = 0.0;
};

struct ErrorReport {
  std::string study;
  std::string problem;
  std::string reference_key;
  std::vector<ErrorRow> rows;

  /// First row matching (method, N, tau), if any.
  const ErrorRow* find(Method method, int N, double tau) const;
};

/// Errors below this are treated as roundoff and get no order.
inline constexpr double kOrderNoiseFloor = 1e-12;

/// One row per (method, N) at the single tau of the config.
ErrorReport run_spatial_study(const ExperimentConfig& cfg, const RunContext& ctx);
/// One row per (method, tau) at the single N; Ord between consecutive steps.
ErrorReport run_temporal_study(const ExperimentConfig& cfg, const RunContext& ctx);

/// Fills Ord for rows that follow a row with the same method and N and a
/// different tau, unless either error is below kOrderNoiseFloor.
void fill_orders(ErrorReport& report);

/// Header plus one row per record, numbers with 17 significant digits.
void write_report_csv(std::ostream& out, const ErrorReport& report);
/// Compact table: errors to 4 significant figures, Ord to 2 decimals.
void write_report_summary(std::ostream& out, const ErrorReport& report);

struct BenchRow {
  Method method = Method::PM;
  int N = 0;
  std::size_t D = 0;
  std::size_t steps = 0;
  /// Plan construction; for QSM the matrix assembly plus Taylor exponential.
  double build_seconds = 0.0;
  double step_seconds = 0.0;
  double per_step_seconds() const { return step_seconds / static_cast<double>(steps); }
  /// (build + steps) / steps.
  double per_step_with_build() const { return (build_seconds + step_seconds) / static_cast<double>(steps); }
};

struct BenchReport {
  std::string problem;
  std::vector<BenchRow> rows;
  /// Least-squares log-log slope against D of per-step time (PM) and of build
  /// plus one step (QSM).
  std::optional<double> pm_slope;
  std::optional<double> qsm_slope;
};

struct BenchPlan {
  std::vector<int> pm_N;
  std::vector<int> qsm_N;
  double tau = 1e-6;
  std::size_t pm_steps = 200;
  std::size_t qsm_steps = 10;
  /// Timings are the minimum over this many repetitions.
  int repeats = 3;
  /// PM timing only; error studies always use Estimate plans.
  torus::PlannerRigor planner = torus::PlannerRigor::Measure;
};

BenchReport run_complexity_bench(const Problem& problem, const BenchPlan& plan, const RunContext& ctx);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

void write_bench_csv(std::ostream& out, const BenchReport& report);

}  // namespace qpse::harness
