#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qpse/harness/metrics.hpp"
#include "qpse/harness/problems.hpp"
#include "qpse/torus/torus.hpp"

namespace qpse::harness {

enum class Method { PM, QSM };

std::string to_string(Method m);
/// "pm" or "qsm"; ConfigError otherwise.
Method parse_method(const std::string& s);

struct ReferenceSpec {
  Method method = Method::PM;
  int N = 0;
  double tau = 0.0;
  /// Stored reference checkpoint; when set, method / N / tau are not used.
  std::optional<std::filesystem::path> path;
  /// Skip the N_ref >= max N and tau_ref <= min tau / 10 checks.
  bool allow_coarse = false;
};

struct DensityRequest {
  std::vector<std::pair<double, double>> box;
  std::vector<int> resolution;
};

struct DiffractionRequest {
  double threshold = 0.0;
};

enum class StudyKind { Spatial, Temporal, Single };

/// Mirrors the config file. Parsing rejects unknown keys.
struct ExperimentConfig {
  /// Builtin id, or "inline" when the problem is defined in the file.
  std::string problem = "1d-sqrt3";
  std::optional<Problem> inline_problem;
  StudyKind study = StudyKind::Spatial;
  std::vector<Method> methods{Method::PM};
  std::vector<int> N;
  std::vector<double> tau;
  std::optional<double> T;
  int taylor_order = 5;
  std::optional<double> kinetic_coefficient;
  ReferenceSpec reference;
  ErrorAlignment alignment = ErrorAlignment::Aliased;
  torus::EmbedMode embedding = torus::EmbedMode::Alias;
  std::optional<DensityRequest> density;
  std::optional<DiffractionRequest> diffraction;
  std::uint64_t seed = 0;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& cfg);

/// The problem with T and the kinetic coefficient overridden as configured.
Problem resolve_problem(const ExperimentConfig& cfg);

/// Number of steps M with M tau = T; ConfigError unless T / tau is an integer
/// (to 1e-9 relative).
std::size_t step_count(double T, double tau);

/// Checks T = M tau for every tau, non-empty lists, and the reference invariants.
void validate_config(const ExperimentConfig& cfg);

/// Hex FNV-1a 64 of a byte string.
std::string fnv1a_hex(const std::string& bytes);

/// Fingerprint of everything that defines a problem's numbers.
std::string problem_fingerprint(const Problem& p);

}  // namespace qpse::harness
