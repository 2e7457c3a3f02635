#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "qpse/checkpoint.hpp"
#include "qpse/lattice.hpp"
#include "qpse/spectral_state.hpp"

namespace qpse {

struct TrajectoryRecord {
  std::size_t step = 0;
  double time = 0.0;
  double l2_norm = 0.0;
  /// Seconds since the first step started, excluding plan construction.
  double wall_seconds = 0.0;
};

struct Trajectory {
  MethodTag method = MethodTag::None;
  std::vector<TrajectoryRecord> records;
};

/// Trajectory sidecar: '#'-prefixed header line, then comma-separated
/// "step,time,l2_norm,wall_seconds" rows with 17 significant digits.
void write_trajectory(std::ostream& out, const Trajectory& trajectory);

struct PropagationResult {
  SpectralState state;
  LatticeTable table;
  Trajectory trajectory;
  /// Plan / propagator construction time.
  double setup_seconds = 0.0;
  /// Time spent in the stepping loop.
  double step_seconds = 0.0;
};

}  // namespace qpse
