#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qpse/potential.hpp"
#include "qpse/spectral_state.hpp"

namespace qpse::harness {

/// Integer map k -> k' with P k' = R P k for a rotation R acting on the
/// exponents; lets symmetry checks work on exact lattice indices.
using LatticeRotation = std::function<std::vector<int>(std::span<const int>)>;

struct Problem {
  Problem(std::string id_, std::string description_, ProjectionPtr projection_, PotentialSpec potential_,
          SpectralState initial_)
      : id(std::move(id_)),
        description(std::move(description_)),
        projection(std::move(projection_)),
        potential(std::move(potential_)),
        initial(std::move(initial_)) {}

  std::string id;
  std::string description;
  ProjectionPtr projection;
  PotentialSpec potential;
  SpectralState initial;
  /// c in i u_t = -c Delta u + V u. The catalog problems use 1/2, the value
  /// under which the table presets reproduce their target errors.
  double kinetic_coefficient = 0.5;
  double T = 1e-3;
  /// Rotational order of the diffraction pattern (0 when not applicable).
  int symmetry_order = 0;
  /// Rotation by 2 pi / symmetry_order expressed on lattice indices.
  LatticeRotation rotation;
};

/// "1d-sqrt3", "2d-octagonal", "2d-dodecagonal".
const std::vector<Problem>& builtin_problems();

/// Throws ConfigError for an unknown id.
const Problem& find_problem(const std::string& id);

}  // namespace qpse::harness
