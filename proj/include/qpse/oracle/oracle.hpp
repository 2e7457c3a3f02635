#pragma once

#include <Eigen/Dense>

#include "qpse/lattice.hpp"
#include "qpse/potential.hpp"

namespace qpse::oracle {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class Coupling {
  /// (j, l) entry V at k_j - k_l: Galerkin truncation onto K_N^n, the limit of QSM.
  Galerkin,
  /// (j, l) entry sum of V over indices congruent to k_j - k_l mod 2N: grid
  /// collocation of V on the torus, the limit of PM.
  Collocation,
};

/// H = c diag(||P k_j||^2) + coupling(V).
struct DenseHamiltonian {
  LatticeIndexSet box;
  Matrix H;
};

DenseHamiltonian build_hamiltonian(const PotentialSpec& V, const ProjectionMatrix& P, const LatticeIndexSet& K,
                                   Coupling coupling = Coupling::Galerkin, double kinetic_coefficient = 1.0);

struct ExpmInfo {
  int squarings = 0;
  int terms = 0;
  /// Bound on ||computed - exp(A)|| from the truncated series, before roundoff.
  double bound = 0.0;
};

/// exp(A) by scaling and squaring: A / 2^s has norm <= 1/2, the Taylor series
/// of the scaled matrix is cut once 2^s e^||A|| (remainder) < tol, and the
/// result is squared s times (e^||A|| drops out for skew-Hermitian A). ConvergenceError when max_terms / max_squarings
/// cannot meet tol.
Matrix matrix_exponential(const Matrix& A, double tol = 1e-14, ExpmInfo* info = nullptr, int max_terms = 40,
                          int max_squarings = 64);

/// exp(-i t H) u0.
Vector exact_propagate(const Vector& u0, const DenseHamiltonian& H, double t, double tol = 1e-14);

}  // namespace qpse::oracle
