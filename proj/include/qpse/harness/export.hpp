#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qpse/harness/problems.hpp"
#include "qpse/spectral_state.hpp"

namespace qpse::harness {

/// Samples |u(x)|^2 on the uniform grid of the box (endpoints included,
/// resolution[a] >= 2 points along axis a). Writes a '#' header with box and
/// resolution, a column header "x1,...,xd,density", then one row per point
/// with the last axis varying fastest. Modes with |c| <= eps_drop are skipped.
void export_density(std::ostream& out, const SpectralState& u, const std::vector<std::pair<double, double>>& box,
                    const std::vector<int>& resolution, double eps_drop = 0.0);

struct DiffractionRecord {
  std::vector<int> k;
  std::vector<double> lambda;
  double magnitude = 0.0;
  /// 1-based position in the descending order.
  std::size_t rank = 0;
};

/// Modes with |c| > threshold, sorted by magnitude descending (ties by index).
std::vector<DiffractionRecord> export_diffraction(const SpectralState& u, double threshold);

/// "rank,k1..kn,lambda1..lambdad,magnitude" rows, 17 significant digits.
void write_diffraction(std::ostream& out, const std::vector<DiffractionRecord>& records);

struct SymmetryOptions {
  /// Records searched for partners; the checked records themselves when null.
  /// Passing the unthresholded list avoids spurious misses at the threshold edge.
  const std::vector<DiffractionRecord>* pool = nullptr;
  /// With a lattice rotation and the box half-width, a partner whose rotated
  /// index leaves K_N^n is counted as unresolved instead of missing.
  const LatticeRotation* rotation = nullptr;
  int box_halfwidth = 0;
};

struct SymmetryVerdict {
  bool symmetric = false;
  std::size_t checked = 0;
  std::size_t missing = 0;
  std::size_t magnitude_failures = 0;
  std::size_t unresolved = 0;
  /// Largest | |c(R lambda)| - |c(lambda)| | / |c(lambda)| over matched records.
  double worst_relative = 0.0;
  std::string detail;
};

/// For every record, the exponent rotated by 2 pi / order must match a
/// record's exponent within tol (scaled by max(1, ||lambda||)) and that
/// record's magnitude within tol_rel relative. Needs d = 2, or d = 1 with
/// order 2 (lambda -> -lambda).
SymmetryVerdict check_rotational_symmetry(const std::vector<DiffractionRecord>& records, int order, double tol,
                                          double tol_rel, const SymmetryOptions& options = {});

}  // namespace qpse::harness
