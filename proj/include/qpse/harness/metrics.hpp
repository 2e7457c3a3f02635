#pragma once

#include "qpse/lattice.hpp"
#include "qpse/spectral_state.hpp"

namespace qpse::harness {

/// L2 distance over the union of supports; absent modes count as zero.
double compute_error(const SpectralState& u_num, const SpectralState& u_ref);

enum class ErrorAlignment {
  /// compute_error on extract_state(coarse) and the reference.
  Union,
  /// Distance between the coarse table and the reference folded onto the
  /// coarse box (k -> k mod 2N), i.e. both parent functions compared on the
  /// coarse torus grid.
  Aliased,
};

double aligned_error(const LatticeTable& coarse, const SpectralState& u_ref, ErrorAlignment alignment);

/// ln(err_coarse / err_fine) / ln(tau_coarse / tau_fine). InvalidArgument on
/// non-positive inputs or equal steps.
double compute_order(double err_coarse, double err_fine, double tau_coarse, double tau_fine);

}  // namespace qpse::harness
