#pragma once

#include "qpse/spectral_state.hpp"

namespace qpse {

/// L^2_QP norm through Parseval: sqrt(sum |c_k|^2).
double l2_norm(const SpectralState& u);

/// H^alpha semi-norm sqrt(sum |k|^(2 alpha) |c_k|^2) with |k| = sum_j |k_j|.
/// The k = 0 term uses 0^0 = 1, so alpha = 0 gives the L^2 norm.
double sobolev_seminorm(const SpectralState& u, double alpha);

/// X_alpha norm sqrt(sum (1 + ||k||^(4 alpha)) |c_k|^2) with the Euclidean ||k||.
double x_alpha_norm(const SpectralState& u, double alpha);

}  // namespace qpse
