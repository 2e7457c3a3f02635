#include "qpse/harness/metrics.hpp"

#include <cmath>

#include "qpse/errors.hpp"
#include "qpse/norms.hpp"
#include "qpse/torus/torus.hpp"

namespace qpse::harness {

double compute_error(const SpectralState& u_num, const SpectralState& u_ref) {
  u_num.require_compatible(u_ref);
  return l2_norm(state_axpy(-1.0, u_ref, u_num));
}

double aligned_error(const LatticeTable& coarse, const SpectralState& u_ref, ErrorAlignment alignment) {
  if (alignment == ErrorAlignment::Union) {
    return compute_error(torus::extract_state(coarse, u_ref.projection()), u_ref);
  }
  if (coarse.box().n() != u_ref.n()) throw DimensionError("table and reference differ in lattice dimension");
  const LatticeTable folded = torus::embed_state(u_ref, coarse.box().N(), torus::EmbedMode::Alias);
  double s = 0.0;
  for (std::size_t i = 0; i < coarse.size(); ++i) s += std::norm(coarse[i] - folded[i]);
  return std::sqrt(s);
}

double compute_order(double err_coarse, double err_fine, double tau_coarse, double tau_fine) {
  if (!(err_coarse > 0.0) || !(err_fine > 0.0) || !(tau_coarse > 0.0) || !(tau_fine > 0.0)) {
    throw InvalidArgument("compute_order needs positive errors and steps");
  }
  if (tau_coarse == tau_fine) throw InvalidArgument("compute_order needs two different steps");
  return std::log(err_coarse / err_fine) / std::log(tau_coarse / tau_fine);
}

}  // namespace qpse::harness
