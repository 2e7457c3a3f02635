#pragma once

#include "qpse/spectral_state.hpp"

namespace qpse {

/// V(x) = sum_k V_k exp(i (P k).x) for finitely many k.
class PotentialSpec {
 public:
  /// When is_real is set the modes must satisfy V_{-k} = conj(V_k) (relative
  /// tolerance 1e-14); InvalidArgument otherwise.
  PotentialSpec(SpectralState modes, bool is_real);

  /// Flags the potential as real exactly when the modes are Hermitian-symmetric.
  static PotentialSpec detect(SpectralState modes);

  const SpectralState& modes() const noexcept { return modes_; }
  const ProjectionPtr& projection() const noexcept { return modes_.projection(); }
  std::size_t n() const noexcept { return modes_.n(); }
  bool is_real() const noexcept { return is_real_; }

 private:
  SpectralState modes_;
  bool is_real_;
};

/// True when coeff(-k) == conj(coeff(k)) for every k in the support.
bool is_hermitian_symmetric(const SpectralState& modes, double rel_tol = 1e-14);

}  // namespace qpse
