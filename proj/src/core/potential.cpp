#include "qpse/potential.hpp"

#include <cmath>

#include "qpse/errors.hpp"

namespace qpse {

bool is_hermitian_symmetric(const SpectralState& modes, double rel_tol) {
  std::vector<int> neg(modes.n());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const auto k = modes.index(i);
    for (std::size_t j = 0; j < k.size(); ++j) neg[j] = -k[j];
    const Complex partner = modes.coefficient(neg);
    const Complex expected = std::conj(modes.value(i));
    const double scale = std::max(std::abs(expected), 1e-300);
    if (std::abs(partner - expected) > rel_tol * scale) return false;
  }
  return true;
}

PotentialSpec::PotentialSpec(SpectralState modes, bool is_real) : modes_(std::move(modes)), is_real_(is_real) {
  if (is_real_ && !is_hermitian_symmetric(modes_)) {
    throw InvalidArgument("potential flagged real but its modes are not Hermitian-symmetric");
  }
}

PotentialSpec PotentialSpec::detect(SpectralState modes) {
  const bool real = is_hermitian_symmetric(modes);
  return PotentialSpec(std::move(modes), real);
}

}  // namespace qpse
