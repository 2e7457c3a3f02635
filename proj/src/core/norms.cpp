#include "qpse/norms.hpp"

#include <cmath>
#include <cstdlib>

namespace qpse {

double l2_norm(const SpectralState& u) {
  double total = 0.0;
  for (const Complex& c : u.values()) total += std::norm(c);
  return std::sqrt(total);
}

double sobolev_seminorm(const SpectralState& u, double alpha) {
  double total = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double k1 = 0.0;
    for (int v : u.index(i)) k1 += std::abs(v);
    // std::pow(0, 0) == 1, which is the convention wanted at k = 0.
    total += std::pow(k1, 2.0 * alpha) * std::norm(u.value(i));
  }
  return std::sqrt(total);
}

double x_alpha_norm(const SpectralState& u, double alpha) {
  double total = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double k2 = 0.0;
    for (int v : u.index(i)) k2 += static_cast<double>(v) * v;
    // ||k||^(4 alpha) = (||k||^2)^(2 alpha)
    total += (1.0 + std::pow(k2, 2.0 * alpha)) * std::norm(u.value(i));
  }
  return std::sqrt(total);
}

}  // namespace qpse
