#include "qpse/lattice.hpp"

#include <limits>

#include "qpse/errors.hpp"

namespace qpse {

LatticeIndexSet::LatticeIndexSet(std::size_t n, int N) : n_(n), N_(N), size_(1) {
  if (n_ < 1) throw DimensionError("lattice dimension must be >= 1");
  if (N_ < 1) throw InvalidArgument("lattice half-width N must be >= 1");
  const std::size_t extent = 2 * static_cast<std::size_t>(N_);
  for (std::size_t j = 0; j < n_; ++j) {
    if (size_ > std::numeric_limits<std::size_t>::max() / extent) {
      throw InvalidArgument("lattice box too large");
    }
    size_ *= extent;
  }
}

bool LatticeIndexSet::contains(std::span<const int> k) const {
  if (k.size() != n_) return false;
  for (int v : k) {
    if (v < -N_ || v >= N_) return false;
  }
  return true;
}

std::size_t LatticeIndexSet::position(std::span<const int> k) const {
  const std::size_t extent = this->extent();
  std::size_t p = 0;
  for (std::size_t j = 0; j < n_; ++j) p = p * extent + static_cast<std::size_t>(k[j] + N_);
  return p;
}

void LatticeIndexSet::index(std::size_t p, std::span<int> k) const {
  const std::size_t extent = this->extent();
  for (std::size_t j = n_; j-- > 0;) {
    k[j] = static_cast<int>(p % extent) - N_;
    p /= extent;
  }
}

std::vector<int> LatticeIndexSet::index(std::size_t p) const {
  std::vector<int> k(n_);
  index(p, k);
  return k;
}

LatticeTable::LatticeTable(LatticeIndexSet box) : box_(box), values_(box.size(), Complex(0.0, 0.0)) {}

Complex LatticeTable::at(std::span<const int> k) const {
  if (!box_.contains(k)) return {0.0, 0.0};
  return values_[box_.position(k)];
}

}  // namespace qpse
