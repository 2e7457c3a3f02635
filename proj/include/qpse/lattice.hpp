#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qpse/aligned.hpp"

namespace qpse {

using Complex = std::complex<double>;

/// The box K_N^n = { k in Z^n : -N <= k_j < N } enumerated in lexicographic
/// order (k_1 varies slowest). Position p of k is sum_j (k_j + N) (2N)^(n-1-j).
class LatticeIndexSet {
 public:
  LatticeIndexSet(std::size_t n, int N);

  std::size_t n() const noexcept { return n_; }
  int N() const noexcept { return N_; }
  /// Points per axis, 2N.
  std::size_t extent() const noexcept { return 2 * static_cast<std::size_t>(N_); }
  /// D = (2N)^n.
  std::size_t size() const noexcept { return size_; }

  bool contains(std::span<const int> k) const;
  /// Lexicographic position of k; k must be contained.
  std::size_t position(std::span<const int> k) const;
  /// Writes the index at position p into k (k.size() == n).
  void index(std::size_t p, std::span<int> k) const;
  std::vector<int> index(std::size_t p) const;

  bool operator==(const LatticeIndexSet&) const = default;

 private:
  std::size_t n_;
  int N_;
  std::size_t size_;
};

/// Dense table of complex values over K_N^n, stored in LatticeIndexSet order.
/// The same layout is used for PM coefficient tables and QSM coefficient vectors.
class LatticeTable {
 public:
  explicit LatticeTable(LatticeIndexSet box);

  const LatticeIndexSet& box() const noexcept { return box_; }
  std::size_t size() const noexcept { return values_.size(); }

  Complex& operator[](std::size_t p) { return values_[p]; }
  const Complex& operator[](std::size_t p) const { return values_[p]; }
  /// Value at index k, or 0 when k lies outside the box.
  Complex at(std::span<const int> k) const;

  std::span<Complex> values() noexcept { return values_; }
  std::span<const Complex> values() const noexcept { return values_; }

 private:
  LatticeIndexSet box_;
  AlignedVector<Complex> values_;
};

}  // namespace qpse
