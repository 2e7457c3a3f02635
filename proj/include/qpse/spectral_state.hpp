#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qpse/lattice.hpp"
#include "qpse/projection.hpp"

namespace qpse {

/// A quasiperiodic function u(x) = sum_k c_k exp(i (P k) . x) with finite
/// support, keyed by parent-lattice index k. Modes are kept sorted
/// lexicographically and unique; coefficients are finite.
class SpectralState {
 public:
  struct Mode {
    std::vector<int> k;
    Complex value;
  };

  /// Empty state over the given projection.
  explicit SpectralState(ProjectionPtr projection);

  /// Builds a state from (k, value) pairs. Duplicate indices are summed.
  /// Throws DimensionError on a wrong index length and InvalidArgument on a
  /// non-finite value.
  static SpectralState from_modes(ProjectionPtr projection, std::vector<Mode> modes);

  /// Every entry of a dense table, including zeros when eps_drop == 0 and
  /// keep_zeros is set; otherwise only |value| > eps_drop.
  static SpectralState from_table(ProjectionPtr projection, const LatticeTable& table,
                                  double eps_drop = 0.0, bool keep_zeros = true);

  const ProjectionPtr& projection() const noexcept { return projection_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  std::span<const int> index(std::size_t i) const {
    return {indices_.data() + i * n_, n_};
  }
  const Complex& value(std::size_t i) const { return values_[i]; }
  std::span<const Complex> values() const noexcept { return values_; }

  /// Coefficient at k, or 0 when k is not in the support.
  Complex coefficient(std::span<const int> k) const;
  /// Position of k in the sorted support, or size() when absent.
  std::size_t find(std::span<const int> k) const;

  /// Smallest N with support contained in K_N^n (0 for an empty state).
  int bounding_halfwidth() const;

  /// Throws ProjectionMismatch unless both states use the same projection.
  void require_compatible(const SpectralState& other) const;

 private:
  SpectralState(ProjectionPtr projection, std::size_t n, std::vector<int> indices,
                std::vector<Complex> values);

  ProjectionPtr projection_;
  std::size_t n_;
  std::vector<int> indices_;
  std::vector<Complex> values_;

  friend class SpectralStateBuilder;
};

/// Appends modes in arbitrary order, then sorts and merges once.
class SpectralStateBuilder {
 public:
  explicit SpectralStateBuilder(ProjectionPtr projection);

  void add(std::span<const int> k, Complex value);
  void reserve(std::size_t count);
  SpectralState build() &&;

 private:
  ProjectionPtr projection_;
  std::size_t n_;
  std::vector<int> indices_;
  std::vector<Complex> values_;
};

/// u(x) = sum_k c_k exp(i (P k).x).
Complex evaluate(const SpectralState& u, std::span<const double> x);

/// Coefficient-wise a*u + v over the union of supports.
SpectralState state_axpy(Complex a, const SpectralState& u, const SpectralState& v);

/// The same state with every coefficient multiplied by a.
SpectralState scaled(const SpectralState& u, Complex a);

}  // namespace qpse
