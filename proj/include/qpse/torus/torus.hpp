#pragma once

#include <cstddef>
#include <memory>
#include <span>

#include "qpse/aligned.hpp"
#include "qpse/lattice.hpp"
#include "qpse/spectral_state.hpp"

namespace qpse::torus {

/// Uniform grid y_j = (j_1 h, ..., j_n h), 0 <= j_m < 2N, h = pi / N.
struct TorusGrid {
  std::size_t n = 1;
  int N = 1;

  double h() const noexcept;
  std::size_t extent() const noexcept { return 2 * static_cast<std::size_t>(N); }
  /// (2N)^n.
  std::size_t size() const noexcept;
  /// Writes y_j for the flat (lexicographic, row-major) grid position q.
  void point(std::size_t q, std::span<double> y) const;

  bool operator==(const TorusGrid&) const = default;
};

/// Samples of a parent function on a TorusGrid, lexicographic in j.
class TorusField {
 public:
  explicit TorusField(TorusGrid grid);

  const TorusGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  Complex& operator[](std::size_t q) { return values_[q]; }
  const Complex& operator[](std::size_t q) const { return values_[q]; }
  std::span<Complex> values() noexcept { return values_; }
  std::span<const Complex> values() const noexcept { return values_; }

 private:
  TorusGrid grid_;
  AlignedVector<Complex> values_;
};

enum class PlannerRigor {
  /// FFTW_ESTIMATE: the plan depends only on (n, N), so results are
  /// bit-reproducible across runs.
  Estimate,
  /// FFTW_MEASURE: times candidate plans. Faster for large power-of-two
  /// grids, but the chosen plan (and the last bits of the result) can vary
  /// between runs.
  Measure,
};

/// A pair of FFTW plans for one (n, N). Plans are immutable after
/// construction and executed on caller buffers, so one transform may be
/// shared by several threads. Buffers must be 64-byte aligned (AlignedVector).
class TorusTransform {
 public:
  TorusTransform(std::size_t n, int N, PlannerRigor rigor = PlannerRigor::Estimate);
  ~TorusTransform();
  TorusTransform(const TorusTransform&) = delete;
  TorusTransform& operator=(const TorusTransform&) = delete;

  std::size_t n() const noexcept { return n_; }
  int N() const noexcept { return N_; }
  std::size_t size() const noexcept { return size_; }

  /// Unnormalised exp(+2 pi i m.j / 2N) sum, in place.
  void backward_raw(std::span<Complex> data) const;
  /// Unnormalised exp(-2 pi i m.j / 2N) sum, in place.
  void forward_raw(std::span<Complex> data) const;

  /// Multiplies entry q by (-1)^(j_1 + ... + j_n). Converts between the
  /// k-ordered table layout (k_j = m_j - N) and FFT bin order.
  void apply_checkerboard(std::span<Complex> data) const;

 private:
  void check(std::span<Complex> data) const;

  std::size_t n_;
  int N_;
  std::size_t size_;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

/// U_k = (1/(2N)^n) sum_j f(y_j) exp(-i k.y_j) for every k in K_N^n.
LatticeTable forward_dft(const TorusField& f);
LatticeTable forward_dft(const TorusField& f, const TorusTransform& transform);

/// f(y_j) = sum_k U_k exp(i k.y_j).
TorusField inverse_dft(const LatticeTable& coeffs);
TorusField inverse_dft(const LatticeTable& coeffs, const TorusTransform& transform);

/// <f, g>_N = (1/(2N)^n) sum_j f(y_j) conj(g(y_j)).
Complex torus_inner_product(const TorusField& f, const TorusField& g);

/// Samples exp(i k.y_j) on the grid; k may lie outside K_N^n.
TorusField plane_wave(const TorusGrid& grid, std::span<const int> k);

enum class EmbedMode {
  /// Modes outside K_N^n raise TruncationError.
  Strict,
  /// Modes outside K_N^n are dropped.
  Truncate,
  /// Mode k is added to the slot k mod 2N (per axis), which is the discrete
  /// coefficient of the parent function sampled on the grid.
  Alias,
};

LatticeTable embed_state(const SpectralState& u, int N, EmbedMode mode = EmbedMode::Strict);

/// Keeps modes with |value| > eps_drop; eps_drop == 0 keeps every entry.
SpectralState extract_state(const LatticeTable& coeffs, ProjectionPtr projection, double eps_drop = 0.0);

/// Folds a table over K_M^n onto K_N^n (N <= M) by k -> k mod 2N.
LatticeTable fold_table(const LatticeTable& fine, int N);

}  // namespace qpse::torus
