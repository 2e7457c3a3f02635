#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qpse {

/// The d x n matrix P whose columns p_1..p_n generate the Fourier exponents
/// lambda = P k of a quasiperiodic function. Entries are stored row-major.
class ProjectionMatrix {
 public:
  ProjectionMatrix(std::size_t d, std::size_t n, std::vector<double> row_major);

  std::size_t d() const noexcept { return d_; }
  std::size_t n() const noexcept { return n_; }
  double operator()(std::size_t row, std::size_t col) const { return entries_[row * n_ + col]; }
  const std::vector<double>& entries() const noexcept { return entries_; }

  /// lambda = P k. Throws DimensionError if k.size() != n.
  std::vector<double> wavevector(std::span<const int> k) const;
  /// ||P k||^2 without allocating.
  double wavevector_norm2(std::span<const int> k) const;

  bool operator==(const ProjectionMatrix& other) const = default;

 private:
  std::size_t d_;
  std::size_t n_;
  std::vector<double> entries_;
};

using ProjectionPtr = std::shared_ptr<const ProjectionMatrix>;

inline ProjectionPtr make_projection(std::size_t d, std::size_t n, std::vector<double> row_major) {
  return std::make_shared<const ProjectionMatrix>(d, n, std::move(row_major));
}

/// True when both pointers refer to the same matrix or to equal matrices.
bool same_projection(const ProjectionPtr& a, const ProjectionPtr& b);

struct ProjectionVerdict {
  bool accepted = false;
  double sigma_min = 0.0;
  /// Integer vector c with ||P c|| < eps, when one was found (sign-normalized,
  /// smallest 1-norm among the candidates).
  std::optional<std::vector<int>> witness;
  double witness_norm = 0.0;
  /// Coefficient bound actually searched; smaller than requested when
  /// (2 c_check + 1)^n would exceed the enumeration budget.
  int search_bound = 0;
  std::string reason;
};

/// Heuristic Q-linear independence check: brute-force search over nonzero
/// integer vectors with |c_j| <= c_check, plus a full-row-rank test.
ProjectionVerdict validate_projection(const ProjectionMatrix& p, int c_check = 20,
                                      double eps_rational = 1e-12);

}  // namespace qpse
