#include "qpse/projection.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "qpse/errors.hpp"

namespace qpse {

ProjectionMatrix::ProjectionMatrix(std::size_t d, std::size_t n, std::vector<double> row_major)
    : d_(d), n_(n), entries_(std::move(row_major)) {
  if (d_ < 1 || n_ < d_) {
    throw DimensionError("projection matrix needs d >= 1 and n >= d");
  }
  if (entries_.size() != d_ * n_) {
    throw DimensionError("projection matrix: expected " + std::to_string(d_ * n_) + " entries, got " +
                         std::to_string(entries_.size()));
  }
  for (double v : entries_) {
    if (!std::isfinite(v)) throw InvalidArgument("projection matrix entries must be finite");
  }
}

std::vector<double> ProjectionMatrix::wavevector(std::span<const int> k) const {
  if (k.size() != n_) throw DimensionError("wavevector: index length does not match n");
  std::vector<double> lambda(d_, 0.0);
  for (std::size_t r = 0; r < d_; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < n_; ++c) acc += entries_[r * n_ + c] * k[c];
    lambda[r] = acc;
  }
  return lambda;
}

double ProjectionMatrix::wavevector_norm2(std::span<const int> k) const {
  if (k.size() != n_) throw DimensionError("wavevector: index length does not match n");
  double total = 0.0;
  for (std::size_t r = 0; r < d_; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < n_; ++c) acc += entries_[r * n_ + c] * k[c];
    total += acc * acc;
  }
  return total;
}

bool same_projection(const ProjectionPtr& a, const ProjectionPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

namespace {

constexpr double kEnumerationBudget = 5e7;

bool advance(std::vector<int>& c, int bound) {
  for (std::size_t pos = c.size(); pos-- > 0;) {
    if (c[pos] < bound) {
      ++c[pos];
      return true;
    }
    c[pos] = -bound;
  }
  return false;
}

int effective_bound(std::size_t n, int requested) {
  int bound = requested;
  while (bound > 1 && std::pow(2.0 * bound + 1.0, static_cast<double>(n)) > kEnumerationBudget) --bound;
  return bound;
}

}  // namespace

ProjectionVerdict validate_projection(const ProjectionMatrix& p, int c_check, double eps_rational) {
  if (c_check < 1) throw InvalidArgument("validate_projection: c_check must be >= 1");
  if (!(eps_rational > 0.0)) throw InvalidArgument("validate_projection: eps_rational must be > 0");

  const std::size_t d = p.d();
  const std::size_t n = p.n();

  ProjectionVerdict verdict;
  Eigen::MatrixXd m(d, n);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < n; ++c) m(r, c) = p(r, c);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  verdict.sigma_min = sv(sv.size() - 1);
  const double rank_tol = 1e-12 * std::max(1.0, sv(0));

  verdict.search_bound = effective_bound(n, c_check);
  const int bound = verdict.search_bound;

  // Odometer over [-bound, bound]^n. Only sign-normalized vectors (first
  // nonzero entry positive) are tested since ||P(-c)|| = ||P c||.
  std::vector<int> c(n, -bound);
  int best_l1 = std::numeric_limits<int>::max();
  while (true) {
    std::size_t first = 0;
    while (first < n && c[first] == 0) ++first;
    if (first < n && c[first] > 0) {
      double norm2 = 0.0;
      for (std::size_t r = 0; r < d; ++r) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += p(r, j) * c[j];
        norm2 += acc * acc;
      }
      const double norm = std::sqrt(norm2);
      if (norm < eps_rational) {
        int l1 = 0;
        for (int v : c) l1 += std::abs(v);
        if (l1 < best_l1) {
          best_l1 = l1;
          verdict.witness = c;
          verdict.witness_norm = norm;
        }
      }
    }
    if (!advance(c, bound)) break;
  }

  std::ostringstream why;
  if (verdict.witness) {
    why << "integer combination c = (";
    for (std::size_t j = 0; j < n; ++j) why << (j ? ", " : "") << (*verdict.witness)[j];
    why << ") gives ||P c|| = " << verdict.witness_norm << " < " << eps_rational;
  } else if (!(verdict.sigma_min > rank_tol)) {
    why << "P is rank deficient (sigma_min = " << verdict.sigma_min << ")";
  } else {
    why << "no integer relation with |c_j| <= " << bound << "; sigma_min = " << verdict.sigma_min;
  }
  verdict.reason = why.str();
  verdict.accepted = !verdict.witness && verdict.sigma_min > rank_tol;
  return verdict;
}

}  // namespace qpse
