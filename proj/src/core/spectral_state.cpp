#include "qpse/spectral_state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qpse/errors.hpp"

namespace qpse {

namespace {

bool index_less(const int* a, const int* b, std::size_t n) {
  return std::lexicographical_compare(a, a + n, b, b + n);
}

bool index_equal(const int* a, const int* b, std::size_t n) { return std::equal(a, a + n, b); }

void check_finite(Complex v) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw InvalidArgument("spectral state coefficients must be finite");
  }
}

}  // namespace

SpectralState::SpectralState(ProjectionPtr projection)
    : projection_(std::move(projection)), n_(projection_ ? projection_->n() : 0) {
  if (!projection_) throw InvalidArgument("spectral state needs a projection matrix");
}

SpectralState::SpectralState(ProjectionPtr projection, std::size_t n, std::vector<int> indices,
                             std::vector<Complex> values)
    : projection_(std::move(projection)), n_(n), indices_(std::move(indices)), values_(std::move(values)) {}

SpectralState SpectralState::from_modes(ProjectionPtr projection, std::vector<Mode> modes) {
  SpectralStateBuilder builder(std::move(projection));
  builder.reserve(modes.size());
  for (const auto& m : modes) builder.add(m.k, m.value);
  return std::move(builder).build();
}

SpectralState SpectralState::from_table(ProjectionPtr projection, const LatticeTable& table, double eps_drop,
                                        bool keep_zeros) {
  if (!projection) throw InvalidArgument("spectral state needs a projection matrix");
  const auto& box = table.box();
  if (box.n() != projection->n()) throw DimensionError("table dimension does not match projection");
  const std::size_t n = box.n();
  std::vector<int> indices;
  std::vector<Complex> values;
  const bool keep_all = keep_zeros && eps_drop <= 0.0;
  // Lexicographic table order is already the sorted order of the state.
  std::vector<int> k(n);
  for (std::size_t p = 0; p < table.size(); ++p) {
    const Complex v = table[p];
    check_finite(v);
    if (!keep_all && !(std::abs(v) > eps_drop)) continue;
    box.index(p, k);
    indices.insert(indices.end(), k.begin(), k.end());
    values.push_back(v);
  }
  return SpectralState(std::move(projection), n, std::move(indices), std::move(values));
}

Complex SpectralState::coefficient(std::span<const int> k) const {
  const std::size_t pos = find(k);
  return pos == size() ? Complex(0.0, 0.0) : values_[pos];
}

std::size_t SpectralState::find(std::span<const int> k) const {
  if (k.size() != n_) throw DimensionError("index length does not match n");
  std::size_t lo = 0;
  std::size_t hi = size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (index_less(indices_.data() + mid * n_, k.data(), n_)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < size() && index_equal(indices_.data() + lo * n_, k.data(), n_)) return lo;
  return size();
}

int SpectralState::bounding_halfwidth() const {
  int N = 0;
  for (int v : indices_) N = std::max({N, -v, v + 1});
  return N;
}

void SpectralState::require_compatible(const SpectralState& other) const {
  if (n_ != other.n_ || !same_projection(projection_, other.projection_)) {
    throw ProjectionMismatch("states refer to different projection matrices");
  }
}

SpectralStateBuilder::SpectralStateBuilder(ProjectionPtr projection)
    : projection_(std::move(projection)), n_(projection_ ? projection_->n() : 0) {
  if (!projection_) throw InvalidArgument("spectral state needs a projection matrix");
}

void SpectralStateBuilder::reserve(std::size_t count) {
  indices_.reserve(count * n_);
  values_.reserve(count);
}

void SpectralStateBuilder::add(std::span<const int> k, Complex value) {
  if (k.size() != n_) throw DimensionError("mode index length does not match n");
  check_finite(value);
  indices_.insert(indices_.end(), k.begin(), k.end());
  values_.push_back(value);
}

SpectralState SpectralStateBuilder::build() && {
  const std::size_t count = values_.size();
  const std::size_t n = n_;
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const int* base = indices_.data();
  std::stable_sort(order.begin(), order.end(), [base, n](std::size_t a, std::size_t b) {
    return index_less(base + a * n, base + b * n, n);
  });
  std::vector<int> indices;
  std::vector<Complex> values;
  indices.reserve(indices_.size());
  values.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const int* k = base + order[i] * n;
    if (!values.empty() && index_equal(indices.data() + (values.size() - 1) * n, k, n)) {
      values.back() += values_[order[i]];
    } else {
      indices.insert(indices.end(), k, k + n);
      values.push_back(values_[order[i]]);
    }
  }
  return SpectralState(std::move(projection_), n, std::move(indices), std::move(values));
}

Complex evaluate(const SpectralState& u, std::span<const double> x) {
  const auto& p = *u.projection();
  if (x.size() != p.d()) throw DimensionError("evaluate: point dimension does not match d");
  // phase_j = p_j . x per lattice direction, so (P k).x = sum_j k_j phase_j.
  std::vector<double> phase(p.n(), 0.0);
  for (std::size_t j = 0; j < p.n(); ++j)
    for (std::size_t r = 0; r < p.d(); ++r) phase[j] += p(r, j) * x[r];
  Complex total(0.0, 0.0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto k = u.index(i);
    double arg = 0.0;
    for (std::size_t j = 0; j < p.n(); ++j) arg += k[j] * phase[j];
    total += u.value(i) * Complex(std::cos(arg), std::sin(arg));
  }
  return total;
}

SpectralState state_axpy(Complex a, const SpectralState& u, const SpectralState& v) {
  u.require_compatible(v);
  const std::size_t n = u.n();
  SpectralStateBuilder builder(u.projection());
  builder.reserve(u.size() + v.size());
  // Merge of two sorted supports.
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < u.size() || j < v.size()) {
    if (j == v.size() || (i < u.size() && index_less(u.index(i).data(), v.index(j).data(), n))) {
      builder.add(u.index(i), a * u.value(i));
      ++i;
    } else if (i == u.size() || index_less(v.index(j).data(), u.index(i).data(), n)) {
      builder.add(v.index(j), v.value(j));
      ++j;
    } else {
      builder.add(u.index(i), a * u.value(i) + v.value(j));
      ++i;
      ++j;
    }
  }
  return std::move(builder).build();
}

SpectralState scaled(const SpectralState& u, Complex a) {
  SpectralState zero(u.projection());
  return state_axpy(a, u, zero);
}

}  // namespace qpse
