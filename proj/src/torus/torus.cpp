#include "qpse/torus/torus.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include "qpse/errors.hpp"

namespace qpse::torus {

namespace {

// FFTW's planner is not reentrant; execution on new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

int wrap(int k, int N) {
  const int L = 2 * N;
  int r = (k + N) % L;
  if (r < 0) r += L;
  return r - N;
}

}  // namespace

double TorusGrid::h() const noexcept { return std::numbers::pi / N; }

std::size_t TorusGrid::size() const noexcept {
  std::size_t s = 1;
  for (std::size_t i = 0; i < n; ++i) s *= extent();
  return s;
}

void TorusGrid::point(std::size_t q, std::span<double> y) const {
  const std::size_t L = extent();
  for (std::size_t a = n; a-- > 0;) {
    y[a] = static_cast<double>(q % L) * h();
    q /= L;
  }
}

TorusField::TorusField(TorusGrid grid) : grid_(grid), values_(grid.size()) {}

TorusTransform::TorusTransform(std::size_t n, int N, PlannerRigor rigor) : n_(n), N_(N) {
  if (n == 0 || N < 1) throw InvalidArgument("torus transform needs n >= 1 and N >= 1");
  size_ = LatticeIndexSet(n, N).size();
  std::vector<int> dims(n, 2 * N);
  AlignedVector<Complex> scratch(size_);
  const unsigned flags = rigor == PlannerRigor::Measure ? FFTW_MEASURE : FFTW_ESTIMATE;
  std::lock_guard lock(planner_mutex());
  forward_plan_ = fftw_plan_dft(static_cast<int>(n), dims.data(), as_fftw(scratch.data()),
                                as_fftw(scratch.data()), FFTW_FORWARD, flags);
  backward_plan_ = fftw_plan_dft(static_cast<int>(n), dims.data(), as_fftw(scratch.data()),
                                 as_fftw(scratch.data()), FFTW_BACKWARD, flags);
  if (!forward_plan_ || !backward_plan_) throw Error("FFTW planning failed");
}

TorusTransform::~TorusTransform() {
  std::lock_guard lock(planner_mutex());
  if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (backward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
}

void TorusTransform::check(std::span<Complex> data) const {
  if (data.size() != size_) {
    throw DimensionError("transform buffer has " + std::to_string(data.size()) + " entries, expected " +
                         std::to_string(size_));
  }
  if (reinterpret_cast<std::uintptr_t>(data.data()) % 64 != 0) {
    throw InvalidArgument("transform buffer is not 64-byte aligned");
  }
}

void TorusTransform::backward_raw(std::span<Complex> data) const {
  check(data);
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), as_fftw(data.data()), as_fftw(data.data()));
}

void TorusTransform::forward_raw(std::span<Complex> data) const {
  check(data);
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(data.data()), as_fftw(data.data()));
}

void TorusTransform::apply_checkerboard(std::span<Complex> data) const {
  // The last axis is contiguous, so the sign alternates along it and flips at
  // the start of every row when the parity of the leading indices changes.
  const std::size_t L = 2 * static_cast<std::size_t>(N_);
  const std::size_t rows = size_ / L;
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t parity = 0;
    for (std::size_t rest = r; rest > 0; rest /= L) parity += rest % L;
    Complex* row = data.data() + r * L;
    for (std::size_t j = (parity % 2 == 0) ? 1 : 0; j < L; j += 2) row[j] = -row[j];
  }
}

LatticeTable forward_dft(const TorusField& f, const TorusTransform& transform) {
  const TorusGrid& g = f.grid();
  if (g.n != transform.n() || g.N != transform.N()) throw DimensionError("field and transform differ in shape");
  LatticeTable out(LatticeIndexSet(g.n, g.N));
  auto v = out.values();
  std::copy(f.values().begin(), f.values().end(), v.begin());
  transform.apply_checkerboard(v);
  transform.forward_raw(v);
  const double scale = 1.0 / static_cast<double>(v.size());
  for (auto& c : v) c *= scale;
  return out;
}

LatticeTable forward_dft(const TorusField& f) {
  TorusTransform t(f.grid().n, f.grid().N);
  return forward_dft(f, t);
}

TorusField inverse_dft(const LatticeTable& coeffs, const TorusTransform& transform) {
  const LatticeIndexSet& box = coeffs.box();
  if (box.n() != transform.n() || box.N() != transform.N()) throw DimensionError("table and transform differ in shape");
  TorusField out(TorusGrid{box.n(), box.N()});
  auto v = out.values();
  std::copy(coeffs.values().begin(), coeffs.values().end(), v.begin());
  transform.backward_raw(v);
  transform.apply_checkerboard(v);
  return out;
}

TorusField inverse_dft(const LatticeTable& coeffs) {
  TorusTransform t(coeffs.box().n(), coeffs.box().N());
  return inverse_dft(coeffs, t);
}

Complex torus_inner_product(const TorusField& f, const TorusField& g) {
  if (!(f.grid() == g.grid())) throw DimensionError("inner product of fields on different grids");
  Complex total = 0.0;
  for (std::size_t q = 0; q < f.size(); ++q) total += f[q] * std::conj(g[q]);
  return total / static_cast<double>(f.size());
}

TorusField plane_wave(const TorusGrid& grid, std::span<const int> k) {
  if (k.size() != grid.n) throw DimensionError("plane wave index has wrong length");
  TorusField out(grid);
  std::vector<double> y(grid.n);
  for (std::size_t q = 0; q < out.size(); ++q) {
    grid.point(q, y);
    double phase = 0.0;
    for (std::size_t a = 0; a < grid.n; ++a) phase += k[a] * y[a];
    out[q] = std::polar(1.0, phase);
  }
  return out;
}

LatticeTable embed_state(const SpectralState& u, int N, EmbedMode mode) {
  LatticeIndexSet box(u.n(), N);
  LatticeTable table(box);
  std::vector<std::vector<int>> outside;
  std::vector<int> folded(u.n());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto k = u.index(i);
    if (box.contains(k)) {
      table[box.position(k)] += u.value(i);
      continue;
    }
    switch (mode) {
      case EmbedMode::Strict:
        if (outside.size() < 64) outside.emplace_back(k.begin(), k.end());
        break;
      case EmbedMode::Truncate:
        break;
      case EmbedMode::Alias:
        for (std::size_t a = 0; a < k.size(); ++a) folded[a] = wrap(k[a], N);
        table[box.position(folded)] += u.value(i);
        break;
    }
  }
  if (!outside.empty()) {
    throw TruncationError("state has modes outside K_" + std::to_string(N) + "^" + std::to_string(u.n()),
                          std::move(outside));
  }
  return table;
}

SpectralState extract_state(const LatticeTable& coeffs, ProjectionPtr projection, double eps_drop) {
  return SpectralState::from_table(std::move(projection), coeffs, eps_drop, eps_drop == 0.0);
}

LatticeTable fold_table(const LatticeTable& fine, int N) {
  const LatticeIndexSet& src = fine.box();
  if (N > src.N()) throw InvalidArgument("fold_table target is larger than the source box");
  LatticeIndexSet dst(src.n(), N);
  LatticeTable out(dst);
  std::vector<int> k(src.n());
  for (std::size_t p = 0; p < src.size(); ++p) {
    src.index(p, k);
    for (auto& v : k) v = wrap(v, N);
    out[dst.position(k)] += fine[p];
  }
  return out;
}

}  // namespace qpse::torus
