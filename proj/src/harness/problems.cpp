#include "qpse/harness/problems.hpp"

#include <cmath>
#include <numbers>

#include "qpse/errors.hpp"

namespace qpse::harness {

namespace {

constexpr double kPi = std::numbers::pi;

// Five unit modes and one mode with coefficient -1, columns k_1..k_6.
SpectralState six_mode_potential(const ProjectionPtr& p) {
  return SpectralState::from_modes(p, {{{0, 1, 0, 0}, 1.0},
                                       {{0, -1, 0, 0}, 1.0},
                                       {{1, 0, 0, 0}, 1.0},
                                       {{0, 0, 0, 1}, 1.0},
                                       {{0, 0, 1, 0}, 1.0},
                                       {{0, 0, -1, 0}, -1.0}});
}

template <class Weight>
SpectralState box_state(const ProjectionPtr& p, int lo, int hi, Weight weight) {
  const std::size_t n = p->n();
  SpectralStateBuilder b(p);
  std::vector<int> k(n, lo);
  for (;;) {
    b.add(k, weight(k));
    std::size_t a = n;
    while (a > 0 && ++k[a - 1] > hi) k[--a] = lo;
    if (a == 0) break;
  }
  return std::move(b).build();
}

double one_norm(std::span<const int> k) {
  double s = 0.0;
  for (int v : k) s += std::abs(v);
  return s;
}

Problem sqrt3_problem() {
  auto p = make_projection(1, 2, {1.0, std::sqrt(3.0)});
  PotentialSpec V(SpectralState::from_modes(p, {{{1, 0}, 1.0}, {{-1, 0}, 1.0}, {{0, 1}, 1.0}, {{0, -1}, 1.0}}), true);
  auto u0 = box_state(p, -32, 31, [](std::span<const int> k) { return Complex(std::exp(-one_norm(k))); });
  Problem pr("1d-sqrt3",
             "V = 2(cos x + cos sqrt3 x), P = (1, sqrt3), u0 = exp(-(|m1|+|m2|)) on [-32,31]^2",
             p,
             std::move(V),
             std::move(u0));
  pr.symmetry_order = 2;
  pr.rotation = [](std::span<const int> k) { return std::vector<int>{-k[0], -k[1]}; };
  return pr;
}

Problem octagonal_problem() {
  const double c = std::cos(kPi / 4);
  const double s = std::sin(kPi / 4);
  auto p = make_projection(2, 4, {1.0, c, 0.0, -c, 0.0, s, 1.0, s});
  PotentialSpec V = PotentialSpec::detect(six_mode_potential(p));
  auto u0 = box_state(p, -16, 15, [](std::span<const int> k) { return Complex(std::exp(-one_norm(k))); });
  Problem pr("2d-octagonal",
             "six-mode complex V on P1 (columns at 0, 45, 90, 135 degrees), u0 = exp(-|k|_1) on [-16,15]^4",
             p,
             std::move(V),
             std::move(u0));
  pr.symmetry_order = 8;
  // Rotating by 45 degrees sends p1 -> p2 -> p3 -> p4 -> -p1.
  pr.rotation = [](std::span<const int> k) { return std::vector<int>{-k[3], k[0], k[1], k[2]}; };
  return pr;
}

Problem dodecagonal_problem() {
  auto p = make_projection(2, 4,
                           {1.0, std::cos(kPi / 6), std::cos(kPi / 3), 0.0, 0.0, std::sin(kPi / 6), std::sin(kPi / 3), 1.0});
  PotentialSpec V = PotentialSpec::detect(six_mode_potential(p));
  auto u0 = box_state(p, -8, 7, [&](std::span<const int> k) { return Complex(std::exp(-p->wavevector_norm2(k))); });
  Problem pr("2d-dodecagonal",
             "six-mode complex V on P2 (columns at 0, 30, 60, 90 degrees), u0 = exp(-||P k||^2) on [-8,7]^4",
             p,
             std::move(V),
             std::move(u0));
  pr.symmetry_order = 12;
  // Rotating by 30 degrees sends p1 -> p2 -> p3 -> p4 and p4 -> p3 - p1.
  pr.rotation = [](std::span<const int> k) { return std::vector<int>{-k[3], k[0], k[1] + k[3], k[2]}; };
  return pr;
}

}  // namespace

const std::vector<Problem>& builtin_problems() {
  static const std::vector<Problem> catalog{sqrt3_problem(), octagonal_problem(), dodecagonal_problem()};
  return catalog;
}

const Problem& find_problem(const std::string& id) {
  for (const auto& p : builtin_problems()) {
    if (p.id == id) return p;
  }
  throw ConfigError("unknown problem '" + id + "'");
}

}  // namespace qpse::harness
