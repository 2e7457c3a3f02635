#include "qpse/harness/export.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "qpse/errors.hpp"

namespace qpse::harness {

void export_density(std::ostream& out, const SpectralState& u, const std::vector<std::pair<double, double>>& box,
                    const std::vector<int>& resolution, double eps_drop) {
  const std::size_t d = u.projection()->d();
  if (box.size() != d || resolution.size() != d) throw DimensionError("density box and resolution need d entries");
  for (int r : resolution) {
    if (r < 2) throw InvalidArgument("density resolution must be at least 2 per axis");
  }
  const auto& P = *u.projection();

  // Keep the modes that matter and their exponents.
  std::vector<std::vector<double>> lam;
  std::vector<Complex> coef;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (std::abs(u.value(i)) <= eps_drop) continue;
    lam.push_back(P.wavevector(u.index(i)));
    coef.push_back(u.value(i));
  }

  const auto flags = out.flags();
  const auto precision = out.precision();
  out << "# box=";
  for (std::size_t a = 0; a < d; ++a) out << (a ? "x" : "") << '[' << box[a].first << ',' << box[a].second << ']';
  out << " resolution=";
  for (std::size_t a = 0; a < d; ++a) out << (a ? "x" : "") << resolution[a];
  out << "\n";
  for (std::size_t a = 0; a < d; ++a) out << 'x' << a + 1 << ',';
  out << "density\n";
  out << std::scientific << std::setprecision(16);

  std::size_t total = 1;
  for (int r : resolution) total *= static_cast<std::size_t>(r);
  std::vector<double> x(d);
  for (std::size_t q = 0; q < total; ++q) {
    std::size_t rest = q;
    for (std::size_t a = d; a-- > 0;) {
      const auto r = static_cast<std::size_t>(resolution[a]);
      const std::size_t i = rest % r;
      rest /= r;
      x[a] = box[a].first + (box[a].second - box[a].first) * static_cast<double>(i) / static_cast<double>(r - 1);
    }
    Complex s = 0.0;
    for (std::size_t m = 0; m < coef.size(); ++m) {
      double ph = 0.0;
      for (std::size_t a = 0; a < d; ++a) ph += lam[m][a] * x[a];
      s += coef[m] * std::polar(1.0, ph);
    }
    for (std::size_t a = 0; a < d; ++a) out << x[a] << ',';
    out << std::norm(s) << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

std::vector<DiffractionRecord> export_diffraction(const SpectralState& u, double threshold) {
  if (threshold < 0.0 || std::isnan(threshold)) throw InvalidArgument("diffraction threshold must be >= 0");
  std::vector<DiffractionRecord> out;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double m = std::abs(u.value(i));
    if (!(m > threshold)) continue;
    out.push_back({std::vector<int>(u.index(i).begin(), u.index(i).end()), u.projection()->wavevector(u.index(i)), m, 0});
  }
  // The state is sorted by index already, so a stable sort keeps ties in index order.
  std::stable_sort(out.begin(), out.end(),
                   [](const DiffractionRecord& a, const DiffractionRecord& b) { return a.magnitude > b.magnitude; });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = i + 1;
  return out;
}

void write_diffraction(std::ostream& out, const std::vector<DiffractionRecord>& records) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << "rank";
  if (!records.empty()) {
    for (std::size_t a = 0; a < records.front().k.size(); ++a) out << ",k" << a + 1;
    for (std::size_t a = 0; a < records.front().lambda.size(); ++a) out << ",lambda" << a + 1;
  }
  out << ",magnitude\n" << std::scientific << std::setprecision(16);
  for (const auto& r : records) {
    out << r.rank;
    for (int v : r.k) out << ',' << v;
    for (double v : r.lambda) out << ',' << v;
    out << ',' << r.magnitude << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

SymmetryVerdict check_rotational_symmetry(const std::vector<DiffractionRecord>& records, int order, double tol,
                                          double tol_rel, const SymmetryOptions& options) {
  if (order < 2) throw InvalidArgument("symmetry order must be at least 2");
  SymmetryVerdict v;
  if (records.empty()) {
    v.symmetric = true;
    return v;
  }
  const std::size_t d = records.front().lambda.size();
  if (d != 2 && !(d == 1 && order == 2)) throw DimensionError("rotational symmetry needs d = 2 (or d = 1, order 2)");

  const auto& pool = options.pool ? *options.pool : records;
  // Pool sorted by the first exponent component for range lookups.
  std::vector<std::size_t> by_x(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) by_x[i] = i;
  std::sort(by_x.begin(), by_x.end(), [&](std::size_t a, std::size_t b) { return pool[a].lambda[0] < pool[b].lambda[0]; });

  const double angle = 2.0 * std::numbers::pi / order;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  std::ostringstream detail;
  std::size_t reported = 0;

  for (const auto& r : records) {
    ++v.checked;
    std::vector<double> target(d);
    if (d == 1) {
      target[0] = -r.lambda[0];
    } else {
      target[0] = c * r.lambda[0] - s * r.lambda[1];
      target[1] = s * r.lambda[0] + c * r.lambda[1];
    }
    double norm = 0.0;
    for (double t : target) norm += t * t;
    const double eps = tol * std::max(1.0, std::sqrt(norm));

    const DiffractionRecord* match = nullptr;
    double best = eps;
    auto lo = std::lower_bound(by_x.begin(), by_x.end(), target[0] - eps,
                               [&](std::size_t i, double x) { return pool[i].lambda[0] < x; });
    for (auto it = lo; it != by_x.end() && pool[*it].lambda[0] <= target[0] + eps; ++it) {
      double dist = 0.0;
      for (std::size_t a = 0; a < d; ++a) dist = std::max(dist, std::abs(pool[*it].lambda[a] - target[a]));
      if (dist <= best) {
        best = dist;
        match = &pool[*it];
      }
    }

    if (!match) {
      bool outside = false;
      if (options.rotation && *options.rotation && options.box_halfwidth > 0) {
        const auto kr = (*options.rotation)(r.k);
        for (int x : kr) outside |= (x < -options.box_halfwidth || x >= options.box_halfwidth);
      }
      if (outside) {
        ++v.unresolved;
      } else {
        ++v.missing;
        if (reported++ < 5) detail << "no partner for rank " << r.rank << "; ";
      }
      continue;
    }
    const double rel = std::abs(match->magnitude - r.magnitude) / r.magnitude;
    v.worst_relative = std::max(v.worst_relative, rel);
    if (rel > tol_rel) {
      ++v.magnitude_failures;
      if (reported++ < 5) {
        detail << "rank " << r.rank << " magnitude " << std::setprecision(10) << r.magnitude << " vs partner "
               << match->magnitude << " (rel " << std::setprecision(3) << rel << "); ";
      }
    }
  }
  v.symmetric = v.missing == 0 && v.magnitude_failures == 0;
  v.detail = detail.str();
  return v;
}

}  // namespace qpse::harness
