#include "qpse/qsm/qsm.hpp"

#include <chrono>
#include <cmath>

#include "qpse/errors.hpp"

namespace qpse::qsm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

PotentialMatrix build_potential_matrix(const PotentialSpec& V, const LatticeIndexSet& K) {
  if (V.n() != K.n()) throw DimensionError("potential and index set differ in lattice dimension");
  const std::size_t D = K.size();
  const std::size_t n = K.n();
  PotentialMatrix out{K, Matrix::Zero(static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(D))};
  const SpectralState& modes = V.modes();
  if (modes.empty()) return out;

  std::vector<int> all(D * n);
  for (std::size_t p = 0; p < D; ++p) K.index(p, std::span<int>(all.data() + p * n, n));

  // Differences k_j - k_l can only hit a mode when they lie in the modes'
  // bounding box, which keeps most lookups to a cheap range test.
  const int reach = modes.bounding_halfwidth();
  std::vector<int> diff(n);
  for (std::size_t l = 0; l < D; ++l) {
    const int* kl = all.data() + l * n;
    for (std::size_t j = 0; j < D; ++j) {
      const int* kj = all.data() + j * n;
      bool in_range = true;
      for (std::size_t a = 0; a < n; ++a) {
        diff[a] = kj[a] - kl[a];
        if (diff[a] < -reach || diff[a] >= reach) {
          in_range = false;
          break;
        }
      }
      if (!in_range) continue;
      out.entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) = modes.coefficient(diff);
    }
  }
  return out;
}

Matrix taylor_exp(const Matrix& A, double tau, int order) {
  if (order < 0) throw InvalidArgument("Taylor order must be non-negative");
  if (A.rows() != A.cols()) throw DimensionError("taylor_exp needs a square matrix");
  const Eigen::Index D = A.rows();
  Matrix result = Matrix::Identity(D, D);
  if (order == 0) return result;
  const Matrix X = Complex(0.0, -tau) * A;
  // Innermost term I + X/order needs no product.
  result = X / static_cast<double>(order);
  result.diagonal().array() += 1.0;
  Matrix tmp(D, D);
  for (int j = order - 1; j >= 1; --j) {
    tmp.noalias() = X * result;
    result = tmp / static_cast<double>(j);
    result.diagonal().array() += 1.0;
  }
  return result;
}

QsmPropagator::QsmPropagator(const PotentialSpec& V, int N, double tau, const QsmOptions& options)
    : box_(V.n(), N), projection_(V.projection()), tau_(tau), order_(options.taylor_order) {
  if (!std::isfinite(tau)) throw InvalidArgument("time step must be finite");
  const std::size_t D = box_.size();
  kinetic_.resize(static_cast<Eigen::Index>(D));
  std::vector<int> k(box_.n());
  const double half = 0.5 * tau * options.kinetic_coefficient;
  for (std::size_t p = 0; p < D; ++p) {
    box_.index(p, k);
    kinetic_(static_cast<Eigen::Index>(p)) = std::polar(1.0, -half * projection_->wavevector_norm2(k));
  }
  auto t0 = Clock::now();
  potential_ = build_potential_matrix(V, box_).entries;
  build_seconds_ = seconds_since(t0);
  t0 = Clock::now();
  expV_ = taylor_exp(potential_, tau, order_);
  exp_seconds_ = seconds_since(t0);
}

double QsmPropagator::potential_operator_norm() const {
  if (potential_.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(potential_);
  return svd.singularValues()(0);
}

void qsm_step(Vector& c, Vector& work, const QsmPropagator& prop) {
  if (c.size() != prop.kinetic_phases().size()) throw DimensionError("coefficient vector has the wrong length");
  const auto& kin = prop.kinetic_phases();
  c.array() *= kin.array();
  work.noalias() = prop.expV() * c;
  c.array() = work.array() * kin.array();
}

Vector qsm_step(const Vector& c, const QsmPropagator& prop) {
  Vector out = c;
  Vector work(c.size());
  qsm_step(out, work, prop);
  return out;
}

Vector to_vector(const LatticeTable& table) {
  Vector v(static_cast<Eigen::Index>(table.size()));
  for (std::size_t p = 0; p < table.size(); ++p) v(static_cast<Eigen::Index>(p)) = table[p];
  return v;
}

LatticeTable to_table(const Vector& v, const LatticeIndexSet& box) {
  if (static_cast<std::size_t>(v.size()) != box.size()) throw DimensionError("vector length does not match box");
  LatticeTable t(box);
  for (std::size_t p = 0; p < box.size(); ++p) t[p] = v(static_cast<Eigen::Index>(p));
  return t;
}

PropagationResult qsm_propagate_vector(Vector c, const QsmPropagator& prop, std::size_t M,
                                       std::size_t checkpoint_every, const StepObserver& observer) {
  if (M < 1) throw InvalidArgument("step count M must be at least 1");
  if (checkpoint_every < 1) checkpoint_every = 1;
  Trajectory traj;
  traj.method = MethodTag::QSM;
  traj.records.push_back({0, 0.0, c.norm(), 0.0});
  Vector work(c.size());
  const auto start = Clock::now();
  for (std::size_t m = 1; m <= M; ++m) {
    qsm_step(c, work, prop);
    if (m % checkpoint_every == 0 || m == M) {
      traj.records.push_back({m, static_cast<double>(m) * prop.tau(), c.norm(), seconds_since(start)});
      if (observer) observer(m, c);
    }
  }
  const double elapsed = seconds_since(start);
  LatticeTable table = to_table(c, prop.box());
  SpectralState state = SpectralState::from_table(prop.projection(), table);
  return PropagationResult{std::move(state), std::move(table), std::move(traj), 0.0, elapsed};
}

PropagationResult qsm_propagate(const SpectralState& u0, const PotentialSpec& V, int N, double tau, std::size_t M,
                                std::size_t checkpoint_every, const QsmOptions& options,
                                const StepObserver& observer) {
  if (!same_projection(u0.projection(), V.projection())) {
    throw ProjectionMismatch("initial state and potential use different projection matrices");
  }
  if (M < 1) throw InvalidArgument("step count M must be at least 1");
  const auto setup_start = Clock::now();
  QsmPropagator prop(V, N, tau, options);
  Vector c = to_vector(torus::embed_state(u0, N, options.state_embedding));
  const double setup = seconds_since(setup_start);
  PropagationResult r = qsm_propagate_vector(std::move(c), prop, M, checkpoint_every, observer);
  r.setup_seconds = setup;
  return r;
}

}  // namespace qpse::qsm
