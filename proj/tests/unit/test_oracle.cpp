#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qpse/errors.hpp"
#include "qpse/oracle/oracle.hpp"
#include "solver_fixtures.hpp"

using namespace qpse;
using namespace qpse::oracle;
using qpse::testing::sqrt3_potential;
using qpse::testing::sqrt3_projection;

namespace {

Matrix random_hermitian(Eigen::Index D, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  Matrix A(D, D);
  for (Eigen::Index i = 0; i < D; ++i)
    for (Eigen::Index j = 0; j < D; ++j) A(i, j) = Complex(d(rng), d(rng));
  return (A + A.adjoint()) / 2.0;
}

Vector random_vector(Eigen::Index D, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  Vector v(D);
  for (Eigen::Index i = 0; i < D; ++i) v(i) = Complex(d(rng), d(rng));
  return v;
}

}  // namespace

TEST(Hamiltonian, FreeIsDiagonalKinetic) {
  auto p = sqrt3_projection();
  LatticeIndexSet K(2, 2);
  auto H = build_hamiltonian(PotentialSpec(SpectralState(p), true), *p, K);
  for (Eigen::Index i = 0; i < 16; ++i)
    for (Eigen::Index j = 0; j < 16; ++j) {
      if (i == j) {
        EXPECT_DOUBLE_EQ(H.H(i, i).real(), p->wavevector_norm2(K.index(static_cast<std::size_t>(i))));
      } else {
        EXPECT_EQ(H.H(i, j), Complex(0.0));
      }
    }
}

TEST(Hamiltonian, PeriodicTwoByTwo) {
  // P = (1), N = 1: K = {-1, 0}, V = cos x = (e^{ix} + e^{-ix}) / 2.
  auto p = make_projection(1, 1, {1.0});
  PotentialSpec V(SpectralState::from_modes(p, {{{1}, 0.5}, {{-1}, 0.5}}), true);
  auto H = build_hamiltonian(V, *p, LatticeIndexSet(1, 1));
  Matrix expect(2, 2);
  expect << 1.0, 0.5, 0.5, 0.0;
  EXPECT_EQ((H.H - expect).cwiseAbs().maxCoeff(), 0.0);
  // Collocation folds both +1 and -1 onto the same off-diagonal slot.
  auto C = build_hamiltonian(V, *p, LatticeIndexSet(1, 1), Coupling::Collocation);
  expect << 1.0, 1.0, 1.0, 0.0;
  EXPECT_EQ((C.H - expect).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Hamiltonian, Sqrt3FourByFourKinetic) {
  const double s3 = std::sqrt(3.0);
  auto p = sqrt3_projection();
  auto H = build_hamiltonian(sqrt3_potential(p), *p, LatticeIndexSet(2, 1));
  const double expect[] = {(1 + s3) * (1 + s3), 1.0, 3.0, 0.0};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(H.H(i, i).real(), expect[i], 1e-14);
  EXPECT_EQ((H.H - H.H.adjoint()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(H.H(0, 1), Complex(1.0));
  EXPECT_EQ(H.H(0, 3), Complex(0.0));
}

TEST(MatrixExponential, AgreesWithEigendecomposition) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Matrix H = random_hermitian(12, seed);
    for (double t : {1e-3, 0.5, 7.0}) {
      ExpmInfo info;
      Matrix U = matrix_exponential(Complex(0, -t) * H, 1e-14, &info);
      Eigen::SelfAdjointEigenSolver<Matrix> es(H);
      Vector ph = (Complex(0, -t) * es.eigenvalues().cast<Complex>()).array().exp();
      Matrix ref = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
      EXPECT_LT((U - ref).cwiseAbs().maxCoeff(), 1e-12) << "t=" << t;
      EXPECT_LT(info.bound, 1e-14);
    }
  }
}

TEST(ExactPropagate, IdentityDiagonalUnitarityGroup) {
  auto p = sqrt3_projection();
  LatticeIndexSet K(2, 2);
  auto H = build_hamiltonian(sqrt3_potential(p), *p, K);
  Vector u = random_vector(16, 9);
  EXPECT_EQ((exact_propagate(u, H, 0.0) - u).cwiseAbs().maxCoeff(), 0.0);

  const double tol = 1e-14;
  Vector a = exact_propagate(u, H, 0.3, tol);
  EXPECT_NEAR(a.norm(), u.norm(), 10 * tol * u.norm() + 1e-13);
  Vector b = exact_propagate(exact_propagate(u, H, 0.1, tol), H, 0.2, tol);
  EXPECT_LT((a - b).norm(), 10 * tol * u.norm() + 1e-13);

  auto D = build_hamiltonian(PotentialSpec(SpectralState(p), true), *p, K);
  Vector f = exact_propagate(u, D, 0.7, tol);
  for (Eigen::Index i = 0; i < 16; ++i) {
    const Complex expect = u(i) * std::polar(1.0, -0.7 * D.H(i, i).real());
    EXPECT_NEAR(std::abs(f(i) - expect), 0.0, 1e-13);
  }
}

TEST(MatrixExponential, ReportsUnreachableTolerance) {
  Matrix A = Matrix::Identity(2, 2) * 1e3;
  EXPECT_THROW(matrix_exponential(A, 1e-14, nullptr, 40, 4), ConvergenceError);
  EXPECT_THROW(matrix_exponential(A, -1.0), InvalidArgument);
}
