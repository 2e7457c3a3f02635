#include "qpse/oracle/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qpse/errors.hpp"

namespace qpse::oracle {

namespace {

// Upper bound on the spectral norm, sqrt(||A||_1 ||A||_inf).
double norm_bound(const Matrix& A) {
  const double one = A.cwiseAbs().colwise().sum().maxCoeff();
  const double inf = A.cwiseAbs().rowwise().sum().maxCoeff();
  return std::sqrt(one * inf);
}

int mod(int a, int m) {
  int r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

DenseHamiltonian build_hamiltonian(const PotentialSpec& V, const ProjectionMatrix& P, const LatticeIndexSet& K,
                                   Coupling coupling, double kinetic_coefficient) {
  if (P.n() != K.n() || V.n() != K.n()) throw DimensionError("Hamiltonian inputs differ in lattice dimension");
  const std::size_t n = K.n();
  const auto D = static_cast<Eigen::Index>(K.size());
  const int N = K.N();
  const int L = 2 * N;
  DenseHamiltonian out{K, Matrix::Zero(D, D)};

  std::vector<int> k(n);
  for (Eigen::Index p = 0; p < D; ++p) {
    K.index(static_cast<std::size_t>(p), k);
    double s = 0.0;
    for (std::size_t r = 0; r < P.d(); ++r) {
      double lam = 0.0;
      for (std::size_t c = 0; c < n; ++c) lam += P(r, c) * k[c];
      s += lam * lam;
    }
    out.H(p, p) += kinetic_coefficient * s;
  }

  // Scatter each potential mode v along its lattice diagonal: row k_l + v,
  // column k_l. Galerkin drops rows outside the box, collocation wraps them.
  const SpectralState& modes = V.modes();
  std::vector<int> kl(n);
  std::vector<int> kj(n);
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const auto v = modes.index(i);
    const Complex value = modes.value(i);
    for (Eigen::Index l = 0; l < D; ++l) {
      K.index(static_cast<std::size_t>(l), kl);
      bool inside = true;
      for (std::size_t a = 0; a < n; ++a) {
        int target = kl[a] + v[a];
        if (coupling == Coupling::Collocation) {
          target = mod(target + N, L) - N;
        } else if (target < -N || target >= N) {
          inside = false;
          break;
        }
        kj[a] = target;
      }
      if (!inside) continue;
      std::size_t row = 0;
      for (std::size_t a = 0; a < n; ++a) row = row * static_cast<std::size_t>(L) + static_cast<std::size_t>(kj[a] + N);
      out.H(static_cast<Eigen::Index>(row), l) += value;
    }
  }
  return out;
}

Matrix matrix_exponential(const Matrix& A, double tol, ExpmInfo* info, int max_terms, int max_squarings) {
  if (A.rows() != A.cols()) throw DimensionError("matrix_exponential needs a square matrix");
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  const Eigen::Index D = A.rows();
  const double a = norm_bound(A);

  int s = 0;
  while (std::ldexp(a, -s) > 0.5) ++s;

  // Remainder of the degree-m series at theta <= 1/2 is at most
  // theta^(m+1)/(m+1)! e^theta; s squarings amplify it by at most 2^s e^||A||,
  // or by about 2^s when A is skew-Hermitian and every factor is unitary.
  const bool skew = (A + A.adjoint()).cwiseAbs().maxCoeff() <= 1e-14 * std::max(a, 1.0);
  const double growth = skew ? 1.0 : std::exp(a);
  int terms = -1;
  double bound = 0.0;
  for (; s <= max_squarings; ++s) {
    const double theta = std::ldexp(a, -s);
    double term = theta;  // theta^(m+1)/(m+1)! for m = 0
    for (int m = 0; m <= max_terms; ++m) {
      const double b = std::ldexp(term * std::exp(theta), s) * growth;
      if (b < tol || theta == 0.0) {
        terms = m;
        bound = theta == 0.0 ? 0.0 : b;
        break;
      }
      term *= theta / (m + 2);
    }
    if (terms >= 0) break;
  }
  if (terms < 0) {
    throw ConvergenceError("matrix exponential cannot reach tolerance " + std::to_string(tol) + " for norm " +
                           std::to_string(a));
  }

  const Matrix B = A / std::ldexp(1.0, s);
  Matrix result = Matrix::Identity(D, D);
  Matrix power = Matrix::Identity(D, D);
  Matrix tmp(D, D);
  for (int m = 1; m <= terms; ++m) {
    tmp.noalias() = power * B;
    power = tmp / static_cast<double>(m);
    result += power;
  }
  for (int i = 0; i < s; ++i) {
    tmp.noalias() = result * result;
    result.swap(tmp);
  }
  if (info) *info = ExpmInfo{s, terms, bound};
  return result;
}

Vector exact_propagate(const Vector& u0, const DenseHamiltonian& H, double t, double tol) {
  if (u0.size() != H.H.rows()) throw DimensionError("state length does not match Hamiltonian");
  if (t == 0.0) return u0;
  const Matrix U = matrix_exponential(Complex(0.0, -t) * H.H, tol);
  return U * u0;
}

}  // namespace qpse::oracle
