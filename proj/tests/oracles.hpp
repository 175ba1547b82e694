#pragma once

// Independent reference computations. Nothing here calls the library's CG tables,
// tensor bases or reduction formulas.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Jz, J+ for spin two_j/2 in the basis m = j..-j, straight from the ladder formula.
inline Matrix jz(int two_j) {
  Matrix m = Matrix::Zero(two_j + 1, two_j + 1);
  for (int k = 0; k <= two_j; ++k) m(k, k) = 0.5 * (two_j - 2 * k);
  return m;
}

inline Matrix jplus(int two_j) {
  Matrix m = Matrix::Zero(two_j + 1, two_j + 1);
  const double j = 0.5 * two_j;
  for (int k = 1; k <= two_j; ++k) {
    const double mm = j - k;
    m(k - 1, k) = std::sqrt(j * (j + 1) - mm * (mm + 1));
  }
  return m;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index k = 0; k < a.cols(); ++k) out.block(i * b.rows(), k * b.cols(), b.rows(), b.cols()) = a(i, k) * b;
  return out;
}

// Coupled states |J M> expanded in the product basis |j1 m1>|j2 m2> (index a*(2j2+1)+b),
// found by diagonalizing J^2 in the M = J block, fixing the Condon-Shortley sign
// (<j1 j1; j2 J-j1 | J J> > 0) and lowering with J-.
// Returns a (2j1+1)(2j2+1) x (2J+1) matrix whose columns are |J M>, M = J..-J.
inline Matrix coupled_states(int two_j1, int two_j2, int two_J) {
  const int d1 = two_j1 + 1, d2 = two_j2 + 1;
  const Matrix I1 = Matrix::Identity(d1, d1), I2 = Matrix::Identity(d2, d2);
  const Matrix Jz = kron(jz(two_j1), I2) + kron(I1, jz(two_j2));
  const Matrix Jp = kron(jplus(two_j1), I2) + kron(I1, jplus(two_j2));
  const Matrix Jm = Jp.adjoint();
  const Matrix J2 = Jz * Jz + 0.5 * (Jp * Jm + Jm * Jp);
  std::vector<int> block;
  for (int a = 0; a < d1; ++a)
    for (int b = 0; b < d2; ++b)
      if ((two_j1 - 2 * a) + (two_j2 - 2 * b) == two_J) block.push_back(a * d2 + b);
  Matrix sub(block.size(), block.size());
  for (std::size_t r = 0; r < block.size(); ++r)
    for (std::size_t c = 0; c < block.size(); ++c) sub(r, c) = J2(block[r], block[c]);
  Eigen::SelfAdjointEigenSolver<Matrix> es(sub);
  const double target = 0.25 * two_J * (two_J + 2);
  int pick = 0;
  for (int k = 0; k < es.eigenvalues().size(); ++k)
    if (std::abs(es.eigenvalues()(k) - target) < std::abs(es.eigenvalues()(pick) - target)) pick = k;
  Vector top = Vector::Zero(d1 * d2);
  for (std::size_t r = 0; r < block.size(); ++r) top(block[r]) = es.eigenvectors()(r, pick);
  // Condon-Shortley: component with m1 = j1 (a = 0) is real positive
  int anchor = -1;
  for (int b = 0; b < d2; ++b)
    if (std::abs(top(b)) > 1e-12) { anchor = b; break; }
  top *= std::abs(top(anchor)) / top(anchor);
  Matrix out(d1 * d2, two_J + 1);
  out.col(0) = top;
  for (int k = 1; k <= two_J; ++k) {
    Vector v = Jm * out.col(k - 1);
    out.col(k) = v / v.norm();
  }
  return out;
}

inline double binomial(int n, int k) { return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)); }

// 2^N x (N+1) isometry onto Dicke states; qubit |0> is spin up, column k has k excitations.
inline Matrix dicke_embedding(int N) {
  const int dim = 1 << N;
  Matrix E = Matrix::Zero(dim, N + 1);
  for (int s = 0; s < dim; ++s) {
    const int k = __builtin_popcount(static_cast<unsigned>(s));
    E(s, k) = 1.0 / std::sqrt(binomial(N, k));
  }
  return E;
}

// Marginal on the first t qubits of an N-qubit operator (first qubit = most significant bit),
// expressed back in the Dicke basis of t qubits.
inline Matrix symmetric_marginal(const Matrix& rho_spin, int N, int t) {
  const Matrix E = dicke_embedding(N);
  const Matrix big = E * rho_spin * E.adjoint();
  const int dA = 1 << t, dB = 1 << (N - t);
  Matrix A = Matrix::Zero(dA, dA);
  for (int a = 0; a < dA; ++a)
    for (int c = 0; c < dA; ++c)
      for (int b = 0; b < dB; ++b) A(a, c) += big(a * dB + b, c * dB + b);
  const Matrix Et = dicke_embedding(t);
  return Et.adjoint() * A * Et;
}

// Superoperator projectors onto rank-L operators, acting on column-major vec(X): the
// eigenspaces of X -> sum_i [J_i, [J_i, X]] with eigenvalue L(L+1).
inline std::vector<Matrix> rank_projectors(int two_j) {
  const int d = two_j + 1;
  const Matrix jp = jplus(two_j);
  const Matrix jm = jp.adjoint();
  const Matrix J[3] = {0.5 * (jp + jm), std::complex<double>(0, -0.5) * (jp - jm), jz(two_j)};
  const Matrix I = Matrix::Identity(d, d);
  Matrix cas = Matrix::Zero(d * d, d * d);
  for (const Matrix& j : J) {
    const Matrix ad = kron(I, j) - kron(j.transpose(), I);
    cas += ad * ad;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(cas);
  std::vector<Matrix> P(d, Matrix::Zero(d * d, d * d));
  for (int k = 0; k < d * d; ++k) {
    const int L = static_cast<int>(std::lround(0.5 * (std::sqrt(1.0 + 4.0 * es.eigenvalues()(k)) - 1.0)));
    P[L] += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
  }
  return P;
}

}  // namespace oracle
