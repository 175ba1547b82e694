#include "anticoherence/random.hpp"

#include <cmath>
#include <numbers>

namespace ac {

Rng derive_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

namespace {

Matrix ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = cplx(re, im);
    }
  }
  return g;
}

}  // namespace

Vector haar_vector(int dim, Rng& rng) {
  Vector v = ginibre(dim, 1, rng).col(0);
  return v / v.norm();
}

Matrix haar_unitary(int dim, Rng& rng) {
  const Matrix g = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // fix the phases of R's diagonal so the distribution is exactly Haar
  for (int k = 0; k < dim; ++k) {
    const double a = std::abs(r(k, k));
    if (a > 0.0) q.col(k) *= r(k, k) / a;
  }
  return q;
}

Matrix haar_isometry(int m, int r, Rng& rng) {
  if (r > m) throw DomainError("isometry needs r <= m");
  return haar_unitary(m, rng).leftCols(r);
}

PureSpinState random_pure_state(SpinQuantumNumber spin, Rng& rng) {
  return PureSpinState::normalized(spin, haar_vector(spin.dim(), rng));
}

SpinState random_mixed_state(SpinQuantumNumber spin, Rng& rng, int rank) {
  if (rank <= 0 || rank > spin.dim()) rank = spin.dim();
  const Matrix g = ginibre(spin.dim(), rank, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return SpinState::unchecked(spin, rho);
}

EulerAngles random_angles(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  EulerAngles a;
  a.alpha = 2.0 * std::numbers::pi * u(rng);
  a.beta = std::acos(1.0 - 2.0 * u(rng));
  a.gamma = 2.0 * std::numbers::pi * u(rng);
  return a;
}

}  // namespace ac
