#include "anticoherence/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "anticoherence/measures.hpp"
#include "anticoherence/reduction.hpp"

namespace ac {

namespace {

void check_split(SpinQuantumNumber spin, int t) {
  if (t < 1 || t > spin.two_j() - 1) {
    throw DomainError("bipartition t | N-t needs 1 <= t <= N-1 (t = " + std::to_string(t) +
                      ", N = " + std::to_string(spin.two_j()) + ")");
  }
}

}  // namespace

SchmidtSpectrum schmidt(const PureSpinState& psi, int t) {
  check_split(psi.spin(), t);
  const Matrix X = bipartite_amplitudes(psi.amplitudes(), psi.spin(), t);
  Eigen::JacobiSVD<Matrix> svd(X);
  return {svd.singularValues()};
}

double negativity_pure(const PureSpinState& psi, int t) {
  const Eigen::VectorXd a = schmidt(psi, t).coefficients;
  double acc = 0.0;
  for (int i = 0; i < a.size(); ++i) {
    for (int k = i + 1; k < a.size(); ++k) acc += a(i) * a(k);
  }
  return acc;
}

double trace_norm_hermitian(const Matrix& X) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(X, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

double negativity_mixed(const SpinState& rho, int t) {
  check_split(rho.spin(), t);
  const int dA = t + 1;
  const int dB = rho.spin().two_j() - t + 1;
  const Matrix pt = partial_transpose(embed_bipartite(rho, t), dA, dB);
  return std::max(0.0, 0.5 * (trace_norm_hermitian(pt) - 1.0));
}

FidelityNegativity fidelity_negativity_check(const PureSpinState& psi, int t) {
  check_split(psi.spin(), t);
  // eigenvalues of the reduced state; a pure state's marginal has rank at most min(t+1, N-t+1),
  // so the remaining ones are rounding noise
  const Matrix rt = reduce(psi.density(), t).matrix();
  const Eigen::VectorXd ev = clamped_spectrum(rt).reverse();
  const int rank = std::min(t + 1, psi.spin().two_j() - t + 1);
  const double tr_sqrt = ev.head(rank).cwiseSqrt().sum();
  return {tr_sqrt * tr_sqrt / (t + 1), (1.0 + 2.0 * negativity_pure(psi, t)) / (t + 1)};
}

bool majorized_by(Eigen::VectorXd a, Eigen::VectorXd b, double tol) {
  const Eigen::Index n = std::max(a.size(), b.size());
  a.conservativeResizeLike(Eigen::VectorXd::Zero(n));
  b.conservativeResizeLike(Eigen::VectorXd::Zero(n));
  std::sort(a.data(), a.data() + n, std::greater<>());
  std::sort(b.data(), b.data() + n, std::greater<>());
  if (std::abs(a.sum() - b.sum()) > tol) return false;
  double sa = 0.0, sb = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    sa += a(k);
    sb += b(k);
    if (sa > sb + tol) return false;
  }
  return true;
}

double pt_overlap(const Matrix& X, const Matrix& Y, int dA, int dB) {
  return (partial_transpose(X, dA, dB) * partial_transpose(Y, dA, dB)).norm();
}

}  // namespace ac
