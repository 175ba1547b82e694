#pragma once

#include "anticoherence/spin.hpp"

namespace ac {

struct SchmidtSpectrum {
  /// Nonincreasing Schmidt coefficients alpha_i (not squared).
  Eigen::VectorXd coefficients;
  Eigen::VectorXd squared() const { return coefficients.array().square(); }
};

/// Schmidt decomposition across the t | N-t split, 1 <= t <= N-1.
SchmidtSpectrum schmidt(const PureSpinState& psi, int t);

/// sum_{i<k} alpha_i alpha_k.
double negativity_pure(const PureSpinState& psi, int t);

/// (||(W rho W^dagger)^{T_A}||_1 - 1) / 2.
double negativity_mixed(const SpinState& rho, int t);

/// Sum of |eigenvalues| of a Hermitian matrix.
double trace_norm_hermitian(const Matrix& X);

struct FidelityNegativity {
  double lhs;  // F(rho_t, 1/(t+1))
  double rhs;  // (1 + 2 N_t) / (t+1)
};
FidelityNegativity fidelity_negativity_check(const PureSpinState& psi, int t);

/// a majorized by b (a \prec b); vectors are sorted internally and compared as
/// partial sums with tolerance `tol`. Both must have equal sums within tol.
bool majorized_by(Eigen::VectorXd a, Eigen::VectorXd b, double tol = 1e-12);

/// ||X^{T_A} Y^{T_A}||_F, zero exactly when the partial transposes have orthogonal supports.
double pt_overlap(const Matrix& X, const Matrix& Y, int dA, int dB);

}  // namespace ac
