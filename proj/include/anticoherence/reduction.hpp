#pragma once

#include "anticoherence/spin.hpp"

namespace ac {

/// Symmetric t-qubit marginal, a spin-t/2 density matrix.
class ReducedState {
 public:
  ReducedState(int t, Matrix matrix) : t_(t), matrix_(std::move(matrix)) {}

  int t() const { return t_; }
  const Matrix& matrix() const { return matrix_; }
  /// The marginal seen as a spin-t/2 state.
  SpinState as_spin_state() const;

 private:
  int t_;
  Matrix matrix_;
};

/// c_{N,t,L} = (t!/N!) sqrt((N-L)! (N+L+1)! / ((t-L)! (t+L+1)!)), exact then rounded once.
double reduction_coefficient(int N, int t, int L);

/// rho_t = sum_{L<=t} c_{N,t,L} rho_LM T^{(t/2)}_LM.
ReducedState reduce(const SpinState& rho, int t);

/// Isometry W: H_j -> H_{t/2} (x) H_{(N-t)/2}, rows (a, b) -> a * (N-t+1) + b,
/// W[(a,b), k] = <t/2 m_a; (N-t)/2 m_b | N/2 m_k>. Cached per (N, t).
const Matrix& bipartite_isometry(SpinQuantumNumber spin, int t);

/// W rho W^dagger, 1 <= t <= N-1.
Matrix embed_bipartite(const SpinState& rho, int t);

/// Amplitude matrix X with X(a, b) = (W psi)_{(a,b)}; X X^dagger is the reduced state.
Matrix bipartite_amplitudes(const Vector& psi, SpinQuantumNumber spin, int t);

/// Tr_B of a dA*dB square matrix.
Matrix partial_trace_second(const Matrix& X, int dA, int dB);

/// Transpose on the first factor.
Matrix partial_transpose(const Matrix& X, int dA, int dB);

}  // namespace ac
