#include "anticoherence/reduction.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "anticoherence/exact.hpp"

namespace ac {

SpinState ReducedState::as_spin_state() const {
  return SpinState::unchecked(SpinQuantumNumber(t_), matrix_);
}

double reduction_coefficient(int N, int t, int L) {
  if (N < 0 || t < 0 || t > N || L < 0 || L > t) {
    throw DomainError("reduction coefficient needs 0 <= L <= t <= N (got N=" + std::to_string(N) +
                      ", t=" + std::to_string(t) + ", L=" + std::to_string(L) + ")");
  }
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int>, double> cache;
  std::lock_guard lock(mutex);
  const auto key = std::make_tuple(N, t, L);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  const double value = exact::Surd::sqrt(exact::reduction_coefficient_squared(N, t, L)).to_double();
  cache.emplace(key, value);
  return value;
}

namespace {

void check_t(SpinQuantumNumber spin, int t, int upper) {
  if (t < 1 || t > upper) {
    throw DomainError("t = " + std::to_string(t) + " outside [1, " + std::to_string(upper) +
                      "] for j = " + spin.to_string());
  }
}

}  // namespace

ReducedState reduce(const SpinState& rho, int t) {
  const auto spin = rho.spin();
  const int N = spin.two_j();
  check_t(spin, t, N);
  const SpinQuantumNumber sub(t);
  const auto& big = tensor_basis(spin);
  const auto& small = tensor_basis(sub);
  Matrix out = Matrix::Identity(t + 1, t + 1) / static_cast<double>(t + 1);
  for (int L = 1; L <= t; ++L) {
    const double c = reduction_coefficient(N, t, L);
    for (int M = -L; M <= L; ++M) small.accumulate(out, L, M, c * big.coefficient(rho.matrix(), L, M));
  }
  return ReducedState(t, 0.5 * (out + out.adjoint()));
}

const Matrix& bipartite_isometry(SpinQuantumNumber spin, int t) {
  const int N = spin.two_j();
  check_t(spin, t, N);
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<Matrix>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{N, t}];
  if (!slot) {
    const int dA = t + 1;
    const int dB = N - t + 1;
    const SpinQuantumNumber a(t), b(N - t);
    auto W = std::make_unique<Matrix>(Matrix::Zero(dA * dB, N + 1));
    for (int ia = 0; ia < dA; ++ia) {
      for (int ib = 0; ib < dB; ++ib) {
        const HalfInt m = a.m_at(ia) + b.m_at(ib);
        (*W)(ia * dB + ib, spin.index_of(m)) =
            clebsch_gordan(a.half_int(), a.m_at(ia), b.half_int(), b.m_at(ib), spin.half_int(), m);
      }
    }
    slot = std::move(W);
  }
  return *slot;
}

Matrix embed_bipartite(const SpinState& rho, int t) {
  check_t(rho.spin(), t, rho.spin().two_j() - 1);
  const Matrix& W = bipartite_isometry(rho.spin(), t);
  return W * rho.matrix() * W.adjoint();
}

Matrix bipartite_amplitudes(const Vector& psi, SpinQuantumNumber spin, int t) {
  const Matrix& W = bipartite_isometry(spin, t);
  const Vector v = W * psi;
  const int dA = t + 1;
  const int dB = spin.two_j() - t + 1;
  Matrix X(dA, dB);
  for (int a = 0; a < dA; ++a) {
    for (int b = 0; b < dB; ++b) X(a, b) = v(a * dB + b);
  }
  return X;
}

Matrix partial_trace_second(const Matrix& X, int dA, int dB) {
  if (X.rows() != dA * dB || X.cols() != dA * dB) throw DomainError("partial trace: dimension mismatch");
  Matrix out = Matrix::Zero(dA, dA);
  for (int a = 0; a < dA; ++a) {
    for (int c = 0; c < dA; ++c) {
      cplx acc = 0.0;
      for (int b = 0; b < dB; ++b) acc += X(a * dB + b, c * dB + b);
      out(a, c) = acc;
    }
  }
  return out;
}

Matrix partial_transpose(const Matrix& X, int dA, int dB) {
  if (X.rows() != dA * dB || X.cols() != dA * dB) {
    throw DomainError("partial transpose: matrix is " + std::to_string(X.rows()) + "x" +
                      std::to_string(X.cols()) + ", expected " + std::to_string(dA * dB));
  }
  Matrix Y(X.rows(), X.cols());
  for (int a = 0; a < dA; ++a) {
    for (int c = 0; c < dA; ++c) {
      Y.block(a * dB, c * dB, dB, dB) = X.block(c * dB, a * dB, dB, dB);
    }
  }
  return Y;
}

}  // namespace ac
