#pragma once

#include <string>
#include <string_view>

#include "anticoherence/spin.hpp"

namespace ac {

enum class MeasureKind { Purity, Schatten, Fidelity, CumulativeMultipole };

struct MeasureSpec {
  MeasureKind kind = MeasureKind::Purity;
  double p = 2.0;  // Schatten index, used only for MeasureKind::Schatten

  static MeasureSpec purity() { return {MeasureKind::Purity, 2.0}; }
  static MeasureSpec schatten(double p);
  static MeasureSpec fidelity() { return {MeasureKind::Fidelity, 2.0}; }
  static MeasureSpec cm() { return {MeasureKind::CumulativeMultipole, 2.0}; }
  /// "purity", "hs", "trace", "fidelity", "cm", or "schatten:P".
  static MeasureSpec parse(std::string_view name);

  std::string name() const;
  /// No T4 proof exists for these totals.
  bool conjectural_t4() const;
  bool has_quantum_counterpart(int t) const;
};

double total_purity(const SpinState& rho, int t);

/// Largest Schatten-p distance of a spin-t/2 state from the MMS, attained on pure states.
double schatten_normalizer(int t, double p);
double schatten_distance(const Matrix& a, const Matrix& b, double p);
double total_distance(const SpinState& rho, int t, double p);

/// Tr sqrt(rho_t), from the singular values of a square-root factor of rho_t.
double marginal_trace_sqrt(const SpinState& rho, int t);
double total_fidelity(const SpinState& rho, int t);

/// Uhlmann fidelity (Tr sqrt(sqrt(s) t sqrt(s)))^2.
double uhlmann_fidelity(const Matrix& sigma, const Matrix& tau);
double bures_distance(const SpinState& sigma, const SpinState& tau);

/// C_{<=t}(rho) = sum_{L=1}^t sum_M |rho_LM|^2, 1 <= t <= 2j.
double cumulative_multipole(const SpinState& rho, int t);
/// Closed form shared by all coherent states, 1 <= t <= 2j-1.
double coherent_cumulative_multipole(SpinQuantumNumber spin, int t);
double total_cm(const SpinState& rho, int t);

double total_measure(const SpinState& rho, int t, const MeasureSpec& spec);

/// Eigenvalues of a Hermitian matrix with tiny negatives clamped to zero.
Eigen::VectorXd clamped_spectrum(const Matrix& X);

}  // namespace ac
