#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "anticoherence/measures.hpp"
#include "anticoherence/spin.hpp"

namespace ac {

struct EnsembleMember {
  double weight;
  Vector psi;  // unit norm
};

struct Ensemble {
  SpinQuantumNumber spin;
  std::vector<EnsembleMember> members;

  Matrix reconstruct() const;
  /// max-abs entry of reconstruct() - rho
  double reconstruction_error(const Matrix& rho) const;
  double total_weight() const;
  /// Spectral decomposition, dropping eigenvalues below `cutoff`.
  static Ensemble eigen(const SpinState& rho, double cutoff = 1e-12);
};

enum class Certification { Analytic, Heuristic };
std::string to_string(Certification c);

/// Pure-state objective written through the Gram matrix R of an unnormalized member's
/// bipartite amplitudes (either X X^dagger or X^dagger X, they share nonzero spectrum).
/// evaluate() is homogeneous of degree one in R, so it returns p * f(psi) directly.
class RoofFunctional {
 public:
  virtual ~RoofFunctional() = default;
  /// g(R); when H is non-null it receives the Hermitian derivative dg/dR.
  /// `smoothing` > 0 selects a differentiable surrogate that tends to g as it vanishes.
  virtual double evaluate(const Matrix& R, Matrix* H, double smoothing) const = 0;
  /// Continuation ladder of smoothing values; the final value is always reported unsmoothed.
  virtual std::vector<double> smoothing_schedule() const { return {0.0}; }
  virtual std::string name() const = 0;
  /// f(psi) for a normalized pure state.
  double pure_value(const PureSpinState& psi, int t) const;
};

enum class RoofKind { Purity, HilbertSchmidt, Negativity };
std::unique_ptr<RoofFunctional> make_functional(RoofKind kind, int t);

struct RoofOptions {
  int restarts = 64;
  std::uint64_t seed = 1;
  int ensemble_size = 0;  // 0 means min(r^2, 16), never below r
  double tol = 1e-6;      // two best restarts must agree within this
  bool shortcuts = true;
  int max_iterations = 3000;
  int threads = 0;  // 0: AC_NUM_THREADS or hardware concurrency
  double rank_cutoff = 1e-12;
  // Adds one start seeded by a linear program over sampled pure states of the support,
  // grown by column generation. Catches optima sitting on non-smooth points, so it only
  // runs for functionals with a smoothing ladder.
  bool column_generation = true;
};

struct RoofResult {
  double value = 0.0;
  Ensemble ensemble{SpinQuantumNumber(0), {}};
  Certification certified = Certification::Heuristic;
  std::string method;
  int restarts = 0;
  double best_gap = 0.0;
  bool converged = true;
  std::vector<double> restart_values;  // sorted ascending
};

/// Heuristic minimum of sum_i p_i f(psi_i) over m-member decompositions of rho.
RoofResult convex_roof(const SpinState& rho, const RoofFunctional& f, int t, const RoofOptions& opts);

/// Convex-roof negativity N_t^CR.
RoofResult negativity_roof(const SpinState& rho, int t, const RoofOptions& opts = {});
RoofResult quantum_purity(const SpinState& rho, int t, const RoofOptions& opts = {});
RoofResult quantum_hs(const SpinState& rho, int t, const RoofOptions& opts = {});
/// (2/t) N_t^CR
RoofResult quantum_fidelity(const SpinState& rho, int t, const RoofOptions& opts = {});
/// Dispatch by measure kind. cm is accepted only at t = 1, where it coincides with purity;
/// for t >= 2 its roof would violate LOCC monotonicity and DomainError is thrown.
RoofResult quantum_measure(const SpinState& rho, int t, const MeasureSpec& spec, const RoofOptions& opts = {});

/// True when every cross element <e_a|T_LM^dagger|e_b>, 1 <= L <= t, of the support vanishes
/// (so every vector of the support is t-AC), confirmed on 50 random support vectors.
bool support_is_ac_subspace(const SpinState& rho, int t, double tol = 1e-9, double rank_cutoff = 1e-12);

/// Analytic value when the support is a t-AC subspace: t/2 for the negativity roof, 1 for
/// purity and HS roofs.
std::optional<RoofResult> roof_shortcut_ac_subspace(const SpinState& rho, int t, RoofKind kind);

/// N_t(rho) = sum_i p_i N_t(psi_i) when the partial transposes of the candidate's projectors
/// have pairwise orthogonal supports and the candidate reconstructs rho.
std::optional<RoofResult> roof_shortcut_orthogonal_pt(const SpinState& rho, int t, const Ensemble& candidate);

}  // namespace ac
