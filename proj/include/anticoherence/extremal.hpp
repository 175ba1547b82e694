#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "anticoherence/spin.hpp"

namespace ac {

/// Linear t-AC conditions rho_LM = 0 for 1 <= L <= t, all M.
struct ACConstraintSet {
  SpinQuantumNumber spin;
  int t;

  /// sum_{L=1}^t (2L+1) = t(t+2)
  int count() const { return t * (t + 2); }
  /// max |rho_LM| over the constrained multipoles
  double residual(const Matrix& rho) const;
  bool satisfied(const Matrix& rho, double tol) const { return residual(rho) < tol; }
};

/// max_{1<=L<=t, M} |rho_LM| < tol. False for t outside [1, 2j].
bool is_t_anticoherent(const SpinState& rho, int t, double tol = 1e-9);
/// Largest t with rho t-AC (0 when the dipole survives).
int anticoherence_order(const SpinState& rho, double tol = 1e-9);

struct MinPurityResult {
  double purity = 0.0;
  SpinState witness = SpinState::maximally_mixed(SpinQuantumNumber(0));
  double kkt_residual = 0.0;  // gradient component outside the constraint normals
  int iterations = 0;
};

/// min Tr rho^2 over t-AC states, as the projection of 0 onto the feasible set.
MinPurityResult min_purity_tac(SpinQuantumNumber spin, int t);

enum class WitnessSource { ExplicitState, HeuristicSearch };
std::string to_string(WitnessSource s);

struct StaircasePoint {
  double purity = 0.0;
  int max_order = 0;
  SpinState witness = SpinState::maximally_mixed(SpinQuantumNumber(0));
  WitnessSource certified = WitnessSource::HeuristicSearch;
  std::string witness_name;        // catalogue name, or a description of the search
  double catalogue_purity = -1.0;  // best catalogued t-AC purity, -1 if none
  double search_purity = -1.0;     // best purity reached by the vertex search alone
  bool exceeds_catalogue = false;  // search beat every catalogued witness
};

struct SearchOptions {
  int random_supports = 64;
  int walks_per_support = 3;
  int polish_rounds = 24;  // restarts from the best vertex, pulled toward the interior
  std::uint64_t seed = 1;
  int threads = 0;
  int max_dicke_subsets = 4096;  // structured supports tried before random ones
};

/// Heuristic max purity over t-AC states: random walks to vertices of the feasible
/// slice on Dicke-subset and Haar supports. Catalogued states are consulted first and
/// win unless the search beats them.
StaircasePoint max_purity_tac(SpinQuantumNumber spin, int t, const SearchOptions& opts = {});

struct Staircase {
  SpinQuantumNumber spin{0};
  /// thresholds[t-1]: best purity with order >= t; made non-increasing in t.
  std::vector<StaircasePoint> thresholds;
  /// (purity, largest t with threshold >= purity) per grid value
  std::vector<std::pair<double, int>> grid;
  /// Largest t whose threshold reaches `purity`, 0 if none.
  int order_at(double purity) const;
};

/// Grid values must lie in [1/(2j+1), 1].
Staircase staircase(SpinQuantumNumber spin, const std::vector<double>& purity_grid, const SearchOptions& opts = {});

}  // namespace ac
