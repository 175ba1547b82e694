#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "anticoherence/roof.hpp"

namespace ac {

enum class LossFamily { Ghz, W, UserFile };
/// "ghz", "w" or "file".
LossFamily parse_loss_family(std::string_view text);
std::string to_string(LossFamily f);

struct LossScanRecord {
  std::string family;
  int N = 0;
  int q = 0;
  int t = 0;
  double value = 0.0;  // quantum purity-based measure of the q-qubit marginal
  std::string certification;
};

struct LossScan {
  std::vector<LossScanRecord> records;  // N ascending, then q ascending
  std::vector<std::string> notes;       // skipped (N, q) pairs
};

/// Built-in families for N = n_min .. n_max. UserFile has no built-in states.
LossScan loss_scan(LossFamily family, int n_min, int n_max, int t, const RoofOptions& opts = {});
/// Scans every marginal q = 1 .. N of each supplied state.
LossScan loss_scan_states(const std::string& family, const std::vector<SpinState>& states, int t,
                          const RoofOptions& opts = {});

/// One (lambda, kind, t) point of the spin-2 rank-2 family.
struct CurveRow {
  double lambda = 0.0;
  std::string kind;  // purity | fidelity
  int t = 0;
  double total_analytic = 0.0, total_numeric = 0.0;
  double quantum_analytic = 0.0, quantum_numeric = 0.0;
  double classical_analytic = 0.0, classical_numeric = 0.0;
  std::string certification;

  double total_error() const;
  double quantum_error() const;
};

/// n evenly spaced points on [0, 1], endpoints included.
std::vector<double> unit_grid(int n);

/// Closed forms next to recomputed values, t = 1, 2, 3, purity rows before fidelity rows at each lambda.
std::vector<CurveRow> example1_curves(const std::vector<double>& lambdas, const RoofOptions& opts = {});

struct SummaryRow {
  std::string state;
  int two_j = 0;
  int rank = 0;
  double purity = 0.0;
  std::string purity_exact;
  int t = 0;
  double total = 0.0;
  std::string total_exact;  // empty when irrational
  double quantum = 0.0;
  double classical = 0.0;
  std::string certification;
  double roof_gap = 0.0;
};

/// Names of the states in the purity/order summary, in display order.
const std::vector<std::string>& summary_states();
/// Purity-based triples for t = 1 .. min(2j - 1, 4) of every summary state.
std::vector<SummaryRow> summary_table(const RoofOptions& opts = {});

}  // namespace ac
