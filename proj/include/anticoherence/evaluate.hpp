#pragma once

#include <optional>

#include "anticoherence/measures.hpp"
#include "anticoherence/roof.hpp"

namespace ac {

/// Total, quantum and classical parts of one measure at one t.
struct MeasureResult {
  MeasureSpec spec;
  int t = 0;
  double total = 0.0;
  std::optional<double> quantum;
  std::optional<double> classical;  // total - quantum
  std::optional<RoofResult> roof;   // optimizer diagnostics behind `quantum`
  bool conjectural_t4 = false;
};

/// Always computes the total; the roof runs only when `with_quantum` is set.
/// Throws DomainError when a quantum part is requested for a kind without one.
MeasureResult evaluate_measure(const SpinState& rho, int t, const MeasureSpec& spec, bool with_quantum,
                               const RoofOptions& opts = {});

/// A_t^C = A_t^T - A_t^Q.
double classical_measure(const SpinState& rho, int t, const MeasureSpec& spec, const RoofOptions& opts = {});

}  // namespace ac
