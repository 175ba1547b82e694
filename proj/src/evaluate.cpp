#include "anticoherence/evaluate.hpp"

#include "anticoherence/errors.hpp"

namespace ac {

MeasureResult evaluate_measure(const SpinState& rho, int t, const MeasureSpec& spec, bool with_quantum,
                               const RoofOptions& opts) {
  MeasureResult out;
  out.spec = spec;
  out.t = t;
  out.total = total_measure(rho, t, spec);
  out.conjectural_t4 = spec.conjectural_t4();
  if (!with_quantum) return out;
  if (!spec.has_quantum_counterpart(t)) {
    // cm at t >= 2 gets the longer explanation from quantum_measure
    if (spec.kind == MeasureKind::CumulativeMultipole) quantum_measure(rho, t, spec, opts);
    throw DomainError("no quantum counterpart for '" + spec.name() + "' at t = " + std::to_string(t));
  }
  out.roof = quantum_measure(rho, t, spec, opts);
  out.quantum = out.roof->value;
  out.classical = out.total - *out.quantum;
  return out;
}

double classical_measure(const SpinState& rho, int t, const MeasureSpec& spec, const RoofOptions& opts) {
  return *evaluate_measure(rho, t, spec, true, opts).classical;
}

}  // namespace ac
