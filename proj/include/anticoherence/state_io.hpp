#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"

#include "anticoherence/channels.hpp"
#include "anticoherence/spin.hpp"

namespace ac {

using Json = nlohmann::json;

/// Where a state came from, when it was built from a named recipe; lets consumers
/// redo the computation on the exact-rational path.
struct StateSource {
  std::string catalogue;
  std::string lambda;  // rational text, empty when the recipe has no weight
  int two_j = -1;
};

/// A parsed state file. `matrix` is exactly what the file describes (|psi><psi| for
/// amplitude files), before any repair.
struct StateDocument {
  SpinQuantumNumber spin{0};
  bool pure = false;
  Matrix matrix;
  std::optional<Vector> amplitudes;
  std::optional<StateSource> source;
  DensityCheck check;
  double tol = kInputTolerance;

  /// Throws ValidationError when `validate` is set and the check fails. Without
  /// validation the Hermitian part is kept and amplitudes are renormalized.
  SpinState state(bool validate = true) const;
  /// Amplitudes, or the top eigenvector of a rank-one matrix. DomainError on mixed states.
  PureSpinState pure_state(bool validate = true) const;
};

/// Accepts {"two_j", "kind": "pure", "amplitudes"} or {"matrix"} with optional "two_j"
/// and "kind": "mixed". Complex entries are [re, im] pairs or bare reals. Throws
/// ValidationError on malformed documents; numerical checks are recorded in `check`.
StateDocument parse_state(const Json& doc, double tol = kInputTolerance);
StateDocument read_state(std::istream& in, double tol = kInputTolerance);
StateDocument read_state_file(const std::string& path, double tol = kInputTolerance);

Json complex_to_json(cplx z);
cplx complex_from_json(const Json& j);

Json state_to_json(const SpinState& rho);
Json state_to_json(const PureSpinState& psi);
Json source_to_json(const StateSource& s);

/// {"two_j": int, "f": [f_1, ..., f_2j]}
ChannelSpec parse_channel(const Json& doc);
ChannelSpec read_channel_file(const std::string& path);
Json channel_to_json(const ChannelSpec& spec);

}  // namespace ac
