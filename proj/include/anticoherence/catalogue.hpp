#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "anticoherence/exact.hpp"
#include "anticoherence/spin.hpp"

namespace ac {

struct CatalogueInfo {
  std::string name;
  std::string summary;
  int two_j;             // -1 when the spin is chosen by the caller (ghz, w)
  bool has_lambda;       // mixing weight parameter
  std::string default_lambda;
};

/// Every named state, in a fixed order.
const std::vector<CatalogueInfo>& catalogue();
/// Throws DomainError on an unknown name.
const CatalogueInfo& catalogue_info(std::string_view name);

/// Exact construction. `two_j` is needed only for ghz and w; `lambda` only for families.
exact::ExactState catalogue_exact(std::string_view name, const exact::Rational& lambda, int two_j = -1);
exact::ExactState catalogue_exact(std::string_view name, int two_j = -1);

/// Floating construction from the same recipe; lambda is any real in [0, 1].
SpinState catalogue_state(std::string_view name, double lambda, int two_j = -1);
SpinState catalogue_state(std::string_view name, int two_j = -1);

/// Members of the defining mixture (weights at `lambda`), e.g. as a roof candidate.
std::vector<std::pair<double, Vector>> catalogue_members(std::string_view name, double lambda, int two_j = -1);

/// Largest t with rho_LM = 0 exactly for all 1 <= L <= t (0 if the dipole survives).
int exact_ac_order(const exact::ExactState& rho);

}  // namespace ac
