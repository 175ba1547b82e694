#pragma once

#include <cstdint>
#include <random>

#include "anticoherence/spin.hpp"

namespace ac {

using Rng = std::mt19937_64;

/// Independent child stream, so parallel work stays reproducible regardless of scheduling.
Rng derive_rng(std::uint64_t seed, std::uint64_t stream);

/// Complex Gaussian vector, normalized: Haar-distributed on the unit sphere.
Vector haar_vector(int dim, Rng& rng);
Matrix haar_unitary(int dim, Rng& rng);
/// m x r matrix with orthonormal columns, Haar-distributed.
Matrix haar_isometry(int m, int r, Rng& rng);

PureSpinState random_pure_state(SpinQuantumNumber spin, Rng& rng);
/// Ginibre-induced state G G^dagger / Tr with G of size dim x rank; rank <= 0 means full rank.
SpinState random_mixed_state(SpinQuantumNumber spin, Rng& rng, int rank = 0);
/// Uniform (Haar) random rotation.
EulerAngles random_angles(Rng& rng);

}  // namespace ac
