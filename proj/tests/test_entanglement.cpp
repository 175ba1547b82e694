#include <cmath>

#include "anticoherence/catalogue.hpp"
#include "anticoherence/entanglement.hpp"
#include "anticoherence/random.hpp"
#include "anticoherence/reduction.hpp"
#include "doctest.h"

using namespace ac;

namespace {

PureSpinState pure_from(std::string_view name) {
  const auto m = catalogue_members(name, 0.0);
  return PureSpinState::normalized(SpinQuantumNumber(static_cast<int>(m[0].second.size()) - 1), m[0].second);
}

}  // namespace

TEST_CASE("Schmidt spectra of the spin-2 cumulative-multipole pair") {
  const auto psi = pure_from("j2_cm_psi");
  const auto phi = pure_from("j2_cm_phi");
  const Eigen::VectorXd lp = schmidt(psi, 2).squared();
  const Eigen::VectorXd lf = schmidt(phi, 2).squared();
  CHECK(std::abs(lp(0) - (7.0 / 18 + std::sqrt(6.0) / 9)) < 1e-12);
  CHECK(std::abs(lp(1) - 2.0 / 9) < 1e-12);
  CHECK(std::abs(lp(2) - (7.0 / 18 - std::sqrt(6.0) / 9)) < 1e-12);
  CHECK(std::abs(lf(0) - (4.0 / 9 + std::sqrt(87.0) / 36)) < 1e-12);
  CHECK(std::abs(lf(1) - (4.0 / 9 - std::sqrt(87.0) / 36)) < 1e-12);
  CHECK(std::abs(lf(2) - 1.0 / 9) < 1e-12);
  CHECK(majorized_by(lp, lf));
  CHECK_FALSE(majorized_by(lf, lp));
}

TEST_CASE("Schmidt basics") {
  const auto coh = coherent_state(SpinQuantumNumber(5), 0.8, 2.0);
  for (int t = 1; t < 5; ++t) {
    const auto a = schmidt(coh, t).coefficients;
    CHECK(a(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.tail(a.size() - 1).norm() < 1e-7);
    CHECK(negativity_pure(coh, t) < 1e-7);
  }
  Rng rng(3);
  for (int N = 2; N <= 6; ++N) {
    const auto psi = random_pure_state(SpinQuantumNumber(N), rng);
    for (int t = 1; t < N; ++t) {
      const auto a = schmidt(psi, t);
      CHECK(a.coefficients.size() == std::min(t + 1, N - t + 1));
      CHECK(a.squared().sum() == doctest::Approx(1.0).epsilon(1e-12));
      Eigen::SelfAdjointEigenSolver<Matrix> es(reduce(psi.density(), t).matrix());
      Eigen::VectorXd top = es.eigenvalues().reverse().head(a.coefficients.size());
      CHECK((top - a.squared()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  CHECK_THROWS_AS(schmidt(coh, 5), DomainError);
  CHECK_THROWS_AS(schmidt(coh, 0), DomainError);
}

TEST_CASE("negativity: Schmidt formula equals partial-transpose trace norm") {
  Rng rng(7);
  double worst = 0.0;
  for (int N = 2; N <= 6; ++N) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto psi = random_pure_state(SpinQuantumNumber(N), rng);
      for (int t = 1; t < N; ++t) worst = std::max(worst, std::abs(negativity_pure(psi, t) - negativity_mixed(psi.density(), t)));
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("negativity values on catalogue states") {
  CHECK(negativity_pure(pure_from("j2_psi_plus"), 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(negativity_pure(pure_from("j2_psi_minus"), 1) == doctest::Approx(0.5).epsilon(1e-12));
  for (double lambda : {0.0, 0.3, 0.5, 1.0}) {
    CHECK(negativity_mixed(catalogue_state("j2_rank2", lambda), 1) == doctest::Approx(0.5).epsilon(1e-12));
  }
  // spin-5/2 pair: each member carries sqrt2/3 at t = 1, and so does every mixture
  const auto pair = catalogue_members("j5o2_pt_pair", 1.0);
  for (const auto& [w, v] : pair) {
    CHECK(negativity_pure(PureSpinState::normalized(SpinQuantumNumber(5), v), 1) == doctest::Approx(std::sqrt(2.0) / 3).epsilon(1e-12));
  }
  for (double lambda : {0.1, 0.5, 0.8}) {
    CHECK(negativity_mixed(catalogue_state("j5o2_pt_pair", lambda), 1) == doctest::Approx(std::sqrt(2.0) / 3).epsilon(1e-12));
  }
  CHECK(negativity_mixed(SpinState::maximally_mixed(SpinQuantumNumber(4)), 2) < 1e-14);
  // separable: mixture of coherent states
  Matrix sep = Matrix::Zero(5, 5);
  for (int k = 0; k < 6; ++k) sep += coherent_state(SpinQuantumNumber(4), 0.5 * k, 1.3 * k).density().matrix() / 6.0;
  const SpinState sep_state = SpinState::unchecked(SpinQuantumNumber(4), sep);
  for (int t = 1; t < 4; ++t) CHECK(negativity_mixed(sep_state, t) < 1e-12);
}

TEST_CASE("orthogonal partial transposes of the spin-5/2 pair") {
  const auto pair = catalogue_members("j5o2_pt_pair", 1.0);
  const Matrix& W = bipartite_isometry(SpinQuantumNumber(5), 1);
  const Vector a = W * pair[0].second, b = W * pair[1].second;
  CHECK(pt_overlap(a * a.adjoint(), b * b.adjoint(), 2, 5) < 1e-14);
  Rng rng(1);
  const Vector c = W * haar_vector(6, rng);
  CHECK(pt_overlap(a * a.adjoint(), c * c.adjoint(), 2, 5) > 1e-3);
}

TEST_CASE("fidelity-negativity identity") {
  Rng rng(13);
  for (int N = 2; N <= 6; ++N) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto psi = random_pure_state(SpinQuantumNumber(N), rng);
      for (int t = 1; t < N; ++t) {
        const auto fn = fidelity_negativity_check(psi, t);
        CHECK(std::abs(fn.lhs - fn.rhs) < 1e-10);
      }
    }
  }
  const auto coh = fidelity_negativity_check(coherent_state(SpinQuantumNumber(4), 0.2, 0.1), 2);
  CHECK(coh.rhs == doctest::Approx(1.0 / 3).epsilon(1e-12));
  // rank-one marginal: square roots of rounding-level eigenvalues limit the direct route
  CHECK(coh.lhs == doctest::Approx(1.0 / 3).epsilon(1e-7));
  const auto ac = fidelity_negativity_check(pure_from("j2_psi_plus"), 1);
  CHECK(ac.lhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ac.rhs == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("negativity is invariant under global rotations") {
  Rng rng(19);
  for (int N = 2; N <= 5; ++N) {
    const SpinState rho = random_mixed_state(SpinQuantumNumber(N), rng, 2);
    const SpinState rot = rotate(rho, random_angles(rng));
    for (int t = 1; t < N; ++t) CHECK(std::abs(negativity_mixed(rho, t) - negativity_mixed(rot, t)) < 1e-10);
  }
}
