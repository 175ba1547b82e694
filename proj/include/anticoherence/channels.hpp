#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "anticoherence/measures.hpp"
#include "anticoherence/random.hpp"
#include "anticoherence/spin.hpp"

namespace ac {

/// Spin-L character sin((2L+1) w/2) / sin(w/2) of a rotation by angle w.
double character(int L, double omega);

/// Haar weight of the rotation angle on [0, pi]: (2/pi) sin^2(w/2).
double haar_angle_weight(double omega);

/// Conjugation-invariant distribution of the rotation angle, as a weighted sum of
/// components: point masses, the Haar distribution, and densities on [0, pi].
class AngleDensity {
 public:
  struct Component {
    enum class Kind { Atom, Haar, Density } kind;
    double weight;
    double omega = 0.0;                     // Atom
    std::function<double(double)> per_dw;   // Density, w.r.t. d(omega)
    std::string label;
  };

  static AngleDensity identity();
  static AngleDensity haar();
  static AngleDensity atom(double omega);
  /// `p` is a density against the Haar angle weight. Throws DomainError unless it
  /// integrates to 1 within 1e-8.
  static AngleDensity from_haar_density(std::function<double(double)> p, std::string label = "custom");
  /// Normal profile exp(-w^2 / 2 sigma^2) on [0, pi], normalized in d(omega).
  static AngleDensity gaussian(double sigma);

  /// Terms joined by '+', each "[w*]kind": identity, haar, delta:W, gauss:SIGMA.
  /// Angles accept "pi" and "pi/K". Weights must be nonnegative and sum to 1.
  static AngleDensity parse(std::string_view text);

  /// Weighted sum; weights must be nonnegative and sum to 1 within 1e-10.
  static AngleDensity mixture(const std::vector<std::pair<double, AngleDensity>>& parts);

  const std::vector<Component>& components() const { return components_; }
  std::string describe() const;
  /// (1/(2L+1)) E[chi_L(w)], adaptive Gauss-Kronrod for density parts.
  double damping(int L) const;

 private:
  std::vector<Component> components_;
};

struct ChannelSpec {
  enum class Provenance { RawVector, RandomRotation, Depolarizing };

  SpinQuantumNumber spin{0};
  std::vector<double> f;  // f_1 .. f_{2j}; f_0 = 1 is implicit
  Provenance provenance = Provenance::RawVector;
  std::string descriptor;

  /// Throws DomainError on a wrong length or |f_L| > 1.
  static ChannelSpec raw(SpinQuantumNumber spin, std::vector<double> f);
  static ChannelSpec identity(SpinQuantumNumber spin);
  /// (1 - s) rho + s 1/(2j+1), 0 <= s <= 1.
  static ChannelSpec depolarizing(SpinQuantumNumber spin, double strength);
  static ChannelSpec random_rotation(SpinQuantumNumber spin, const AngleDensity& density);

  double damping(int L) const { return L == 0 ? 1.0 : f.at(static_cast<std::size_t>(L - 1)); }
};

std::string to_string(ChannelSpec::Provenance p);

/// Rank-wise product of damping vectors (apply b, then a).
ChannelSpec compose(const ChannelSpec& a, const ChannelSpec& b);

/// Phi(X) = sum_LM f_L X_LM T_LM for any operator X.
Matrix apply_channel(const ChannelSpec& spec, const Matrix& X);
/// Throws DomainError on a spin mismatch. The output is not validated, so a
/// non-CP spec may yield a non-positive matrix.
SpinState apply_channel(const ChannelSpec& spec, const SpinState& rho);

/// sum_ab |a><b| (x) Phi(|a><b|).
Matrix choi_matrix(const ChannelSpec& spec);

struct CpCheck {
  bool cp = false;
  double min_eigenvalue = 0.0;
};
CpCheck choi_cp_check(const ChannelSpec& spec, double tol = 1e-10);

/// Choi eigenvalues lambda_K, K = 0..2j, one per coupled irrep of the collective
/// rotation it commutes with; each is linear in f. Same verdict as choi_cp_check
/// at a fraction of the cost.
Eigen::VectorXd choi_irrep_eigenvalues(const ChannelSpec& spec);
CpCheck fast_cp_check(const ChannelSpec& spec, double tol = 1e-10);

/// Uniform draw from the box [-1, 1]^{2j}, rejected until CP. Gives up after
/// `max_attempts` and returns false.
bool sample_cp_box(SpinQuantumNumber spin, Rng& rng, ChannelSpec& out, int max_attempts = 100000,
                   int* attempts_used = nullptr);
/// Random mixture of up to three rotation-angle atoms and a Haar part; CP by construction.
ChannelSpec sample_rotation_channel(SpinQuantumNumber spin, Rng& rng);

struct T4Report {
  MeasureSpec spec;
  SpinQuantumNumber spin{0};
  int t = 0;
  int trials = 0;
  int violations = 0;
  double worst_margin = 0.0;  // min over trials of A(Phi(rho)) - A(rho)
  bool conjectural = false;
  int box_channels = 0;       // CP channels from box rejection
  int box_attempts = 0;       // box draws spent on them
  int rotation_channels = 0;  // from rotation-angle mixtures

  /// Violations count as failures only where monotonicity is proven.
  bool hard_fail() const { return !conjectural && violations > 0; }
};

/// Samples CP channels (alternating box rejection and rotation mixtures) and random
/// states, counting trials with A(Phi(rho)) < A(rho) - 1e-10.
T4Report t4_harness(const MeasureSpec& spec, SpinQuantumNumber spin, int t, int trials, std::uint64_t seed,
                    int threads = 0);

}  // namespace ac
