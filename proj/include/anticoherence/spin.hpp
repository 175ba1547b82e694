#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "anticoherence/errors.hpp"

namespace ac {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Absolute tolerance used by invariant checks unless a caller overrides it.
inline constexpr double kDefaultTolerance = 1e-10;

/// Tolerance applied when validating user-supplied states.
inline constexpr double kInputTolerance = 1e-8;

/// A half-integer stored as twice its value, so arithmetic on quantum numbers is exact.
class HalfInt {
 public:
  constexpr HalfInt() = default;
  static constexpr HalfInt from_twice(int twice) { return HalfInt(twice); }
  static constexpr HalfInt integer(int value) { return HalfInt(2 * value); }
  /// Accepts "3/2", "-1/2", "2", "2.5".
  static HalfInt parse(std::string_view text);
  /// Throws DomainError unless `value` is a multiple of 1/2.
  static HalfInt from_double(double value);

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return 0.5 * twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }

  constexpr HalfInt operator-() const { return HalfInt(-twice_); }
  constexpr HalfInt operator+(HalfInt o) const { return HalfInt(twice_ + o.twice_); }
  constexpr HalfInt operator-(HalfInt o) const { return HalfInt(twice_ - o.twice_); }
  constexpr auto operator<=>(const HalfInt&) const = default;

  std::string to_string() const;

 private:
  constexpr explicit HalfInt(int twice) : twice_(twice) {}
  int twice_ = 0;
};

/// Spin quantum number j, stored as 2j. The Hilbert space has dimension 2j + 1.
class SpinQuantumNumber {
 public:
  explicit SpinQuantumNumber(int two_j);
  static SpinQuantumNumber from_dimension(int dim) { return SpinQuantumNumber(dim - 1); }
  static SpinQuantumNumber parse(std::string_view text);

  int two_j() const { return two_j_; }
  /// Number of qubits N = 2j in the symmetric embedding.
  int qubits() const { return two_j_; }
  int dim() const { return two_j_ + 1; }
  double j() const { return 0.5 * two_j_; }
  HalfInt half_int() const { return HalfInt::from_twice(two_j_); }

  /// Basis index k holds |j, m> with m = j - k.
  HalfInt m_at(int index) const { return HalfInt::from_twice(two_j_ - 2 * index); }
  int index_of(HalfInt m) const { return (two_j_ - m.twice()) / 2; }

  bool operator==(const SpinQuantumNumber&) const = default;
  std::string to_string() const { return half_int().to_string(); }

 private:
  int two_j_;
};

struct DensityCheck {
  double hermiticity_error = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;
  bool hermitian = false;
  bool normalized = false;
  bool positive = false;

  bool ok() const { return hermitian && normalized && positive; }
  std::string describe() const;
};

DensityCheck check_density_matrix(const Matrix& rho, double tol);

/// Density matrix of a spin-j system in the basis m = j, j-1, ..., -j.
class SpinState {
 public:
  /// Validates Hermiticity, unit trace and positivity within `tol`.
  static SpinState from_matrix(SpinQuantumNumber spin, Matrix rho, double tol = kInputTolerance);
  /// Skips validation; the Hermitian part is still taken.
  static SpinState unchecked(SpinQuantumNumber spin, Matrix rho);
  static SpinState maximally_mixed(SpinQuantumNumber spin);

  SpinQuantumNumber spin() const { return spin_; }
  int dim() const { return spin_.dim(); }
  const Matrix& matrix() const { return rho_; }
  double purity() const;
  /// Eigenvalues in ascending order.
  Eigen::VectorXd spectrum() const;

 private:
  SpinState(SpinQuantumNumber spin, Matrix rho) : spin_(spin), rho_(std::move(rho)) {}
  SpinQuantumNumber spin_;
  Matrix rho_;
};

class PureSpinState {
 public:
  static PureSpinState from_amplitudes(SpinQuantumNumber spin, Vector psi, double tol = kInputTolerance);
  /// Rescales `psi` to unit norm. Throws DomainError on the zero vector.
  static PureSpinState normalized(SpinQuantumNumber spin, Vector psi);
  /// Dicke state |j, m>.
  static PureSpinState basis(SpinQuantumNumber spin, HalfInt m);

  SpinQuantumNumber spin() const { return spin_; }
  int dim() const { return spin_.dim(); }
  const Vector& amplitudes() const { return psi_; }
  cplx amplitude(HalfInt m) const { return psi_(spin_.index_of(m)); }
  SpinState density() const;

 private:
  PureSpinState(SpinQuantumNumber spin, Vector psi) : spin_(spin), psi_(std::move(psi)) {}
  SpinQuantumNumber spin_;
  Vector psi_;
};

// ---------------------------------------------------------------------------
// Clebsch-Gordan coefficients and irreducible tensor operators

/// <j1 m1; j2 m2 | J M> in the Condon-Shortley convention. Returns 0 when the
/// selection rules (M = m1 + m2, triangle, integrality of j1 + j2 + J) fail.
/// Throws DomainError on malformed quantum numbers (|m| > j, mixed parity, j < 0).
double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M);

struct TensorOperator {
  SpinQuantumNumber spin;
  int L;
  int M;
  Matrix matrix;
};

/// T_LM with Tr(T_LM^dagger T_L'M') = delta_LL' delta_MM'.
TensorOperator tensor_operator(SpinQuantumNumber spin, int L, int M);

/// Sparse precomputed T_LM entries for one spin; T_LM is real with entries on
/// the M-th subdiagonal only.
class TensorBasis {
 public:
  struct Entry {
    int row;
    int col;
    double value;
  };

  explicit TensorBasis(SpinQuantumNumber spin);

  SpinQuantumNumber spin() const { return spin_; }
  int max_rank() const { return spin_.two_j(); }
  const std::vector<Entry>& entries(int L, int M) const { return entries_[flat(L, M)]; }
  static int flat(int L, int M) { return L * L + (M + L); }

  cplx coefficient(const Matrix& rho, int L, int M) const;
  void accumulate(Matrix& out, int L, int M, cplx coeff) const;

 private:
  SpinQuantumNumber spin_;
  std::vector<std::vector<Entry>> entries_;
};

/// Shared, lazily-built tensor basis for `spin`. Thread safe.
const TensorBasis& tensor_basis(SpinQuantumNumber spin);

/// Multipole moments rho_LM = Tr(T_LM^dagger rho), 0 <= L <= 2j.
class MultipoleVector {
 public:
  MultipoleVector(SpinQuantumNumber spin, std::vector<cplx> coeffs);

  SpinQuantumNumber spin() const { return spin_; }
  int max_rank() const { return spin_.two_j(); }
  cplx operator()(int L, int M) const { return coeffs_[TensorBasis::flat(L, M)]; }
  cplx& at(int L, int M) { return coeffs_[TensorBasis::flat(L, M)]; }
  /// sum_M |rho_LM|^2
  double rank_weight(int L) const;
  /// sum_{L=1}^{t} sum_M |rho_LM|^2
  double cumulative_weight(int t) const;
  /// max over 1 <= L <= t and all M of |rho_LM|
  double max_abs_up_to(int t) const;

 private:
  SpinQuantumNumber spin_;
  std::vector<cplx> coeffs_;
};

MultipoleVector multipoles(const SpinState& rho);
/// Multipoles of an arbitrary (not necessarily Hermitian) operator.
MultipoleVector multipoles_of(SpinQuantumNumber spin, const Matrix& op);
/// sum_LM rho_LM T_LM
Matrix reconstruct(const MultipoleVector& mv);

// ---------------------------------------------------------------------------
// Angular momentum, rotations, coherent states

Matrix spin_z(SpinQuantumNumber spin);
Matrix spin_plus(SpinQuantumNumber spin);
Matrix spin_minus(SpinQuantumNumber spin);
Matrix spin_x(SpinQuantumNumber spin);
Matrix spin_y(SpinQuantumNumber spin);

/// Z-Y-Z Euler angles: U = exp(-i alpha Jz) exp(-i beta Jy) exp(-i gamma Jz).
struct EulerAngles {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

/// Wigner rotation matrix D^j(alpha, beta, gamma), entries <j m'|U|j m>.
Matrix rotation_matrix(SpinQuantumNumber spin, const EulerAngles& angles);
SpinState rotate(const SpinState& rho, const EulerAngles& angles);
PureSpinState rotate(const PureSpinState& psi, const EulerAngles& angles);

/// Spin-coherent state R(theta, phi)|j, j>, with amplitudes
/// sqrt(C(2j, j-m)) cos^{j+m}(theta/2) sin^{j-m}(theta/2) e^{i (j-m) phi}.
PureSpinState coherent_state(SpinQuantumNumber spin, double theta, double phi);

}  // namespace ac
