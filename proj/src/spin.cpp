#include "anticoherence/spin.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <tuple>

#include "anticoherence/exact.hpp"

namespace ac {

namespace {

int parse_int(std::string_view text) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DomainError("not an integer: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

HalfInt HalfInt::parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw DomainError("empty quantum number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const int num = parse_int(text.substr(0, slash));
    const int den = parse_int(text.substr(slash + 1));
    if (den == 1) return HalfInt(2 * num);
    if (den == 2) return HalfInt(num);
    throw DomainError("not a half-integer: '" + std::string(text) + "'");
  }
  if (text.find_first_of(".eE") != std::string_view::npos) {
    return from_double(std::stod(std::string(text)));
  }
  return HalfInt(2 * parse_int(text));
}

HalfInt HalfInt::from_double(double value) {
  const double twice = 2.0 * value;
  const double rounded = std::round(twice);
  if (!std::isfinite(value) || std::abs(twice - rounded) > 1e-9) {
    throw DomainError("not a half-integer: " + std::to_string(value));
  }
  return HalfInt(static_cast<int>(rounded));
}

std::string HalfInt::to_string() const {
  if (is_integer()) return std::to_string(twice_ / 2);
  return std::to_string(twice_) + "/2";
}

SpinQuantumNumber::SpinQuantumNumber(int two_j) : two_j_(two_j) {
  if (two_j < 0) throw DomainError("spin must be non-negative, got 2j = " + std::to_string(two_j));
}

SpinQuantumNumber SpinQuantumNumber::parse(std::string_view text) {
  return SpinQuantumNumber(HalfInt::parse(text).twice());
}

// ---------------------------------------------------------------------------

std::string DensityCheck::describe() const {
  std::ostringstream os;
  os << "hermiticity_error=" << hermiticity_error << " trace_error=" << trace_error
     << " min_eigenvalue=" << min_eigenvalue;
  return os.str();
}

DensityCheck check_density_matrix(const Matrix& rho, double tol) {
  DensityCheck c;
  if (rho.rows() != rho.cols() || rho.rows() == 0) {
    c.hermiticity_error = c.trace_error = std::numeric_limits<double>::infinity();
    c.min_eigenvalue = -std::numeric_limits<double>::infinity();
    return c;
  }
  c.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  c.trace_error = std::abs(rho.trace() - cplx(1.0, 0.0));
  const Matrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  c.min_eigenvalue = es.eigenvalues().minCoeff();
  c.hermitian = c.hermiticity_error <= tol;
  c.normalized = c.trace_error <= tol;
  c.positive = c.min_eigenvalue >= -tol;
  return c;
}

SpinState SpinState::from_matrix(SpinQuantumNumber spin, Matrix rho, double tol) {
  if (rho.rows() != spin.dim() || rho.cols() != spin.dim()) {
    throw ValidationError("density matrix is " + std::to_string(rho.rows()) + "x" +
                          std::to_string(rho.cols()) + ", expected dimension " +
                          std::to_string(spin.dim()));
  }
  const DensityCheck c = check_density_matrix(rho, tol);
  if (!c.ok()) throw ValidationError("invalid density matrix: " + c.describe(), c.min_eigenvalue);
  return unchecked(spin, std::move(rho));
}

SpinState SpinState::unchecked(SpinQuantumNumber spin, Matrix rho) {
  if (rho.rows() != spin.dim() || rho.cols() != spin.dim()) {
    throw ValidationError("density matrix dimension does not match spin " + spin.to_string());
  }
  Matrix herm = 0.5 * (rho + rho.adjoint());
  return SpinState(spin, std::move(herm));
}

SpinState SpinState::maximally_mixed(SpinQuantumNumber spin) {
  return SpinState(spin, Matrix::Identity(spin.dim(), spin.dim()) / static_cast<double>(spin.dim()));
}

double SpinState::purity() const { return rho_.cwiseAbs2().sum(); }

Eigen::VectorXd SpinState::spectrum() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

PureSpinState PureSpinState::from_amplitudes(SpinQuantumNumber spin, Vector psi, double tol) {
  if (psi.size() != spin.dim()) {
    throw ValidationError("amplitude vector has length " + std::to_string(psi.size()) +
                          ", expected " + std::to_string(spin.dim()));
  }
  const double err = std::abs(psi.squaredNorm() - 1.0);
  if (err > tol) throw ValidationError("state is not normalized: |norm^2 - 1| = " + std::to_string(err));
  return PureSpinState(spin, std::move(psi));
}

PureSpinState PureSpinState::normalized(SpinQuantumNumber spin, Vector psi) {
  if (psi.size() != spin.dim()) throw ValidationError("amplitude vector has the wrong length");
  const double n = psi.norm();
  if (n == 0.0) throw DomainError("cannot normalize the zero vector");
  psi /= n;
  return PureSpinState(spin, std::move(psi));
}

PureSpinState PureSpinState::basis(SpinQuantumNumber spin, HalfInt m) {
  if (std::abs(m.twice()) > spin.two_j() || (spin.two_j() - m.twice()) % 2 != 0) {
    throw DomainError("invalid m = " + m.to_string() + " for j = " + spin.to_string());
  }
  Vector psi = Vector::Zero(spin.dim());
  psi(spin.index_of(m)) = 1.0;
  return PureSpinState(spin, std::move(psi));
}

SpinState PureSpinState::density() const {
  return SpinState::unchecked(spin_, psi_ * psi_.adjoint());
}

// ---------------------------------------------------------------------------

namespace {

void check_pair(HalfInt j, HalfInt m) {
  if (j.twice() < 0) throw DomainError("negative angular momentum " + j.to_string());
  if (std::abs(m.twice()) > j.twice()) {
    throw DomainError("|m| > j for j = " + j.to_string() + ", m = " + m.to_string());
  }
  if ((j.twice() - m.twice()) % 2 != 0) {
    throw DomainError("j and m must both be integer or both half-integer (j = " + j.to_string() +
                      ", m = " + m.to_string() + ")");
  }
}

using CgKey = std::tuple<int, int, int, int, int, int>;

struct CgCache {
  std::shared_mutex mutex;
  std::map<CgKey, double> values;
};

CgCache& cg_cache() {
  static CgCache cache;
  return cache;
}

}  // namespace

double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M) {
  check_pair(j1, m1);
  check_pair(j2, m2);
  check_pair(J, M);
  if (m1 + m2 != M) return 0.0;
  if (J.twice() < std::abs(j1.twice() - j2.twice()) || J.twice() > j1.twice() + j2.twice()) return 0.0;
  if ((j1.twice() + j2.twice() + J.twice()) % 2 != 0) return 0.0;

  const CgKey key{j1.twice(), m1.twice(), j2.twice(), m2.twice(), J.twice(), M.twice()};
  auto& cache = cg_cache();
  {
    std::shared_lock lock(cache.mutex);
    if (auto it = cache.values.find(key); it != cache.values.end()) return it->second;
  }
  const double value = exact::clebsch_gordan(j1, m1, j2, m2, J, M).to_double();
  std::unique_lock lock(cache.mutex);
  cache.values.emplace(key, value);
  return value;
}

TensorBasis::TensorBasis(SpinQuantumNumber spin) : spin_(spin) {
  const int two_j = spin.two_j();
  const int dim = spin.dim();
  entries_.resize((two_j + 1) * (two_j + 1));
  const HalfInt j = spin.half_int();
  for (int L = 0; L <= two_j; ++L) {
    const double norm = std::sqrt((2.0 * L + 1.0) / dim);
    for (int M = -L; M <= L; ++M) {
      auto& list = entries_[flat(L, M)];
      // (T_LM)_{m', m} = sqrt((2L+1)/(2j+1)) <j m; L M | j m'>, m' = m + M.
      for (int col = 0; col < dim; ++col) {
        const HalfInt m = spin.m_at(col);
        const HalfInt mp = m + HalfInt::integer(M);
        if (std::abs(mp.twice()) > two_j) continue;
        const double cg = clebsch_gordan(j, m, HalfInt::integer(L), HalfInt::integer(M), j, mp);
        if (cg != 0.0) list.push_back({spin.index_of(mp), col, norm * cg});
      }
    }
  }
}

cplx TensorBasis::coefficient(const Matrix& rho, int L, int M) const {
  cplx acc = 0.0;
  for (const auto& e : entries_[flat(L, M)]) acc += e.value * rho(e.row, e.col);
  return acc;
}

void TensorBasis::accumulate(Matrix& out, int L, int M, cplx coeff) const {
  for (const auto& e : entries_[flat(L, M)]) out(e.row, e.col) += coeff * e.value;
}

const TensorBasis& tensor_basis(SpinQuantumNumber spin) {
  static std::shared_mutex mutex;
  static std::map<int, std::unique_ptr<TensorBasis>> bases;
  {
    std::shared_lock lock(mutex);
    if (auto it = bases.find(spin.two_j()); it != bases.end()) return *it->second;
  }
  auto basis = std::make_unique<TensorBasis>(spin);
  std::unique_lock lock(mutex);
  auto [it, inserted] = bases.emplace(spin.two_j(), std::move(basis));
  return *it->second;
}

TensorOperator tensor_operator(SpinQuantumNumber spin, int L, int M) {
  if (L < 0 || L > spin.two_j()) {
    throw DomainError("tensor rank L = " + std::to_string(L) + " outside [0, 2j] for j = " +
                      spin.to_string());
  }
  if (std::abs(M) > L) throw DomainError("|M| > L in tensor operator");
  Matrix T = Matrix::Zero(spin.dim(), spin.dim());
  tensor_basis(spin).accumulate(T, L, M, 1.0);
  return {spin, L, M, std::move(T)};
}

MultipoleVector::MultipoleVector(SpinQuantumNumber spin, std::vector<cplx> coeffs)
    : spin_(spin), coeffs_(std::move(coeffs)) {
  const std::size_t expected = static_cast<std::size_t>(spin.dim()) * spin.dim();
  if (coeffs_.size() != expected) throw DomainError("multipole vector has the wrong length");
}

double MultipoleVector::rank_weight(int L) const {
  double w = 0.0;
  for (int M = -L; M <= L; ++M) w += std::norm((*this)(L, M));
  return w;
}

double MultipoleVector::cumulative_weight(int t) const {
  double w = 0.0;
  for (int L = 1; L <= t; ++L) w += rank_weight(L);
  return w;
}

double MultipoleVector::max_abs_up_to(int t) const {
  double m = 0.0;
  for (int L = 1; L <= std::min(t, max_rank()); ++L) {
    for (int M = -L; M <= L; ++M) m = std::max(m, std::abs((*this)(L, M)));
  }
  return m;
}

MultipoleVector multipoles_of(SpinQuantumNumber spin, const Matrix& op) {
  const auto& basis = tensor_basis(spin);
  std::vector<cplx> coeffs(static_cast<std::size_t>(spin.dim()) * spin.dim());
  for (int L = 0; L <= spin.two_j(); ++L) {
    for (int M = -L; M <= L; ++M) coeffs[TensorBasis::flat(L, M)] = basis.coefficient(op, L, M);
  }
  return MultipoleVector(spin, std::move(coeffs));
}

MultipoleVector multipoles(const SpinState& rho) { return multipoles_of(rho.spin(), rho.matrix()); }

Matrix reconstruct(const MultipoleVector& mv) {
  const auto spin = mv.spin();
  const auto& basis = tensor_basis(spin);
  Matrix out = Matrix::Zero(spin.dim(), spin.dim());
  for (int L = 0; L <= spin.two_j(); ++L) {
    for (int M = -L; M <= L; ++M) basis.accumulate(out, L, M, mv(L, M));
  }
  return out;
}

// ---------------------------------------------------------------------------

Matrix spin_z(SpinQuantumNumber spin) {
  Matrix Jz = Matrix::Zero(spin.dim(), spin.dim());
  for (int k = 0; k < spin.dim(); ++k) Jz(k, k) = spin.m_at(k).value();
  return Jz;
}

Matrix spin_plus(SpinQuantumNumber spin) {
  Matrix Jp = Matrix::Zero(spin.dim(), spin.dim());
  const double j = spin.j();
  // J+ |j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>, and m+1 sits at index k-1.
  for (int k = 1; k < spin.dim(); ++k) {
    const double m = spin.m_at(k).value();
    Jp(k - 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  return Jp;
}

Matrix spin_minus(SpinQuantumNumber spin) { return spin_plus(spin).adjoint(); }

Matrix spin_x(SpinQuantumNumber spin) {
  const Matrix Jp = spin_plus(spin);
  return 0.5 * (Jp + Jp.adjoint());
}

Matrix spin_y(SpinQuantumNumber spin) {
  const Matrix Jp = spin_plus(spin);
  return (Jp - Jp.adjoint()) / cplx(0.0, 2.0);
}

namespace {

struct JyEigen {
  Eigen::VectorXd values;
  Matrix vectors;
};

const JyEigen& jy_eigen(SpinQuantumNumber spin) {
  static std::mutex mutex;
  static std::map<int, JyEigen> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(spin.two_j());
  if (it == cache.end()) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(spin_y(spin));
    it = cache.emplace(spin.two_j(), JyEigen{es.eigenvalues(), es.eigenvectors()}).first;
  }
  return it->second;
}

}  // namespace

Matrix rotation_matrix(SpinQuantumNumber spin, const EulerAngles& angles) {
  const int d = spin.dim();
  const JyEigen& jy = jy_eigen(spin);
  Matrix phases = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) phases(k, k) = std::polar(1.0, -angles.beta * jy.values(k));
  const Matrix dy = jy.vectors * phases * jy.vectors.adjoint();
  Matrix U(d, d);
  for (int r = 0; r < d; ++r) {
    const double mr = spin.m_at(r).value();
    for (int c = 0; c < d; ++c) {
      const double mc = spin.m_at(c).value();
      U(r, c) = std::polar(1.0, -angles.alpha * mr - angles.gamma * mc) * dy(r, c);
    }
  }
  return U;
}

SpinState rotate(const SpinState& rho, const EulerAngles& angles) {
  const Matrix U = rotation_matrix(rho.spin(), angles);
  return SpinState::unchecked(rho.spin(), U * rho.matrix() * U.adjoint());
}

PureSpinState rotate(const PureSpinState& psi, const EulerAngles& angles) {
  const Matrix U = rotation_matrix(psi.spin(), angles);
  return PureSpinState::normalized(psi.spin(), U * psi.amplitudes());
}

PureSpinState coherent_state(SpinQuantumNumber spin, double theta, double phi) {
  const int N = spin.two_j();
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  Vector psi(spin.dim());
  double log_binom_n = std::lgamma(N + 1.0);
  for (int k = 0; k < spin.dim(); ++k) {
    // k = j - m down-steps
    const double log_binom = log_binom_n - std::lgamma(k + 1.0) - std::lgamma(N - k + 1.0);
    const double mag = std::exp(0.5 * log_binom) * std::pow(c, N - k) * std::pow(s, k);
    psi(k) = std::polar(mag, k * phi);
  }
  return PureSpinState::normalized(spin, std::move(psi));
}

}  // namespace ac
