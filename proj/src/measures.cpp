#include "anticoherence/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "anticoherence/exact.hpp"
#include "anticoherence/reduction.hpp"

namespace ac {

MeasureSpec MeasureSpec::schatten(double p) {
  if (!(p >= 1.0)) throw DomainError("Schatten index p must be >= 1");
  return {MeasureKind::Schatten, p};
}

MeasureSpec MeasureSpec::parse(std::string_view name) {
  if (name == "purity") return purity();
  if (name == "hs") return schatten(2.0);
  if (name == "trace") return schatten(1.0);
  if (name == "fidelity") return fidelity();
  if (name == "cm") return cm();
  if (name.rfind("schatten:", 0) == 0) {
    try {
      return schatten(std::stod(std::string(name.substr(9))));
    } catch (const std::invalid_argument&) {
      throw DomainError("bad Schatten index in '" + std::string(name) + "'");
    }
  }
  throw DomainError("unknown measure kind '" + std::string(name) +
                    "' (expected purity, hs, trace, fidelity, cm or schatten:P)");
}

std::string MeasureSpec::name() const {
  switch (kind) {
    case MeasureKind::Purity: return "purity";
    case MeasureKind::Fidelity: return "fidelity";
    case MeasureKind::CumulativeMultipole: return "cm";
    case MeasureKind::Schatten: {
      if (p == 2.0) return "hs";
      if (p == 1.0) return "trace";
      std::ostringstream os;
      os << "schatten:" << p;
      return os.str();
    }
  }
  return "unknown";
}

bool MeasureSpec::conjectural_t4() const {
  return kind == MeasureKind::Fidelity || (kind == MeasureKind::Schatten && p != 2.0);
}

bool MeasureSpec::has_quantum_counterpart(int t) const {
  switch (kind) {
    case MeasureKind::Purity:
    case MeasureKind::Fidelity: return true;
    case MeasureKind::Schatten: return p == 2.0;
    case MeasureKind::CumulativeMultipole: return t == 1;
  }
  return false;
}

Eigen::VectorXd clamped_spectrum(const Matrix& X) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(X, Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index k = 0; k < ev.size(); ++k) ev(k) = std::max(ev(k), 0.0);
  return ev;
}

double total_purity(const SpinState& rho, int t) {
  const Matrix rt = reduce(rho, t).matrix();
  return (t + 1.0) / t * (1.0 - rt.cwiseAbs2().sum());
}

double schatten_normalizer(int t, double p) {
  if (!(p >= 1.0)) throw DomainError("Schatten index p must be >= 1");
  if (t < 1) throw DomainError("t must be >= 1");
  const double d = t + 1.0;
  return std::pow(std::pow(t / d, p) + t * std::pow(1.0 / d, p), 1.0 / p);
}

double schatten_distance(const Matrix& a, const Matrix& b, double p) {
  if (!(p >= 1.0)) throw DomainError("Schatten index p must be >= 1");
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DomainError("Schatten distance: dimension mismatch");
  const Matrix diff = a - b;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
  double acc = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) acc += std::pow(std::abs(es.eigenvalues()(k)), p);
  return std::pow(acc, 1.0 / p);
}

double total_distance(const SpinState& rho, int t, double p) {
  if (!(p >= 1.0)) throw DomainError("Schatten index p must be >= 1");
  const Matrix rt = reduce(rho, t).matrix();
  const Matrix mms = Matrix::Identity(t + 1, t + 1) / static_cast<double>(t + 1);
  return 1.0 - schatten_distance(rt, mms, p) / schatten_normalizer(t, p);
}

double marginal_trace_sqrt(const SpinState& rho, int t) {
  const auto spin = rho.spin();
  if (t < 1 || t > spin.two_j()) throw DomainError("t must satisfy 1 <= t <= 2j");
  // rho_t = F F^dagger with F = [sqrt(l_k) X_k], X_k the amplitude matrices of the eigenvectors;
  // the singular values of F are the square roots of the spectrum of rho_t, to full accuracy.
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  const int dB = spin.two_j() - t + 1;
  // Eigenvalues at roundoff level would otherwise add their square roots, about 1e-8.
  const double floor = spin.dim() * std::numeric_limits<double>::epsilon() * es.eigenvalues().cwiseAbs().maxCoeff();
  std::vector<int> keep;
  for (int k = 0; k < spin.dim(); ++k) {
    if (es.eigenvalues()(k) > floor) keep.push_back(k);
  }
  Matrix F = Matrix::Zero(t + 1, dB * std::max<std::size_t>(keep.size(), 1));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    const int k = keep[i];
    F.middleCols(i * dB, dB) =
        std::sqrt(es.eigenvalues()(k)) * bipartite_amplitudes(es.eigenvectors().col(k), spin, t);
  }
  Eigen::JacobiSVD<Matrix> svd(F);
  return svd.singularValues().sum();
}

double total_fidelity(const SpinState& rho, int t) {
  const double s = marginal_trace_sqrt(rho, t);
  return (s * s - 1.0) / t;
}

namespace {

Matrix psd_sqrt(const Matrix& X) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (X + X.adjoint()));
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index k = 0; k < ev.size(); ++k) ev(k) = std::sqrt(std::max(ev(k), 0.0));
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double uhlmann_fidelity(const Matrix& sigma, const Matrix& tau) {
  if (sigma.rows() != tau.rows() || sigma.cols() != tau.cols()) throw DomainError("fidelity: dimension mismatch");
  const Matrix s = psd_sqrt(sigma);
  const double tr = clamped_spectrum(s * tau * s).cwiseSqrt().sum();
  return std::min(1.0, tr * tr);
}

double bures_distance(const SpinState& sigma, const SpinState& tau) {
  if (!(sigma.spin() == tau.spin())) throw DomainError("Bures distance: dimension mismatch");
  const double f = uhlmann_fidelity(sigma.matrix(), tau.matrix());
  return std::sqrt(std::max(0.0, 2.0 * (1.0 - std::sqrt(f))));
}

double cumulative_multipole(const SpinState& rho, int t) {
  const auto spin = rho.spin();
  if (t < 1 || t > spin.two_j()) throw DomainError("cumulative multipole needs 1 <= t <= 2j");
  const auto& basis = tensor_basis(spin);
  double acc = 0.0;
  for (int L = 1; L <= t; ++L) {
    for (int M = -L; M <= L; ++M) acc += std::norm(basis.coefficient(rho.matrix(), L, M));
  }
  return acc;
}

double coherent_cumulative_multipole(SpinQuantumNumber spin, int t) {
  return exact::to_double(exact::coherent_cumulative_multipole(spin.two_j(), t));
}

double total_cm(const SpinState& rho, int t) {
  const auto spin = rho.spin();
  if (t < 1 || t > spin.two_j() - 1) {
    throw DomainError("cumulative-multipole measure is defined for 1 <= t <= 2j-1 (t = " +
                      std::to_string(t) + ", 2j = " + std::to_string(spin.two_j()) + ")");
  }
  return 1.0 - cumulative_multipole(rho, t) / coherent_cumulative_multipole(spin, t);
}

double total_measure(const SpinState& rho, int t, const MeasureSpec& spec) {
  switch (spec.kind) {
    case MeasureKind::Purity: return total_purity(rho, t);
    case MeasureKind::Schatten: return total_distance(rho, t, spec.p);
    case MeasureKind::Fidelity: return total_fidelity(rho, t);
    case MeasureKind::CumulativeMultipole: return total_cm(rho, t);
  }
  throw DomainError("unknown measure kind");
}

}  // namespace ac
