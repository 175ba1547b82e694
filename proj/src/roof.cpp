#include "anticoherence/roof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "anticoherence/entanglement.hpp"
#include "anticoherence/parallel.hpp"
#include "anticoherence/random.hpp"
#include "anticoherence/reduction.hpp"
#include "simplex.hpp"

namespace ac {

Matrix Ensemble::reconstruct() const {
  Matrix out = Matrix::Zero(spin.dim(), spin.dim());
  for (const auto& m : members) out += m.weight * m.psi * m.psi.adjoint();
  return out;
}

double Ensemble::reconstruction_error(const Matrix& rho) const {
  return (reconstruct() - rho).cwiseAbs().maxCoeff();
}

double Ensemble::total_weight() const {
  double w = 0.0;
  for (const auto& m : members) w += m.weight;
  return w;
}

Ensemble Ensemble::eigen(const SpinState& rho, double cutoff) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  Ensemble e{rho.spin(), {}};
  for (Eigen::Index k = es.eigenvalues().size() - 1; k >= 0; --k) {
    if (es.eigenvalues()(k) > cutoff) e.members.push_back({es.eigenvalues()(k), es.eigenvectors().col(k)});
  }
  return e;
}

std::string to_string(Certification c) { return c == Certification::Analytic ? "analytic" : "heuristic"; }

double RoofFunctional::pure_value(const PureSpinState& psi, int t) const {
  const Matrix X = bipartite_amplitudes(psi.amplitudes(), psi.spin(), t);
  const Matrix R = X.rows() <= X.cols() ? Matrix(X * X.adjoint()) : Matrix(X.adjoint() * X);
  return evaluate(R, nullptr, 0.0);
}

namespace {

// (t+1)/t (1 - Tr rho_t^2) scaled by the member weight S = Tr R: c (S - Q/S).
class PurityFunctional final : public RoofFunctional {
 public:
  explicit PurityFunctional(int t) : c_((t + 1.0) / t) {}
  double evaluate(const Matrix& R, Matrix* H, double) const override {
    const double S = R.trace().real();
    const Eigen::Index n = R.rows();
    if (S <= 1e-300) {
      if (H) *H = c_ * Matrix::Identity(n, n);
      return 0.0;
    }
    const double Q = R.cwiseAbs2().sum();
    if (H) *H = c_ * ((1.0 + Q / (S * S)) * Matrix::Identity(n, n) - (2.0 / S) * R);
    return c_ * (S - Q / S);
  }
  std::string name() const override { return "purity"; }

 private:
  double c_;
};

// S (1 - ||rho_t - 1/(t+1)||_2 / K) = S - sqrt(Q - S^2/(t+1)) / K.
class HsFunctional final : public RoofFunctional {
 public:
  explicit HsFunctional(int t) : d_(t + 1.0), K_(schatten_normalizer(t, 2.0)) {}
  double evaluate(const Matrix& R, Matrix* H, double eps) const override {
    const double S = R.trace().real();
    const double Q = R.cwiseAbs2().sum();
    const Eigen::Index n = R.rows();
    const double D = std::max(Q - S * S / d_, 0.0);
    const double root = std::sqrt(D + eps * eps * S * S);
    if (H) {
      *H = Matrix::Identity(n, n);
      if (root > 1e-300) {
        *H -= (R + (eps * eps * S - S / d_) * Matrix::Identity(n, n)) / (K_ * root);
      }
    }
    return S - root / K_;
  }
  std::vector<double> smoothing_schedule() const override { return {1e-3, 1e-5, 1e-7}; }
  std::string name() const override { return "hs"; }

 private:
  double d_;
  double K_;
};

// sum_{i<k} sqrt(mu_i mu_k) over the spectrum of R; smoothed by mu -> mu + (eps Tr R)^2.
class NegativityFunctional final : public RoofFunctional {
 public:
  double evaluate(const Matrix& R, Matrix* H, double eps) const override {
    Eigen::SelfAdjointEigenSolver<Matrix> es(R, H ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& mu = es.eigenvalues();
    const Eigen::Index n = mu.size();
    Eigen::VectorXd s(n);
    const double S = R.trace().real();
    const double shift = eps * eps * S * S;
    for (Eigen::Index k = 0; k < n; ++k) s(k) = std::sqrt(std::max(mu(k), 0.0) + shift);
    const double sum = s.sum();
    if (H) {
      Eigen::VectorXd w(n);
      double trace_part = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) {
        const double sk = std::max(s(k), 1e-150);
        w(k) = sum / (2.0 * sk) - 0.5;
        trace_part += (sum - s(k)) * eps * eps * S / sk;
      }
      *H = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
      H->diagonal().array() += trace_part;
    }
    return 0.5 * (sum * sum - s.squaredNorm());
  }
  std::vector<double> smoothing_schedule() const override { return {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7}; }
  std::string name() const override { return "negativity"; }
};

double inner(const Matrix& a, const Matrix& b) { return (a.conjugate().cwiseProduct(b)).sum().real(); }

Matrix project_tangent(const Matrix& V, const Matrix& X) {
  const Matrix A = V.adjoint() * X;
  return X - V * (0.5 * (A + A.adjoint()));
}

Matrix retract(const Matrix& Y) {
  Eigen::JacobiSVD<Matrix> svd(Y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

// Ensemble members are M_i = sum_k V_ik B_k with B_k the amplitude matrix of sqrt(lambda_k) e_k.
struct RoofProblem {
  const RoofFunctional& f;
  std::vector<Matrix> B;
  bool left;  // R = M M^dagger when true, M^dagger M otherwise
  Vector scale;  // sqrt(lambda_k)

  int rank() const { return static_cast<int>(B.size()); }

  double value(const Matrix& V, double eps, Matrix* grad) const {
    const int m = static_cast<int>(V.rows());
    const int r = rank();
    if (grad) grad->setZero(m, r);
    double total = 0.0;
    Matrix Mi(B[0].rows(), B[0].cols());
    Matrix H;
    for (int i = 0; i < m; ++i) {
      Mi.setZero();
      for (int k = 0; k < r; ++k) Mi += V(i, k) * B[k];
      const Matrix R = left ? Matrix(Mi * Mi.adjoint()) : Matrix(Mi.adjoint() * Mi);
      total += f.evaluate(R, grad ? &H : nullptr, eps);
      if (grad) {
        const Matrix G = left ? Matrix(H * Mi) : Matrix(Mi * H);
        for (int k = 0; k < r; ++k) (*grad)(i, k) = 2.0 * (B[k].conjugate().cwiseProduct(G)).sum();
      }
    }
    return total;
  }
};

// Riemannian conjugate gradient (Polak-Ribiere+) on the complex Stiefel manifold with an
// Armijo backtracking line search and polar retraction.
template <class Problem>
void minimize(const Problem& P, Matrix& V, double eps, int max_iterations) {
  Matrix Z;
  double fv = P.value(V, eps, &Z);
  Matrix xi = project_tangent(V, Z);
  Matrix d = -xi;
  double step = 0.0;
  int stall = 0;
  for (int it = 0; it < max_iterations; ++it) {
    const double g2 = inner(xi, xi);
    if (g2 < 1e-24) break;
    double slope = inner(xi, d);
    if (slope >= -1e-300) {
      d = -xi;
      slope = -g2;
    }
    const double dnorm = std::sqrt(inner(d, d));
    double tau = step > 0.0 ? std::min(step, 1.0 / dnorm) : 1.0 / dnorm;
    Matrix Vn;
    double fn = fv;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      Vn = retract(V + tau * d);
      fn = P.value(Vn, eps, nullptr);
      if (fn <= fv + 1e-4 * tau * slope) {
        accepted = true;
        break;
      }
      tau *= 0.5;
    }
    if (!accepted) break;
    Matrix Zn;
    fn = P.value(Vn, eps, &Zn);
    const Matrix xin = project_tangent(Vn, Zn);
    const double beta = std::max(0.0, inner(xin, xin - project_tangent(Vn, xi)) / g2);
    d = -xin + beta * project_tangent(Vn, d);
    const double gain = fv - fn;
    V = std::move(Vn);
    fv = fn;
    xi = xin;
    step = 4.0 * tau;
    if (gain <= 1e-15 * (1.0 + std::abs(fv))) {
      if (++stall >= 8) break;
    } else {
      stall = 0;
    }
  }
}

// Reduced cost f(u) - u^dagger W u of one member with unit coefficient column u (r x 1).
struct PricingProblem {
  const RoofProblem& roof;
  Matrix W;

  double value(const Matrix& u, double eps, Matrix* grad) const {
    Matrix g;
    double v = roof.value(u.transpose(), eps, grad ? &g : nullptr);
    const Vector Wu = W * u.col(0);
    v -= u.col(0).dot(Wu).real();
    if (grad) *grad = g.transpose() - 2.0 * Wu;
    return v;
  }
};

struct Seed {
  Matrix V;
  double value = 0.0;
};

// min sum_j x_j f(u_j) subject to sum_j x_j u_j u_j^dagger = 1, x >= 0, over a column pool that
// grows with local minimizers of the reduced cost until none is negative.
std::optional<Seed> column_generation(const RoofProblem& P, const std::vector<double>& ladder,
                                      const RoofOptions& opts) {
  const int r = P.rank();
  const int rows = r * r;
  const double root2 = std::sqrt(2.0);
  std::vector<Vector> pool;
  std::vector<double> costs;
  Eigen::MatrixXd A(rows, 0);
  auto add = [&](const Vector& v) {
    const Vector u = v.normalized();
    Eigen::VectorXd a(rows);
    int i = 0;
    for (int k = 0; k < r; ++k) a(i++) = std::norm(u(k));
    for (int k = 0; k < r; ++k) {
      for (int l = k + 1; l < r; ++l) {
        const cplx z = u(k) * std::conj(u(l));
        a(i++) = root2 * z.real();
        a(i++) = root2 * z.imag();
      }
    }
    A.conservativeResize(Eigen::NoChange, A.cols() + 1);
    A.col(A.cols() - 1) = a;
    costs.push_back(P.value(u.transpose(), 0.0, nullptr));
    pool.push_back(u);
  };
  // Candidates come from two measures: Haar in the whitened coordinates u, and Haar on the
  // physical support (u_k proportional to c_k / sqrt(lambda_k)), which reaches states
  // dominated by small-weight eigenvectors.
  Rng rng = derive_rng(opts.seed, 0xc0111u);
  auto sample = [&](int s) -> Vector {
    Vector v = haar_vector(r, rng);
    if (s % 2 == 1) v = v.cwiseQuotient(P.scale);
    return v.normalized();
  };
  for (int k = 0; k < r; ++k) add(Vector::Unit(r, k));
  for (int s = 0; s < 16 * r; ++s) add(sample(s));
  Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
  b.head(r).setOnes();

  detail::LpSolution lp;
  for (int round = 0; round < 40; ++round) {
    lp = detail::solve_lp(A, b, Eigen::Map<const Eigen::VectorXd>(costs.data(), static_cast<Eigen::Index>(costs.size())));
    if (!lp.feasible) return std::nullopt;
    PricingProblem pricing{P, Matrix::Zero(r, r)};
    int i = 0;
    for (int k = 0; k < r; ++k) pricing.W(k, k) = lp.y(i++);
    for (int k = 0; k < r; ++k) {
      for (int l = k + 1; l < r; ++l) {
        pricing.W(k, l) = cplx(lp.y(i), lp.y(i + 1)) / root2;
        pricing.W(l, k) = std::conj(pricing.W(k, l));
        i += 2;
      }
    }
    std::vector<Vector> starts;
    for (Eigen::Index j = 0; j < lp.x.size(); ++j) {
      if (lp.x(j) > 1e-12) starts.push_back(pool[j] + 0.05 * haar_vector(r, rng));
    }
    // Screen a batch of random candidates and refine the most negative ones.
    std::vector<std::pair<double, Vector>> screened;
    for (int s = 0; s < 256 * r; ++s) {
      Vector v = sample(s);
      const double reduced = pricing.value(v, 0.0, nullptr);
      screened.emplace_back(reduced, std::move(v));
    }
    std::partial_sort(screened.begin(), screened.begin() + 16, screened.end(),
                      [](const auto& a, const auto& c) { return a.first < c.first; });
    for (int s = 0; s < 16; ++s) starts.push_back(std::move(screened[s].second));
    int added = 0;
    for (const Vector& start : starts) {
      Matrix u = start.normalized();
      for (double eps : ladder) minimize(pricing, u, eps, 500);
      if (pricing.value(u, 0.0, nullptr) < -1e-11) {
        add(u.col(0));
        ++added;
      }
    }
    if (added == 0) break;
  }

  std::vector<Eigen::Index> support;
  for (Eigen::Index j = 0; j < lp.x.size(); ++j) {
    if (lp.x(j) > 1e-15) support.push_back(j);
  }
  if (static_cast<int>(support.size()) < r) return std::nullopt;
  Seed seed;
  seed.V.resize(static_cast<Eigen::Index>(support.size()), r);
  for (std::size_t i = 0; i < support.size(); ++i) {
    seed.V.row(static_cast<Eigen::Index>(i)) = std::sqrt(lp.x(support[i])) * pool[support[i]].transpose();
  }
  seed.V = retract(seed.V);
  seed.value = P.value(seed.V, 0.0, nullptr);
  return seed;
}

Ensemble ensemble_from(const Matrix& V, const Eigen::MatrixXcd& b, SpinQuantumNumber spin) {
  Ensemble e{spin, {}};
  const Matrix members = b * V.transpose();  // column i is sum_k V_ik b_k
  for (Eigen::Index i = 0; i < members.cols(); ++i) {
    const double w = members.col(i).squaredNorm();
    if (w > 1e-14) e.members.push_back({w, members.col(i) / std::sqrt(w)});
  }
  std::stable_sort(e.members.begin(), e.members.end(),
                   [](const EnsembleMember& a, const EnsembleMember& c) { return a.weight > c.weight; });
  return e;
}

void check_roof_t(const SpinState& rho, int t) {
  if (t < 1 || t > rho.spin().two_j()) {
    throw DomainError("t = " + std::to_string(t) + " outside [1, 2j] for j = " + rho.spin().to_string());
  }
}

}  // namespace

std::unique_ptr<RoofFunctional> make_functional(RoofKind kind, int t) {
  if (t < 1) throw DomainError("t must be >= 1");
  switch (kind) {
    case RoofKind::Purity: return std::make_unique<PurityFunctional>(t);
    case RoofKind::HilbertSchmidt: return std::make_unique<HsFunctional>(t);
    case RoofKind::Negativity: return std::make_unique<NegativityFunctional>();
  }
  throw DomainError("unknown roof kind");
}

RoofResult convex_roof(const SpinState& rho, const RoofFunctional& f, int t, const RoofOptions& opts) {
  check_roof_t(rho, t);
  const DensityCheck chk = check_density_matrix(rho.matrix(), kInputTolerance);
  if (!chk.ok()) throw ValidationError("convex roof needs a density matrix: " + chk.describe(), chk.min_eigenvalue);
  if (opts.restarts < 1) throw DomainError("restarts must be >= 1");

  const auto spin = rho.spin();
  const Ensemble eig = Ensemble::eigen(rho, opts.rank_cutoff);
  const int r = static_cast<int>(eig.members.size());
  RoofResult result;
  result.ensemble = eig;

  if (r == 1) {
    const PureSpinState psi = PureSpinState::normalized(spin, eig.members[0].psi);
    result.value = f.pure_value(psi, t);
    result.ensemble.members[0].weight = 1.0;
    result.certified = Certification::Analytic;
    result.method = "pure";
    result.restart_values = {result.value};
    return result;
  }

  const int m = opts.ensemble_size > 0 ? opts.ensemble_size : std::max(r, std::min(r * r, 16));
  if (m < r) {
    throw DomainError("ensemble size " + std::to_string(m) + " is below the rank " + std::to_string(r));
  }

  Eigen::MatrixXcd b(spin.dim(), r);
  RoofProblem problem{f, {}, (t + 1) <= (spin.two_j() - t + 1), Vector()};
  for (int k = 0; k < r; ++k) {
    b.col(k) = std::sqrt(eig.members[k].weight) * eig.members[k].psi;
    problem.B.push_back(bipartite_amplitudes(b.col(k), spin, t));
  }
  problem.scale.resize(r);
  for (int k = 0; k < r; ++k) problem.scale(k) = std::sqrt(eig.members[k].weight);

  const std::vector<double> ladder = f.smoothing_schedule();
  std::vector<double> values(opts.restarts);
  std::vector<Matrix> points(opts.restarts);
  parallel_for(
      static_cast<std::size_t>(opts.restarts),
      [&](std::size_t i) {
        Matrix V;
        if (i == 0) {
          V = Matrix::Identity(m, r);
        } else {
          Rng rng = derive_rng(opts.seed, i);
          V = haar_isometry(m, r, rng);
        }
        for (double eps : ladder) minimize(problem, V, eps, opts.max_iterations);
        values[i] = problem.value(V, 0.0, nullptr);
        points[i] = std::move(V);
      },
      opts.threads);

  if (opts.column_generation && ladder.back() > 0.0) {
    if (auto seed = column_generation(problem, ladder, opts)) {
      Matrix V = seed->V;
      minimize(problem, V, ladder.back(), opts.max_iterations);
      const double polished = problem.value(V, 0.0, nullptr);
      if (polished < seed->value) {
        seed->V = std::move(V);
        seed->value = polished;
      }
      values.push_back(seed->value);
      points.push_back(std::move(seed->V));
    }
  }

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) { return values[a] < values[c]; });
  const std::size_t best = order[0];
  result.value = values[best];
  result.ensemble = ensemble_from(points[best], b, spin);
  result.certified = Certification::Heuristic;
  result.method = "stiefel-cg";
  result.restarts = static_cast<int>(values.size());
  for (std::size_t i : order) result.restart_values.push_back(values[i]);
  result.best_gap = order.size() > 1 ? values[order[1]] - values[best] : 0.0;
  result.converged = result.best_gap <= opts.tol;
  return result;
}

bool support_is_ac_subspace(const SpinState& rho, int t, double tol, double rank_cutoff) {
  const auto spin = rho.spin();
  if (t < 1 || t > spin.two_j()) return false;
  const Ensemble eig = Ensemble::eigen(rho, rank_cutoff);
  const int r = static_cast<int>(eig.members.size());
  Matrix E(spin.dim(), r);
  for (int k = 0; k < r; ++k) E.col(k) = eig.members[k].psi;
  const auto& basis = tensor_basis(spin);
  for (int L = 1; L <= t; ++L) {
    for (int M = -L; M <= L; ++M) {
      Matrix T = Matrix::Zero(spin.dim(), spin.dim());
      basis.accumulate(T, L, M, 1.0);
      if ((E.adjoint() * T * E).cwiseAbs().maxCoeff() > tol) return false;
    }
  }
  Rng rng = derive_rng(0x5eed, static_cast<std::uint64_t>(t));
  for (int s = 0; s < 50; ++s) {
    const Vector v = E * haar_vector(r, rng);
    if (multipoles_of(spin, v * v.adjoint()).max_abs_up_to(t) > tol) return false;
  }
  return true;
}

std::optional<RoofResult> roof_shortcut_ac_subspace(const SpinState& rho, int t, RoofKind kind) {
  if (!support_is_ac_subspace(rho, t)) return std::nullopt;
  RoofResult res;
  res.value = kind == RoofKind::Negativity ? 0.5 * t : 1.0;
  res.ensemble = Ensemble::eigen(rho);
  res.certified = Certification::Analytic;
  res.method = "ac-subspace";
  res.restart_values = {res.value};
  return res;
}

std::optional<RoofResult> roof_shortcut_orthogonal_pt(const SpinState& rho, int t, const Ensemble& candidate) {
  const auto spin = rho.spin();
  if (!(candidate.spin == spin) || t < 1 || t > spin.two_j() - 1 || candidate.members.empty()) return std::nullopt;
  if (candidate.reconstruction_error(rho.matrix()) > 1e-9) return std::nullopt;
  const int dA = t + 1;
  const int dB = spin.two_j() - t + 1;
  const Matrix& W = bipartite_isometry(spin, t);
  std::vector<Matrix> projectors;
  for (const auto& m : candidate.members) {
    if (!(m.weight > 0.0)) return std::nullopt;
    const Vector v = W * m.psi;
    projectors.push_back(v * v.adjoint());
  }
  for (std::size_t a = 0; a < projectors.size(); ++a) {
    for (std::size_t c = a + 1; c < projectors.size(); ++c) {
      if (pt_overlap(projectors[a], projectors[c], dA, dB) >= 1e-10) return std::nullopt;
    }
  }
  RoofResult res;
  for (const auto& m : candidate.members) {
    res.value += m.weight * negativity_pure(PureSpinState::normalized(spin, m.psi), t);
  }
  res.ensemble = candidate;
  res.certified = Certification::Analytic;
  res.method = "orthogonal-pt";
  res.restart_values = {res.value};
  return res;
}

namespace {

RoofResult run_roof(const SpinState& rho, int t, RoofKind kind, const RoofOptions& opts) {
  check_roof_t(rho, t);
  const auto f = make_functional(kind, t);
  if (opts.shortcuts) {
    const Ensemble eig = Ensemble::eigen(rho, opts.rank_cutoff);
    if (eig.members.size() > 1) {
      if (auto sc = roof_shortcut_ac_subspace(rho, t, kind)) return *sc;
      if (kind == RoofKind::Negativity) {
        if (auto sc = roof_shortcut_orthogonal_pt(rho, t, eig)) return *sc;
      }
    }
  }
  return convex_roof(rho, *f, t, opts);
}

}  // namespace

RoofResult negativity_roof(const SpinState& rho, int t, const RoofOptions& opts) {
  return run_roof(rho, t, RoofKind::Negativity, opts);
}

RoofResult quantum_purity(const SpinState& rho, int t, const RoofOptions& opts) {
  return run_roof(rho, t, RoofKind::Purity, opts);
}

RoofResult quantum_hs(const SpinState& rho, int t, const RoofOptions& opts) {
  return run_roof(rho, t, RoofKind::HilbertSchmidt, opts);
}

RoofResult quantum_fidelity(const SpinState& rho, int t, const RoofOptions& opts) {
  RoofResult r = negativity_roof(rho, t, opts);
  const double scale = 2.0 / t;
  r.value *= scale;
  r.best_gap *= scale;
  for (double& v : r.restart_values) v *= scale;
  return r;
}

RoofResult quantum_measure(const SpinState& rho, int t, const MeasureSpec& spec, const RoofOptions& opts) {
  switch (spec.kind) {
    case MeasureKind::Purity: return quantum_purity(rho, t, opts);
    case MeasureKind::Fidelity: return quantum_fidelity(rho, t, opts);
    case MeasureKind::Schatten:
      if (spec.p == 2.0) return quantum_hs(rho, t, opts);
      throw DomainError("no quantum counterpart is implemented for Schatten p = " + spec.name());
    case MeasureKind::CumulativeMultipole:
      if (t == 1) {
        // at t = 1 the cumulative-multipole and purity totals agree on every state
        RoofResult r = quantum_purity(rho, t, opts);
        r.method += "(cm=purity at t=1)";
        return r;
      }
      throw DomainError(
          "the cumulative-multipole roof is not an LOCC monotone for t >= 2: the spin-2 pair "
          "(|2>+|0>+|-2>)/sqrt3 -> (-2|2>-|0>+|-2>)/sqrt6 is LOCC-convertible yet its t=2 values "
          "rise from 7/12 to 31/48");
  }
  throw DomainError("unknown measure kind");
}

}  // namespace ac
