#include "anticoherence/extremal.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>

#include "anticoherence/catalogue.hpp"
#include "anticoherence/errors.hpp"
#include "anticoherence/parallel.hpp"
#include "anticoherence/random.hpp"

namespace ac {

double ACConstraintSet::residual(const Matrix& rho) const {
  const auto& basis = tensor_basis(spin);
  double worst = 0.0;
  for (int L = 1; L <= t; ++L)
    for (int M = -L; M <= L; ++M) worst = std::max(worst, std::abs(basis.coefficient(rho, L, M)));
  return worst;
}

bool is_t_anticoherent(const SpinState& rho, int t, double tol) {
  if (t < 1 || t > rho.spin().two_j()) return false;
  return ACConstraintSet{rho.spin(), t}.satisfied(rho.matrix(), tol);
}

int anticoherence_order(const SpinState& rho, double tol) {
  int t = 0;
  while (t < rho.spin().two_j() && is_t_anticoherent(rho, t + 1, tol)) ++t;
  return t;
}

std::string to_string(WitnessSource s) { return s == WitnessSource::ExplicitState ? "explicit-state" : "heuristic-search"; }

namespace {

// Orthonormal real coordinates for k x k Hermitian matrices.
std::vector<Matrix> hermitian_basis(int k) {
  std::vector<Matrix> out;
  const double r = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < k; ++i) {
    Matrix E = Matrix::Zero(k, k);
    E(i, i) = 1.0;
    out.push_back(E);
  }
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      Matrix S = Matrix::Zero(k, k), A = Matrix::Zero(k, k);
      S(i, j) = S(j, i) = r;
      A(i, j) = cplx(0.0, -r);
      A(j, i) = cplx(0.0, r);
      out.push_back(S);
      out.push_back(A);
    }
  }
  return out;
}

Eigen::VectorXd to_coords(const Matrix& Y, const std::vector<Matrix>& hb) {
  Eigen::VectorXd y(hb.size());
  for (std::size_t a = 0; a < hb.size(); ++a) y(a) = (hb[a].adjoint() * Y).trace().real();
  return y;
}

Matrix from_coords(const Eigen::VectorXd& y, const std::vector<Matrix>& hb) {
  Matrix Y = Matrix::Zero(hb[0].rows(), hb[0].cols());
  for (std::size_t a = 0; a < hb.size(); ++a) Y += y(a) * hb[a];
  return Y;
}

// The t-AC and unit-trace conditions on rho = F Y F^dagger as a real system A y = b.
struct FaceSystem {
  Matrix F;
  std::vector<Matrix> hb;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::MatrixXd pinv;
  Eigen::MatrixXd null;  // columns span the solutions of A y = 0

  FaceSystem(SpinQuantumNumber spin, int t, Matrix F_in) : F(std::move(F_in)), hb(hermitian_basis(F.cols())) {
    const auto& basis = tensor_basis(spin);
    const int n = static_cast<int>(hb.size());
    const int rows = 2 * t * (t + 2) + 1;
    A.resize(rows, n);
    for (int a = 0; a < n; ++a) {
      const Matrix rho = F * hb[a] * F.adjoint();
      int row = 0;
      for (int L = 1; L <= t; ++L) {
        for (int M = -L; M <= L; ++M) {
          const cplx c = basis.coefficient(rho, L, M);
          A(row++, a) = c.real();
          A(row++, a) = c.imag();
        }
      }
      A(row, a) = rho.trace().real();
    }
    b = Eigen::VectorXd::Zero(rows);
    b(rows - 1) = 1.0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cut = 1e-10 * std::max(1.0, sv.size() ? sv(0) : 0.0);
    int rank = 0;
    while (rank < sv.size() && sv(rank) > cut) ++rank;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(rank);
    for (int i = 0; i < rank; ++i) inv(i) = 1.0 / sv(i);
    pinv = svd.matrixV().leftCols(rank) * inv.asDiagonal() * svd.matrixU().leftCols(rank).transpose();
    null = svd.matrixV().rightCols(n - rank);
  }

  Eigen::VectorXd project_affine(const Eigen::VectorXd& y) const { return y - pinv * (A * y - b); }
  double affine_residual(const Eigen::VectorXd& y) const { return (A * y - b).cwiseAbs().maxCoeff(); }
};

Matrix project_psd(const Matrix& Y) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (Y + Y.adjoint()));
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double min_eig(const Matrix& Y) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(0.5 * (Y + Y.adjoint()), Eigen::EigenvaluesOnly).eigenvalues()(0);
}

// Dykstra's alternating projection of `start` onto {A y = b} cap PSD; the nearest
// feasible point, or nothing when the pieces do not meet.
std::optional<Matrix> dykstra(const FaceSystem& sys, const Matrix& start, int* iterations = nullptr) {
  Eigen::VectorXd x = to_coords(start, sys.hb);
  Eigen::VectorXd p = Eigen::VectorXd::Zero(x.size()), q = p;
  Eigen::VectorXd y = x;
  int it = 0;
  for (; it < 20000; ++it) {
    y = sys.project_affine(x + p);
    p = x + p - y;
    const Eigen::VectorXd xn = to_coords(project_psd(from_coords(y + q, sys.hb)), sys.hb);
    q = y + q - xn;
    const double change = (xn - x).norm();
    x = xn;
    if (change < 1e-15 && (x - y).norm() < 1e-13) break;
  }
  if (iterations) *iterations = it + 1;
  // Finish on the affine set and require positivity there.
  const Eigen::VectorXd fin = sys.project_affine(x);
  const Matrix Y = from_coords(fin, sys.hb);
  if ((fin - x).norm() > 1e-9 || min_eig(Y) < -1e-10) return std::nullopt;
  return Y;
}

double purity_of(const Matrix& Y) { return Y.squaredNorm(); }

struct Vertex {
  Matrix rho;
  double purity = -1.0;
};

// From a feasible Y on span(F), repeatedly move along the feasible slice to the PSD
// boundary, dropping to the smaller face each time, until the face is a point.
Vertex walk_to_vertex(SpinQuantumNumber spin, int t, Matrix F, Matrix Y, bool greedy, Rng& rng) {
  std::normal_distribution<double> g;
  for (int step = 0; step < 200; ++step) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (Y + Y.adjoint()));
    const Eigen::VectorXd& ev = es.eigenvalues();
    std::vector<int> keep;
    for (int k = 0; k < ev.size(); ++k) {
      if (ev(k) > 1e-11) keep.push_back(k);
    }
    Matrix V(Y.rows(), keep.size());
    Eigen::VectorXd lam(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
      V.col(i) = es.eigenvectors().col(keep[i]);
      lam(i) = ev(keep[i]);
    }
    F = F * V;
    Y = lam.cast<cplx>().asDiagonal();
    const FaceSystem sys(spin, t, F);
    // re-impose the constraints on the smaller face
    Y = from_coords(sys.project_affine(to_coords(Y, sys.hb)), sys.hb);
    if (sys.null.cols() == 0) break;
    Eigen::VectorXd z(sys.null.cols());
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = g(rng);
    Eigen::VectorXd dir = sys.null * z;
    if (greedy) {
      const Eigen::VectorXd grad = sys.null * (sys.null.transpose() * to_coords(Y, sys.hb));
      if (grad.norm() > 1e-9) dir = grad / grad.norm() + 0.05 * dir / dir.norm();
    }
    const Matrix D = from_coords(dir, sys.hb);
    // largest s with Y + s D >= 0, both ways
    Eigen::SelfAdjointEigenSolver<Matrix> ey(0.5 * (Y + Y.adjoint()));
    const Eigen::VectorXd isq = ey.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
    const Matrix W = ey.eigenvectors() * isq.cast<cplx>().asDiagonal() * ey.eigenvectors().adjoint();
    const Eigen::VectorXd mu =
        Eigen::SelfAdjointEigenSolver<Matrix>(W * D * W, Eigen::EigenvaluesOnly).eigenvalues();
    const double s_plus = mu(0) < 0.0 ? -1.0 / mu(0) : 0.0;
    const double s_minus = mu(mu.size() - 1) > 0.0 ? 1.0 / mu(mu.size() - 1) : 0.0;
    const Matrix Yp = Y + s_plus * D, Ym = Y - s_minus * D;
    Y = purity_of(Yp) >= purity_of(Ym) ? Yp : Ym;
  }
  Vertex v;
  v.rho = F * Y * F.adjoint();
  v.rho = 0.5 * (v.rho + v.rho.adjoint());
  v.purity = purity_of(v.rho);
  return v;
}

struct CatalogueWitness {
  std::string name;
  SpinState state;
  double purity;
};

std::optional<CatalogueWitness> best_catalogued(SpinQuantumNumber spin, int t) {
  std::optional<CatalogueWitness> best =
      CatalogueWitness{"maximally mixed", SpinState::maximally_mixed(spin), 1.0 / spin.dim()};
  for (const auto& info : catalogue()) {
    if (info.two_j >= 0 && info.two_j != spin.two_j()) continue;
    const int two_j = info.two_j >= 0 ? -1 : spin.two_j();
    const auto exact = catalogue_exact(info.name, two_j);
    if (exact_ac_order(exact) < t) continue;
    SpinState rho = catalogue_state(info.name, two_j);
    const double p = rho.purity();
    if (!best || p > best->purity + 1e-12) best = CatalogueWitness{info.name, std::move(rho), p};
  }
  return best;
}

std::vector<Matrix> candidate_supports(SpinQuantumNumber spin, const SearchOptions& opts) {
  const int d = spin.dim();
  std::vector<Matrix> out;
  const long long subsets = (1LL << d) - 1;
  for (long long mask = 1; mask <= subsets && static_cast<int>(out.size()) < opts.max_dicke_subsets; ++mask) {
    Matrix F = Matrix::Zero(d, std::popcount(static_cast<unsigned long long>(mask)));
    int c = 0;
    for (int k = 0; k < d; ++k) {
      if (mask & (1LL << k)) F(k, c++) = 1.0;
    }
    out.push_back(std::move(F));
  }
  Rng rng = derive_rng(opts.seed, 0xface);
  std::uniform_int_distribution<int> rank(std::min(2, d), d);
  for (int s = 0; s < opts.random_supports; ++s) out.push_back(haar_isometry(d, rank(rng), rng));
  return out;
}

}  // namespace

MinPurityResult min_purity_tac(SpinQuantumNumber spin, int t) {
  if (t < 1 || t > spin.two_j()) throw DomainError("t must satisfy 1 <= t <= 2j");
  const int d = spin.dim();
  const FaceSystem sys(spin, t, Matrix::Identity(d, d));
  MinPurityResult out;
  auto Y = dykstra(sys, Matrix::Zero(d, d), &out.iterations);
  if (!Y) throw DomainError("t-AC feasibility failed; the maximally mixed state should always qualify");
  out.witness = SpinState::unchecked(spin, *Y);
  out.purity = purity_of(*Y);
  // gradient 2 rho must lie in span{T_LM : L <= t} (the constraint normals and 1)
  const auto mv = multipoles_of(spin, *Y);
  double outside = 0.0;
  for (int L = t + 1; L <= spin.two_j(); ++L) outside += mv.rank_weight(L);
  out.kkt_residual = 2.0 * std::sqrt(outside);
  return out;
}

StaircasePoint max_purity_tac(SpinQuantumNumber spin, int t, const SearchOptions& opts) {
  if (t < 1 || t > spin.two_j()) throw DomainError("t must satisfy 1 <= t <= 2j");
  const auto supports = candidate_supports(spin, opts);
  std::vector<Vertex> best(supports.size());
  parallel_for(
      supports.size(),
      [&](std::size_t i) {
        const FaceSystem sys(spin, t, supports[i]);
        const int k = static_cast<int>(supports[i].cols());
        const auto start = dykstra(sys, Matrix::Identity(k, k) / k);
        if (!start) return;
        Rng rng = derive_rng(opts.seed, i);
        const ACConstraintSet cs{spin, t};
        auto consider = [&](Vertex v) {
          if (cs.residual(v.rho) > 1e-10 || min_eig(v.rho) < -1e-10) return;
          if (std::abs(v.rho.trace().real() - 1.0) > 1e-10) return;
          if (v.purity > best[i].purity) best[i] = std::move(v);
        };
        for (int w = 0; w < opts.walks_per_support; ++w) {
          consider(walk_to_vertex(spin, t, supports[i], *start, w == 0, rng));
        }
        // Iterated local search: pull the best vertex slightly inward and walk again.
        std::uniform_real_distribution<double> pull(0.01, 0.3);
        for (int r = 0; r < opts.polish_rounds && best[i].purity > 0.0; ++r) {
          const Matrix Yb = supports[i].adjoint() * best[i].rho * supports[i];
          const double eta = pull(rng);
          consider(walk_to_vertex(spin, t, supports[i], (1.0 - eta) * Yb + eta * *start, true, rng));
        }
      },
      opts.threads);

  StaircasePoint pt;
  pt.max_order = t;
  std::size_t arg = supports.size();
  for (std::size_t i = 0; i < best.size(); ++i) {
    if (best[i].purity > 0.0 && (arg == supports.size() || best[i].purity > best[arg].purity + 1e-12)) arg = i;
  }
  const auto cat = best_catalogued(spin, t);
  pt.catalogue_purity = cat->purity;
  const double found = arg < supports.size() ? best[arg].purity : -1.0;
  pt.search_purity = found;
  if (cat->purity >= found - 1e-9) {
    pt.purity = cat->purity;
    pt.witness = cat->state;
    pt.certified = WitnessSource::ExplicitState;
    pt.witness_name = cat->name;
  } else if (arg < supports.size()) {
    pt.purity = found;
    pt.witness = SpinState::unchecked(spin, best[arg].rho);
    pt.certified = WitnessSource::HeuristicSearch;
    pt.witness_name = arg < supports.size() - static_cast<std::size_t>(opts.random_supports)
                          ? "vertex search, Dicke support"
                          : "vertex search, random support";
    pt.exceeds_catalogue = true;
  }
  return pt;
}

int Staircase::order_at(double purity) const {
  int order = 0;
  for (const auto& p : thresholds) {
    if (p.purity >= purity - 1e-12) order = std::max(order, p.max_order);
  }
  return order;
}

Staircase staircase(SpinQuantumNumber spin, const std::vector<double>& purity_grid, const SearchOptions& opts) {
  const double lo = 1.0 / spin.dim();
  for (double p : purity_grid) {
    if (!(p >= lo - 1e-12 && p <= 1.0 + 1e-12)) {
      throw DomainError("purity grid values must lie in [1/(2j+1), 1]");
    }
  }
  Staircase out;
  out.spin = spin;
  for (int t = 1; t <= spin.two_j(); ++t) out.thresholds.push_back(max_purity_tac(spin, t, opts));
  // (t+1)-AC implies t-AC, so a higher order's witness also serves lower orders
  for (int t = spin.two_j() - 1; t >= 1; --t) {
    StaircasePoint& lower = out.thresholds[t - 1];
    const StaircasePoint& upper = out.thresholds[t];
    if (upper.purity > lower.purity + 1e-12) {
      const int order = lower.max_order;
      lower = upper;
      lower.max_order = order;
    }
  }
  for (double p : purity_grid) out.grid.emplace_back(p, out.order_at(p));
  return out;
}

}  // namespace ac
