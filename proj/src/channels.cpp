#include "anticoherence/channels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "anticoherence/errors.hpp"
#include "anticoherence/parallel.hpp"

namespace ac {

namespace {

double integrate(const std::function<double(double)>& g) {
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, 0.0, M_PI, 15, 1e-10, &err);
}

double parse_number(std::string_view s, std::string_view what) {
  try {
    std::size_t used = 0;
    const std::string str(s);
    const double v = std::stod(str, &used);
    if (used != str.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw DomainError("cannot read " + std::string(what) + " from '" + std::string(s) + "'");
  }
}

// "1.2", "pi", "pi/2", "3pi/4".
double parse_angle(std::string_view s) {
  const auto pos = s.find("pi");
  if (pos == std::string_view::npos) return parse_number(s, "an angle");
  const double factor = pos == 0 ? 1.0 : parse_number(s.substr(0, pos), "an angle");
  std::string_view rest = s.substr(pos + 2);
  double div = 1.0;
  if (!rest.empty()) {
    if (rest[0] != '/') throw DomainError("cannot read an angle from '" + std::string(s) + "'");
    div = parse_number(rest.substr(1), "an angle");
  }
  return factor * M_PI / div;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

double character(int L, double omega) {
  const double s = std::sin(0.5 * omega);
  if (std::abs(s) < 1e-8) {
    // expansion about omega = 0 (mod 4 pi)
    const double n = 2.0 * L + 1.0;
    const double sign = std::cos(0.5 * omega) > 0.0 ? 1.0 : -1.0;
    return sign * n * (1.0 - (n * n - 1.0) * omega * omega / 24.0);
  }
  return std::sin((2.0 * L + 1.0) * 0.5 * omega) / s;
}

double haar_angle_weight(double omega) {
  const double s = std::sin(0.5 * omega);
  return 2.0 / M_PI * s * s;
}

AngleDensity AngleDensity::identity() {
  AngleDensity d;
  d.components_.push_back({Component::Kind::Atom, 1.0, 0.0, {}, "identity"});
  return d;
}

AngleDensity AngleDensity::haar() {
  AngleDensity d;
  d.components_.push_back({Component::Kind::Haar, 1.0, 0.0, {}, "haar"});
  return d;
}

AngleDensity AngleDensity::atom(double omega) {
  if (!(omega >= 0.0 && omega <= M_PI + 1e-12)) throw DomainError("rotation angle must lie in [0, pi]");
  AngleDensity d;
  d.components_.push_back({Component::Kind::Atom, 1.0, std::min(omega, M_PI), {}, "delta:" + format_double(omega)});
  return d;
}

AngleDensity AngleDensity::from_haar_density(std::function<double(double)> p, std::string label) {
  auto g = [p = std::move(p)](double w) { return p(w) * haar_angle_weight(w); };
  const double norm = integrate(g);
  if (std::abs(norm - 1.0) > 1e-8) {
    throw DomainError("angle density '" + label + "' integrates to " + format_double(norm) + ", not 1");
  }
  AngleDensity d;
  d.components_.push_back({Component::Kind::Density, 1.0, 0.0, g, std::move(label)});
  return d;
}

AngleDensity AngleDensity::gaussian(double sigma) {
  if (!(sigma > 0.0)) throw DomainError("gauss width must be positive");
  auto profile = [sigma](double w) { return std::exp(-w * w / (2.0 * sigma * sigma)); };
  const double norm = integrate(profile);
  AngleDensity d;
  d.components_.push_back({Component::Kind::Density, 1.0, 0.0,
                           [profile, norm](double w) { return profile(w) / norm; }, "gauss:" + format_double(sigma)});
  return d;
}

AngleDensity AngleDensity::mixture(const std::vector<std::pair<double, AngleDensity>>& parts) {
  AngleDensity d;
  double total = 0.0;
  for (const auto& [w, part] : parts) {
    if (!(w >= 0.0)) throw DomainError("mixture weights must be nonnegative");
    total += w;
    for (Component c : part.components_) {
      c.weight *= w;
      d.components_.push_back(std::move(c));
    }
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw DomainError("angle density weights sum to " + format_double(total) + ", not 1");
  }
  return d;
}

AngleDensity AngleDensity::parse(std::string_view text) {
  std::vector<std::pair<double, AngleDensity>> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find('+', start), text.size());
    const std::string term = trim(text.substr(start, end - start));
    if (term.empty()) throw DomainError("empty term in angle density '" + std::string(text) + "'");
    double w = 1.0;
    std::string kind = term;
    if (const auto star = term.find('*'); star != std::string::npos) {
      w = parse_number(trim(term.substr(0, star)), "a weight");
      kind = trim(term.substr(star + 1));
    }
    if (kind == "identity") {
      parts.emplace_back(w, identity());
    } else if (kind == "haar") {
      parts.emplace_back(w, haar());
    } else if (kind.rfind("delta:", 0) == 0) {
      parts.emplace_back(w, atom(parse_angle(kind.substr(6))));
    } else if (kind.rfind("gauss:", 0) == 0) {
      parts.emplace_back(w, gaussian(parse_number(kind.substr(6), "a width")));
    } else {
      throw DomainError("unknown angle density term '" + kind + "' (identity, haar, delta:W, gauss:SIGMA)");
    }
    start = end + 1;
  }
  return mixture(parts);
}

std::string AngleDensity::describe() const {
  std::string out;
  for (const auto& c : components_) {
    if (!out.empty()) out += " + ";
    out += format_double(c.weight) + "*" + c.label;
  }
  return out;
}

double AngleDensity::damping(int L) const {
  double acc = 0.0;
  for (const auto& c : components_) {
    switch (c.kind) {
      case Component::Kind::Atom: acc += c.weight * character(L, c.omega); break;
      case Component::Kind::Haar: acc += c.weight * (L == 0 ? 1.0 : 0.0); break;
      case Component::Kind::Density:
        acc += c.weight * integrate([&](double w) { return c.per_dw(w) * character(L, w); });
        break;
    }
  }
  return acc / (2.0 * L + 1.0);
}

ChannelSpec ChannelSpec::raw(SpinQuantumNumber spin, std::vector<double> f) {
  if (static_cast<int>(f.size()) != spin.two_j()) {
    throw DomainError("damping vector for j = " + spin.to_string() + " needs " + std::to_string(spin.two_j()) +
                      " entries, got " + std::to_string(f.size()));
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!(std::abs(f[i]) <= 1.0 + 1e-12)) {
      throw DomainError("|f_" + std::to_string(i + 1) + "| = " + format_double(std::abs(f[i])) + " exceeds 1");
    }
    f[i] = std::clamp(f[i], -1.0, 1.0);
  }
  ChannelSpec s;
  s.spin = spin;
  s.f = std::move(f);
  s.provenance = Provenance::RawVector;
  s.descriptor = "raw";
  return s;
}

ChannelSpec ChannelSpec::identity(SpinQuantumNumber spin) {
  ChannelSpec s = raw(spin, std::vector<double>(spin.two_j(), 1.0));
  s.descriptor = "identity";
  return s;
}

ChannelSpec ChannelSpec::depolarizing(SpinQuantumNumber spin, double strength) {
  if (!(strength >= 0.0 && strength <= 1.0)) throw DomainError("depolarizing strength must lie in [0, 1]");
  ChannelSpec s = raw(spin, std::vector<double>(spin.two_j(), 1.0 - strength));
  s.provenance = Provenance::Depolarizing;
  s.descriptor = "depolarizing:" + format_double(strength);
  return s;
}

ChannelSpec ChannelSpec::random_rotation(SpinQuantumNumber spin, const AngleDensity& density) {
  std::vector<double> f(spin.two_j());
  for (int L = 1; L <= spin.two_j(); ++L) f[L - 1] = density.damping(L);
  ChannelSpec s = raw(spin, std::move(f));
  s.provenance = Provenance::RandomRotation;
  s.descriptor = density.describe();
  return s;
}

std::string to_string(ChannelSpec::Provenance p) {
  switch (p) {
    case ChannelSpec::Provenance::RawVector: return "raw";
    case ChannelSpec::Provenance::RandomRotation: return "random-rotation";
    case ChannelSpec::Provenance::Depolarizing: return "depolarizing";
  }
  return "raw";
}

ChannelSpec compose(const ChannelSpec& a, const ChannelSpec& b) {
  if (!(a.spin == b.spin)) throw DomainError("cannot compose channels of different spins");
  std::vector<double> f(a.f.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = a.f[i] * b.f[i];
  ChannelSpec s = ChannelSpec::raw(a.spin, std::move(f));
  s.descriptor = "(" + a.descriptor + ") o (" + b.descriptor + ")";
  return s;
}

Matrix apply_channel(const ChannelSpec& spec, const Matrix& X) {
  const auto spin = spec.spin;
  if (X.rows() != spin.dim() || X.cols() != spin.dim()) {
    throw DomainError("channel for j = " + spin.to_string() + " applied to a " + std::to_string(X.rows()) + "x" +
                      std::to_string(X.cols()) + " operator");
  }
  const auto& basis = tensor_basis(spin);
  Matrix out = Matrix::Zero(spin.dim(), spin.dim());
  for (int L = 0; L <= spin.two_j(); ++L) {
    const double fL = spec.damping(L);
    if (fL == 0.0) continue;
    for (int M = -L; M <= L; ++M) basis.accumulate(out, L, M, fL * basis.coefficient(X, L, M));
  }
  return out;
}

SpinState apply_channel(const ChannelSpec& spec, const SpinState& rho) {
  if (!(spec.spin == rho.spin())) {
    throw DomainError("channel for j = " + spec.spin.to_string() + " applied to a j = " + rho.spin().to_string() +
                      " state");
  }
  return SpinState::unchecked(rho.spin(), apply_channel(spec, rho.matrix()));
}

Matrix choi_matrix(const ChannelSpec& spec) {
  const int d = spec.spin.dim();
  Matrix C = Matrix::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      Matrix E = Matrix::Zero(d, d);
      E(a, b) = 1.0;
      C.block(a * d, b * d, d, d) = apply_channel(spec, E);
    }
  }
  return C;
}

CpCheck choi_cp_check(const ChannelSpec& spec, double tol) {
  const Matrix C = choi_matrix(spec);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (C + C.adjoint()), Eigen::EigenvaluesOnly);
  CpCheck out;
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  out.cp = out.min_eigenvalue >= -tol;
  return out;
}

namespace {

// G(K, L) = lambda_K of the channel with f = e_L, from the Casimir eigenspaces of the
// generators -J^T (x) 1 + 1 (x) J.
const Eigen::MatrixXd& irrep_table(SpinQuantumNumber spin) {
  static std::mutex mu;
  static std::map<int, Eigen::MatrixXd> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(spin.two_j());
  if (it != cache.end()) return it->second;
  const int d = spin.dim();
  const int n = spin.two_j();
  const Matrix I = Matrix::Identity(d, d);
  auto kron = [d](const Matrix& a, const Matrix& b) {
    Matrix out(d * d, d * d);
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) out.block(i * d, k * d, d, d) = a(i, k) * b;
    return out;
  };
  Matrix casimir = Matrix::Zero(d * d, d * d);
  for (const Matrix& J : {spin_x(spin), spin_y(spin), spin_z(spin)}) {
    const Matrix G = kron(-J.transpose(), I) + kron(I, J);
    casimir += G * G;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(casimir);
  // Choi is affine in f with f_0 = 1 fixed: C(f) = C_0 + sum_L f_L (C(e_L) - C_0).
  const Matrix C0 = choi_matrix(ChannelSpec::depolarizing(spin, 1.0));
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int L = 0; L <= n; ++L) {
    Matrix C = C0;
    if (L > 0) {
      std::vector<double> f(n, 0.0);
      f[L - 1] = 1.0;
      C = choi_matrix(ChannelSpec::raw(spin, f)) - C0;
    }
    const Matrix rotated = es.eigenvectors().adjoint() * C * es.eigenvectors();
    for (int k = 0; k < d * d; ++k) {
      const int K = static_cast<int>(std::lround(0.5 * (std::sqrt(1.0 + 4.0 * es.eigenvalues()(k)) - 1.0)));
      table(K, L) += rotated(k, k).real() / (2.0 * K + 1.0);
    }
  }
  return cache.emplace(spin.two_j(), std::move(table)).first->second;
}

}  // namespace

Eigen::VectorXd choi_irrep_eigenvalues(const ChannelSpec& spec) {
  const Eigen::MatrixXd& G = irrep_table(spec.spin);
  Eigen::VectorXd f(G.cols());
  for (int L = 0; L < G.cols(); ++L) f(L) = spec.damping(L);
  return G * f;
}

CpCheck fast_cp_check(const ChannelSpec& spec, double tol) {
  CpCheck out;
  out.min_eigenvalue = choi_irrep_eigenvalues(spec).minCoeff();
  out.cp = out.min_eigenvalue >= -tol;
  return out;
}

bool sample_cp_box(SpinQuantumNumber spin, Rng& rng, ChannelSpec& out, int max_attempts, int* attempts_used) {
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  for (int a = 1; a <= max_attempts; ++a) {
    std::vector<double> f(spin.two_j());
    for (double& x : f) x = box(rng);
    ChannelSpec s = ChannelSpec::raw(spin, std::move(f));
    if (fast_cp_check(s).cp) {
      s.descriptor = "box";
      out = std::move(s);
      if (attempts_used) *attempts_used = a;
      return true;
    }
  }
  if (attempts_used) *attempts_used = max_attempts;
  return false;
}

ChannelSpec sample_rotation_channel(SpinQuantumNumber spin, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::exponential_distribution<double> ex(1.0);
  const int atoms = 1 + static_cast<int>(u(rng) * 3.0) % 3;
  std::vector<double> w(atoms + 1);
  for (double& x : w) x = ex(rng);
  if (u(rng) < 0.5) w.back() = 0.0;  // half the draws have no Haar part
  double sum = 0.0;
  for (double x : w) sum += x;
  std::vector<std::pair<double, AngleDensity>> parts;
  for (int a = 0; a < atoms; ++a) parts.emplace_back(w[a] / sum, AngleDensity::atom(M_PI * u(rng)));
  parts.emplace_back(w.back() / sum, AngleDensity::haar());
  return ChannelSpec::random_rotation(spin, AngleDensity::mixture(parts));
}

T4Report t4_harness(const MeasureSpec& spec, SpinQuantumNumber spin, int t, int trials, std::uint64_t seed,
                    int threads) {
  if (trials < 1) throw DomainError("trials must be >= 1");
  if (t < 1 || t > spin.two_j()) throw DomainError("t must satisfy 1 <= t <= 2j");
  T4Report rep;
  rep.spec = spec;
  rep.spin = spin;
  rep.t = t;
  rep.trials = trials;
  rep.conjectural = spec.conjectural_t4();
  std::vector<double> margin(trials);
  std::vector<int> box_attempts(trials, 0);
  parallel_for(
      static_cast<std::size_t>(trials),
      [&](std::size_t i) {
        Rng rng = derive_rng(seed, i);
        ChannelSpec ch;
        if (i % 2 == 1 || !sample_cp_box(spin, rng, ch, 20000, &box_attempts[i])) {
          ch = sample_rotation_channel(spin, rng);
          box_attempts[i] = -box_attempts[i] - 1;  // marks a rotation draw
        }
        std::uniform_int_distribution<int> rank(1, spin.dim());
        const SpinState rho = random_mixed_state(spin, rng, rank(rng));
        const SpinState out = apply_channel(ch, rho);
        margin[i] = total_measure(out, t, spec) - total_measure(rho, t, spec);
      },
      threads);
  for (int i = 0; i < trials; ++i) {
    if (box_attempts[i] >= 0) {
      ++rep.box_channels;
      rep.box_attempts += box_attempts[i];
    } else {
      ++rep.rotation_channels;
      rep.box_attempts += -box_attempts[i] - 1;
    }
    rep.worst_margin = i == 0 ? margin[i] : std::min(rep.worst_margin, margin[i]);
    if (margin[i] < -1e-10) ++rep.violations;
  }
  return rep;
}

}  // namespace ac
