#include "properties.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "anticoherence/catalogue.hpp"
#include "anticoherence/reduction.hpp"

namespace props {

using namespace ac;

void SuiteResult::record(bool pass, double margin, const std::string& what) {
  ++samples;
  if (pass) return;
  ++violations;
  worst = std::max(worst, margin);
  if (first_failure.empty()) first_failure = what;
}

double max_coherent_fidelity(const SpinState& rho) {
  const auto spin = rho.spin();
  auto overlap = [&](double th, double ph) {
    const Vector v = coherent_state(spin, th, ph).amplitudes();
    return v.dot(rho.matrix() * v).real();
  };
  double best = -1.0, bt = 0.0, bp = 0.0;
  const int nt = 36, np = 72;
  for (int a = 0; a <= nt; ++a) {
    for (int b = 0; b < np; ++b) {
      const double th = M_PI * a / nt, ph = 2.0 * M_PI * b / np;
      const double f = overlap(th, ph);
      if (f > best) {
        best = f;
        bt = th;
        bp = ph;
      }
    }
  }
  // Pattern search around the best grid point.
  for (double step = M_PI / nt; step > 1e-10; step *= 0.5) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (auto [dt, dp] : {std::pair{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}}) {
        const double f = overlap(bt + dt * step, bp + dp * step);
        if (f > best) {
          best = f;
          bt += dt * step;
          bp += dp * step;
          moved = true;
        }
      }
    }
  }
  return best;
}

SpinState coherent_mixture(SpinQuantumNumber spin, int k, Rng& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Matrix m = Matrix::Zero(spin.dim(), spin.dim());
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    const EulerAngles e = random_angles(rng);
    const Vector v = coherent_state(spin, e.beta, e.alpha).amplitudes();
    const double w = u(rng);
    m += w * v * v.adjoint();
    total += w;
  }
  return SpinState::from_matrix(spin, m / total);
}

std::vector<SpinState> ac_examples(int t) {
  static const auto orders = [] {
    std::vector<std::pair<std::string, int>> out;
    for (const auto& info : catalogue()) {
      if (info.two_j < 0) continue;
      out.emplace_back(info.name, exact_ac_order(catalogue_exact(info.name)));
    }
    return out;
  }();
  std::vector<SpinState> out;
  for (const auto& [name, order] : orders) {
    if (order >= t) out.push_back(catalogue_state(name));
  }
  for (int two_j = std::max(1, t); two_j <= 5; ++two_j) out.push_back(SpinState::maximally_mixed(SpinQuantumNumber(two_j)));
  return out;
}

const std::vector<MeasureSpec>& total_kinds() {
  static const std::vector<MeasureSpec> kinds = {MeasureSpec::purity(), MeasureSpec::schatten(2.0),
                                                 MeasureSpec::schatten(1.0), MeasureSpec::fidelity(),
                                                 MeasureSpec::cm()};
  return kinds;
}

namespace {

bool kind_applies(const MeasureSpec& k, SpinQuantumNumber spin, int t) {
  return k.kind != MeasureKind::CumulativeMultipole || t <= spin.two_j() - 1;
}

std::string describe(const char* what, SpinQuantumNumber spin, int t, const MeasureSpec& k, double v) {
  std::ostringstream os;
  os << what << " j=" << spin.to_string() << " t=" << t << " kind=" << k.name() << " value=" << v;
  return os.str();
}

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

Matrix mix(const Matrix& a, const Matrix& b, double w) { return w * a + (1.0 - w) * b; }

}  // namespace

SuiteResult axiom_t1(int samples, std::uint64_t seed) {
  SuiteResult res{"T1: total = 1 exactly on t-AC states", 0, 0, 0.0, {}};
  Rng rng = derive_rng(seed, 0x71);
  for (int s = 0; s < samples; ++s) {
    const bool ac_case = s % 2 == 0;
    SpinState rho = SpinState::maximally_mixed(SpinQuantumNumber(1));
    int t = 1;
    if (ac_case) {
      t = uniform_int(rng, 1, 4);
      const auto pool = ac_examples(t);
      const SpinState& a = pool[uniform_int(rng, 0, static_cast<int>(pool.size()) - 1)];
      std::vector<const SpinState*> same;
      for (const auto& p : pool) {
        if (p.spin() == a.spin()) same.push_back(&p);
      }
      const SpinState& b = *same[uniform_int(rng, 0, static_cast<int>(same.size()) - 1)];
      const Matrix m = mix(rotate(a, random_angles(rng)).matrix(), rotate(b, random_angles(rng)).matrix(), uniform01(rng));
      rho = SpinState::from_matrix(a.spin(), m);
    } else {
      const SpinQuantumNumber spin(uniform_int(rng, 1, 5));
      t = uniform_int(rng, 1, spin.two_j());
      do {
        rho = random_mixed_state(spin, rng, uniform_int(rng, 1, spin.dim()));
      } while (multipoles_of(spin, rho.matrix()).max_abs_up_to(t) < 1e-3);
    }
    const double multipole = multipoles_of(rho.spin(), rho.matrix()).max_abs_up_to(t);
    for (const auto& k : total_kinds()) {
      if (!kind_applies(k, rho.spin(), t)) continue;
      const double v = total_measure(rho, t, k);
      const bool in_range = v >= -1e-12 && v <= 1.0 + 1e-12;
      if (ac_case) {
        res.record(in_range && multipole < 1e-8 && std::abs(1.0 - v) < 1e-8, std::abs(1.0 - v),
                   describe("t-AC state", rho.spin(), t, k, v));
      } else {
        res.record(in_range && 1.0 - v > 1e-8, v - (1.0 - 1e-8), describe("non-AC state", rho.spin(), t, k, v));
      }
    }
  }
  return res;
}

SuiteResult axiom_t2(int samples, std::uint64_t seed) {
  SuiteResult res{"T2: total = 0 only on coherent states", 0, 0, 0.0, {}};
  Rng rng = derive_rng(seed, 0x72);
  for (int s = 0; s < samples; ++s) {
    // At t = 2j the marginal is the state itself and every pure state scores 0.
    const SpinQuantumNumber spin(uniform_int(rng, 2, 5));
    const int t = uniform_int(rng, 1, spin.two_j() - 1);
    const EulerAngles e = random_angles(rng);
    const PureSpinState coh = coherent_state(spin, e.beta, e.alpha);
    SpinState rho = coh.density();
    const int which = s % 4;
    if (which == 1) {
      rho = random_pure_state(spin, rng).density();
    } else if (which == 2) {
      rho = random_mixed_state(spin, rng);
    } else if (which == 3) {
      const double delta = std::pow(10.0, -4.0 + 2.0 * uniform01(rng));
      rho = SpinState::from_matrix(spin, mix(random_pure_state(spin, rng).density().matrix(), coh.density().matrix(), delta));
    }
    double fid = -1.0;
    for (const auto& k : total_kinds()) {
      if (!kind_applies(k, spin, t)) continue;
      const double v = total_measure(rho, t, k);
      bool ok = v >= -1e-12 && v <= 1.0 + 1e-12;
      if (which == 0) ok = ok && v < 1e-10;
      if (v < 1e-6) {
        if (fid < 0.0) fid = max_coherent_fidelity(rho);
        ok = ok && fid > 1.0 - 1e-5;
      }
      res.record(ok, v, describe(which == 0 ? "coherent" : "non-coherent", spin, t, k, v));
    }
  }
  return res;
}

SuiteResult axiom_t3(int samples, std::uint64_t seed) {
  SuiteResult res{"T3: totals rotation invariant", 0, 0, 0.0, {}};
  Rng rng = derive_rng(seed, 0x73);
  for (int s = 0; s < samples; ++s) {
    const SpinQuantumNumber spin(uniform_int(rng, 1, 5));
    const int t = uniform_int(rng, 1, spin.two_j());
    const SpinState rho = random_mixed_state(spin, rng, uniform_int(rng, 1, spin.dim()));
    const SpinState rot = rotate(rho, random_angles(rng));
    for (const auto& k : total_kinds()) {
      if (!kind_applies(k, spin, t)) continue;
      const double a = total_measure(rho, t, k), b = total_measure(rot, t, k);
      res.record(std::abs(a - b) < 1e-10, std::abs(a - b), describe("rotation", spin, t, k, a));
    }
  }
  return res;
}

namespace {

const MeasureSpec& quantum_kind(int s) {
  static const std::vector<MeasureSpec> kinds = {MeasureSpec::purity(), MeasureSpec::schatten(2.0),
                                                 MeasureSpec::fidelity()};
  return kinds[static_cast<std::size_t>(s) % kinds.size()];
}

// Spins with a nontrivial bipartition for every t in [1, 2j-1].
SpinQuantumNumber roof_spin(Rng& rng) { return SpinQuantumNumber(uniform_int(rng, 2, 4)); }

}  // namespace

SuiteResult axiom_q1(int samples, std::uint64_t seed, const RoofOptions& opts) {
  SuiteResult res{"Q1: quantum = 0 on mixtures of coherent states", 0, 0, 0.0, {}};
  Rng rng = derive_rng(seed, 0x81);
  for (int s = 0; s < samples; ++s) {
    const SpinQuantumNumber spin = roof_spin(rng);
    const int t = uniform_int(rng, 1, spin.two_j() - 1);
    const SpinState rho = coherent_mixture(spin, uniform_int(rng, 1, 2), rng);
    const MeasureSpec& k = quantum_kind(s);
    const double v = quantum_measure(rho, t, k, opts).value;
    res.record(std::abs(v) < 1e-6, std::abs(v), describe("coherent mixture", spin, t, k, v));
  }
  return res;
}

SuiteResult axiom_q2(int samples, std::uint64_t seed) {
  SuiteResult res{"Q2: quantum = total on pure states", 0, 0, 0.0, {}};
  Rng rng = derive_rng(seed, 0x82);
  for (int s = 0; s < samples; ++s) {
    const SpinQuantumNumber spin(uniform_int(rng, 1, 6));
    const int t = uniform_int(rng, 1, spin.two_j());
    const SpinState rho = random_pure_state(spin, rng).density();
    std::vector<MeasureSpec> kinds = {MeasureSpec::purity(), MeasureSpec::schatten(2.0), MeasureSpec::fidelity()};
    if (t == 1 && spin.two_j() >= 2) kinds.push_back(MeasureSpec::cm());
    for (const auto& k : kinds) {
      const double q = quantum_measure(rho, t, k).value;
      const double total = total_measure(rho, t, k);
      res.record(std::abs(q - total) < 1e-9, std::abs(q - total), describe("pure state", spin, t, k, q));
    }
  }
  return res;
}

SuiteResult axiom_q3(int samples, std::uint64_t seed, const RoofOptions& opts) {
  SuiteResult res{"Q3: quantum measures rotation invariant", 0, 0, 0.0, {}};
  Rng rng = derive_rng(seed, 0x83);
  for (int s = 0; s < samples; ++s) {
    const SpinQuantumNumber spin = roof_spin(rng);
    const int t = uniform_int(rng, 1, spin.two_j() - 1);
    const SpinState rho = random_mixed_state(spin, rng, 2);
    const SpinState rot = rotate(rho, random_angles(rng));
    const MeasureSpec& k = quantum_kind(s);
    const double a = quantum_measure(rho, t, k, opts).value;
    const double b = quantum_measure(rot, t, k, opts).value;
    res.record(std::abs(a - b) < 1e-6, std::abs(a - b), describe("rotation", spin, t, k, a));
  }
  return res;
}

SuiteResult axiom_q4(int samples, std::uint64_t seed, const RoofOptions& opts) {
  SuiteResult res{"Q4: quantum measures convex", 0, 0, 0.0, {}};
  Rng rng = derive_rng(seed, 0x84);
  for (int s = 0; s < samples; ++s) {
    const SpinQuantumNumber spin = roof_spin(rng);
    const int t = uniform_int(rng, 1, spin.two_j() - 1);
    const SpinState a = random_mixed_state(spin, rng, uniform_int(rng, 1, 2));
    const SpinState b = random_pure_state(spin, rng).density();
    const double w = uniform01(rng);
    const SpinState m = SpinState::from_matrix(spin, mix(a.matrix(), b.matrix(), w));
    const MeasureSpec& k = quantum_kind(s);
    const double qa = quantum_measure(a, t, k, opts).value;
    const double qb = quantum_measure(b, t, k, opts).value;
    const double qm = quantum_measure(m, t, k, opts).value;
    const double excess = qm - (w * qa + (1.0 - w) * qb);
    res.record(excess <= 2e-6, excess, describe("mixture", spin, t, k, qm));
  }
  return res;
}

SuiteResult axiom_q6(int samples, std::uint64_t seed, const RoofOptions& opts) {
  SuiteResult res{"Q6: quantum <= total", 0, 0, 0.0, {}};
  Rng rng = derive_rng(seed, 0x86);
  for (int s = 0; s < samples; ++s) {
    const SpinQuantumNumber spin = roof_spin(rng);
    const int t = uniform_int(rng, 1, spin.two_j() - 1);
    const SpinState rho = random_mixed_state(spin, rng, uniform_int(rng, 2, 3));
    const MeasureSpec& k = quantum_kind(s);
    const double q = quantum_measure(rho, t, k, opts).value;
    const double total = total_measure(rho, t, k);
    res.record(q <= total + 1e-6, q - total, describe("mixed state", spin, t, k, q));
  }
  return res;
}

SuiteResult concavity(int samples, std::uint64_t seed) {
  SuiteResult res{"totals concave (purity, fidelity)", 0, 0, 0.0, {}};
  Rng rng = derive_rng(seed, 0x87);
  for (int s = 0; s < samples; ++s) {
    const SpinQuantumNumber spin(uniform_int(rng, 1, 5));
    const int t = uniform_int(rng, 1, spin.two_j());
    const SpinState a = random_mixed_state(spin, rng, uniform_int(rng, 1, spin.dim()));
    const SpinState b = random_mixed_state(spin, rng, uniform_int(rng, 1, spin.dim()));
    const double w = uniform01(rng);
    const SpinState m = SpinState::from_matrix(spin, mix(a.matrix(), b.matrix(), w));
    for (const auto& k : {MeasureSpec::purity(), MeasureSpec::fidelity()}) {
      const double deficit = w * total_measure(a, t, k) + (1.0 - w) * total_measure(b, t, k) - total_measure(m, t, k);
      res.record(deficit <= 1e-10, deficit, describe("pair", spin, t, k, deficit));
    }
  }
  return res;
}

SuiteResult locc_pure(RoofKind kind, int samples, std::uint64_t seed) {
  SuiteResult res{std::string("LOCC on average: ") + (kind == RoofKind::Purity ? "purity" : "hs") + " pure functional", 0, 0, 0.0, {}};
  Rng rng = derive_rng(seed, 0x88 + static_cast<std::uint64_t>(kind));
  for (int s = 0; s < samples; ++s) {
    const SpinQuantumNumber spin(uniform_int(rng, 2, 6));
    const int t = uniform_int(rng, 1, spin.two_j() - 1);
    const auto f = make_functional(kind, t);
    const Matrix X = bipartite_amplitudes(random_pure_state(spin, rng).amplitudes(), spin, t);
    // Two-outcome POVM {E, 1-E} on one side, Kraus operators sqrt(E), sqrt(1-E).
    const bool on_a = s % 2 == 0;
    const int d = on_a ? static_cast<int>(X.rows()) : static_cast<int>(X.cols());
    const Matrix U = haar_unitary(d, rng);
    Eigen::VectorXd e(d), ec(d);
    for (int k = 0; k < d; ++k) {
      e(k) = std::sqrt(uniform01(rng));
      ec(k) = std::sqrt(1.0 - e(k) * e(k));
    }
    const Matrix K1 = U * e.cast<cplx>().asDiagonal() * U.adjoint();
    const Matrix K2 = U * ec.cast<cplx>().asDiagonal() * U.adjoint();
    auto value = [&](const Matrix& Y) { return f->evaluate(Y * Y.adjoint(), nullptr, 0.0); };
    const double before = value(X);
    const double after = on_a ? value(K1 * X) + value(K2 * X) : value(X * K1.transpose()) + value(X * K2.transpose());
    res.record(after <= before + 1e-12, after - before, describe("pure", spin, t, kind == RoofKind::Purity ? MeasureSpec::purity() : MeasureSpec::schatten(2.0), after - before));
  }
  return res;
}

}  // namespace props
