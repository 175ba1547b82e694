// End-to-end acceptance run. Prints one PASS/FAIL line per criterion; the exit status is
// nonzero if any criterion fails. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "anticoherence/applications.hpp"
#include "anticoherence/catalogue.hpp"
#include "anticoherence/channels.hpp"
#include "anticoherence/entanglement.hpp"
#include "anticoherence/errors.hpp"
#include "anticoherence/exact.hpp"
#include "anticoherence/extremal.hpp"
#include "anticoherence/random.hpp"
#include "anticoherence/reduction.hpp"
#include "anticoherence/roof.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace ac;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point a) { return std::chrono::duration<double>(Clock::now() - a).count(); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

RoofOptions roof(int restarts) {
  RoofOptions o;
  o.restarts = restarts;
  o.seed = 2024;
  return o;
}

// ---------------------------------------------------------------------------

void summary_check(Outcome& out) {
  struct Ref {
    const char* state;
    int rank;
    double purity;
    double tol;
    std::vector<std::array<double, 3>> rows;
  };
  const std::vector<Ref> refs = {
      {"j3o2_2AC", 2, 0.5, 1e-6, {{1, 8.0 / 9, 1.0 / 9}, {1, 2.0 / 3, 1.0 / 3}}},
      {"j2_3AC", 2, 0.5, 1e-6, {{1, 1, 0}, {1, 0.75, 0.25}, {1, 2.0 / 3, 1.0 / 3}}},
      {"j5o2_2AC",
       2,
       13.0 / 18,
       1e-6,
       {{1, 8.0 / 9, 1.0 / 9}, {1, 11.0 / 12, 1.0 / 12}, {25.0 / 27, 22.0 / 27, 1.0 / 9}, {55.0 / 72, 5.0 / 9, 5.0 / 24}}},
      {"j5o2_3AC",
       2,
       0.5,
       1e-6,
       {{1, 8.0 / 9, 1.0 / 9}, {1, 11.0 / 12, 1.0 / 12}, {1, 22.0 / 27, 5.0 / 27}, {65.0 / 72, 5.0 / 9, 25.0 / 72}}},
      {"j5o2_rank4", 4, 7.0 / 24, 5e-3, {{1, 0.732, 0.268}, {1, 0.671, 0.329}, {1, 0.596, 0.404}, {1, 0.458, 0.542}}},
  };
  const auto start = Clock::now();
  const auto rows = summary_table(roof(64));
  const double secs = seconds_since(start);
  double worst_exact = 0.0, worst_decimal = 0.0;
  std::size_t k = 0;
  for (const auto& ref : refs) {
    for (std::size_t t = 0; t < ref.rows.size(); ++t, ++k) {
      out.require(k < rows.size(), "missing rows");
      if (k >= rows.size()) return;
      const SummaryRow& r = rows[k];
      const std::string where = r.state + " t=" + std::to_string(r.t);
      out.require(r.state == ref.state && r.t == static_cast<int>(t) + 1, "row order at " + where);
      out.require(r.rank == ref.rank, "rank of " + where);
      out.require(std::abs(r.purity - ref.purity) < 1e-12, "purity of " + where);
      const double err = std::max({std::abs(r.total - ref.rows[t][0]), std::abs(r.quantum - ref.rows[t][1]),
                                   std::abs(r.classical - ref.rows[t][2])});
      (ref.tol < 1e-3 ? worst_exact : worst_decimal) = std::max(ref.tol < 1e-3 ? worst_exact : worst_decimal, err);
      out.require(err <= ref.tol, where + " error " + fmt(err));
    }
  }
  out.require(k == rows.size(), "unexpected extra rows");
  out.require(secs < 300.0, "runtime " + fmt(secs) + " s");
  out.detail << rows.size() << " rows, exact-row error " << fmt(worst_exact) << ", decimal-row error " << fmt(worst_decimal)
             << ", " << fmt(secs) << " s";
}

void curves_check(Outcome& out) {
  const auto start = Clock::now();
  const auto rows = example1_curves(unit_grid(101), roof(64));
  const double secs = seconds_since(start);
  double worst_total = 0.0, worst_roof = 0.0;
  for (const auto& r : rows) {
    const std::string where = r.kind + " t=" + std::to_string(r.t) + " lambda=" + fmt(r.lambda);
    worst_total = std::max(worst_total, r.total_error());
    worst_roof = std::max(worst_roof, r.quantum_error());
    out.require(r.total_error() < 1e-6, where + " total");
    out.require(r.quantum_error() < 1e-5, where + " quantum " + fmt(r.quantum_error()));
  }
  out.require(rows.size() == 101 * 6, "row count");
  out.require(secs < 600.0, "runtime " + fmt(secs) + " s");
  out.detail << rows.size() << " points, total error " << fmt(worst_total) << ", roof error " << fmt(worst_roof) << ", "
             << fmt(secs) << " s";
}

void schmidt_check(Outcome& out) {
  const SpinQuantumNumber spin(4);
  const auto psi = PureSpinState::normalized(spin, catalogue_members("j2_cm_psi", 0.0)[0].second);
  const auto phi = PureSpinState::normalized(spin, catalogue_members("j2_cm_phi", 0.0)[0].second);
  const Eigen::VectorXd a = schmidt(psi, 2).squared();
  const Eigen::VectorXd b = schmidt(phi, 2).squared();
  const double want_a[] = {7.0 / 18 + std::sqrt(6.0) / 9, 7.0 / 18 - std::sqrt(6.0) / 9, 2.0 / 9};
  const double want_b[] = {4.0 / 9 + std::sqrt(87.0) / 36, 4.0 / 9 - std::sqrt(87.0) / 36, 1.0 / 9};
  // compare as sorted multisets
  auto sorted = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  auto as_vec = [](const Eigen::VectorXd& v) {
    std::vector<double> o;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (v(i) > 1e-14) o.push_back(v(i));
    }
    return o;
  };
  const auto ga = sorted(as_vec(a)), gb = sorted(as_vec(b));
  const auto wa = sorted({want_a[0], want_a[1], want_a[2]}), wb = sorted({want_b[0], want_b[1], want_b[2]});
  double err = 0.0;
  out.require(ga.size() == 3 && gb.size() == 3, "Schmidt rank");
  if (ga.size() == 3 && gb.size() == 3) {
    for (int i = 0; i < 3; ++i) err = std::max({err, std::abs(ga[i] - wa[i]), std::abs(gb[i] - wb[i])});
  }
  out.require(err < 1e-12, "spectrum error " + fmt(err));
  out.require(majorized_by(a, b), "majorization");
  out.detail << "spectrum error " << fmt(err) << ", majorization holds";
}

void cm_check(Outcome& out) {
  const auto a = exact::total_cm(catalogue_exact("j2_cm_psi"), 2);
  const auto b = exact::total_cm(catalogue_exact("j2_cm_phi"), 2);
  out.require(a.is_rational() && b.is_rational(), "rational path");
  if (!a.is_rational() || !b.is_rational()) return;
  out.require(a.rational() == exact::make_rational(7, 12), "psi value " + a.to_string());
  out.require(b.rational() == exact::make_rational(31, 48), "phi value " + b.to_string());
  const SpinQuantumNumber spin(4);
  const auto sp = schmidt(PureSpinState::normalized(spin, catalogue_members("j2_cm_psi", 0.0)[0].second), 2).squared();
  const auto sf = schmidt(PureSpinState::normalized(spin, catalogue_members("j2_cm_phi", 0.0)[0].second), 2).squared();
  const bool reachable = majorized_by(sp, sf);
  const bool violation = reachable && a.rational() < b.rational();
  out.require(violation, "monotonicity violation not flagged");
  bool refused = false;
  try {
    (void)quantum_measure(catalogue_state("j2_cm_psi"), 2, MeasureSpec::cm());
  } catch (const DomainError&) {
    refused = true;
  }
  out.require(refused, "cm roof at t = 2 accepted");
  out.detail << "A_2(psi) = " << a.to_string() << ", A_2(phi) = " << b.to_string()
             << ", psi -> phi is LOCC-reachable yet the total grows: violation flagged";
}

void shortcut_check(Outcome& out) {
  RoofOptions heuristic = roof(16);
  heuristic.shortcuts = false;
  double worst = 0.0;
  for (double lam : {0.0, 0.25, 0.5, 0.8, 1.0}) {
    const auto rho = catalogue_state("j7o2_2AC_subspace", lam);
    const auto n1 = negativity_roof(rho, 1);
    const auto n2 = negativity_roof(rho, 2);
    out.require(n1.certified == Certification::Analytic && std::abs(n1.value - 0.5) < 1e-12, "N_1 on the N=7 subspace");
    out.require(n2.certified == Certification::Analytic && std::abs(n2.value - 1.0) < 1e-12, "N_2 on the N=7 subspace");
    if (lam == 0.25 || lam == 0.8) {
      const double h1 = std::abs(negativity_roof(rho, 1, heuristic).value - 0.5);
      const double h2 = std::abs(negativity_roof(rho, 2, heuristic).value - 1.0);
      worst = std::max({worst, h1, h2});
    }
  }
  const auto pair = catalogue_state("j5o2_pt_pair");
  const auto n = negativity_roof(pair, 1);
  out.require(n.certified == Certification::Analytic && std::abs(n.value - std::sqrt(2.0) / 3) < 1e-12, "spin-5/2 pair");
  worst = std::max(worst, std::abs(negativity_roof(pair, 1, heuristic).value - std::sqrt(2.0) / 3));
  out.require(worst < 1e-6, "heuristic error " + fmt(worst));
  out.detail << "shortcut values exact, heuristic error " << fmt(worst);
}

void fidelity_negativity_identity(Outcome& out) {
  Rng rng = derive_rng(6, 0);
  double worst = 0.0;
  int checks = 0;
  for (int s = 0; s < 1000; ++s) {
    const SpinQuantumNumber spin(1 + s % 6);
    const auto psi = random_pure_state(spin, rng);
    for (int t = 1; t < spin.two_j(); ++t) {
      const auto r = fidelity_negativity_check(psi, t);
      worst = std::max(worst, std::abs(r.lhs - r.rhs));
      ++checks;
    }
  }
  out.require(worst < 1e-10, "difference " + fmt(worst));
  out.detail << "1000 states, " << checks << " (state, t) pairs, max difference " << fmt(worst);
}

void ratio_check(Outcome& out) {
  Rng rng = derive_rng(7, 0);
  double worst = 0.0;
  const RoofOptions o = roof(16);
  for (int s = 0; s < 200; ++s) {
    const SpinQuantumNumber spin(3 + s % 2);
    const int N = spin.two_j();
    const int rank = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(spin.dim() - 1));
    const auto rho = random_mixed_state(spin, rng, rank);
    const int t = 1;
    const double a = quantum_purity(rho, t, o).value;
    const double b = quantum_purity(rho, N - t, o).value;
    const double want = (t + 1.0) * (N - t) / (t * (N + 1.0 - t));
    const double err = std::abs(a / b - want);
    worst = std::max(worst, err);
    out.require(err < 1e-4, "2j=" + std::to_string(N) + " rank " + std::to_string(rank) + " ratio error " + fmt(err));
  }
  out.detail << "200 states (j = 3/2, 2), max ratio error " << fmt(worst);
}

void t4_check(Outcome& out) {
  int hard = 0, soft = 0, runs = 0;
  double worst_hard = 0.0;
  std::ostringstream soft_log;
  const auto start = Clock::now();
  for (const auto& spec : {MeasureSpec::purity(), MeasureSpec::schatten(2.0), MeasureSpec::fidelity(), MeasureSpec::schatten(1.0)}) {
    for (int two_j = 1; two_j <= 5; ++two_j) {
      for (int t = 1; t <= two_j; ++t) {
        const T4Report r = t4_harness(spec, SpinQuantumNumber(two_j), t, 1000, 0x7400 + two_j * 10 + t);
        ++runs;
        if (r.conjectural) {
          soft += r.violations;
          if (r.violations) soft_log << spec.name() << " 2j=" << two_j << " t=" << t << ": " << r.violations << "; ";
        } else {
          hard += r.violations;
          worst_hard = std::min(worst_hard, r.worst_margin);
          out.require(r.violations == 0, spec.name() + " 2j=" + std::to_string(two_j) + " t=" + std::to_string(t));
        }
      }
    }
  }
  out.detail << runs << " runs x 1000 channels, purity/HS violations " << hard << ", fidelity/trace violations " << soft
             << " (conjectural)";
  if (soft) out.detail << " [soft: " << soft_log.str() << "]";
  out.detail << ", " << fmt(seconds_since(start)) << " s";
}

void reduction_check(Outcome& out) {
  Rng rng = derive_rng(9, 0);
  double worst = 0.0;
  for (int N = 1; N <= 8; ++N) {
    for (int s = 0; s < 100; ++s) {
      const SpinQuantumNumber spin(N);
      const auto rho = s % 2 ? random_pure_state(spin, rng).density() : random_mixed_state(spin, rng);
      const int t = 1 + s % N;
      const Matrix want = oracle::symmetric_marginal(rho.matrix(), N, t);
      worst = std::max(worst, (reduce(rho, t).matrix() - want).cwiseAbs().maxCoeff());
    }
  }
  out.require(worst < 1e-10, "error " + fmt(worst));
  out.detail << "N = 1..8, 100 states each, max error " << fmt(worst);
}

void staircase_check(Outcome& out) {
  struct Want {
    int two_j;
    std::vector<std::pair<double, int>> points;
  };
  const std::vector<Want> wants = {{3, {{0.5, 2}}}, {4, {{0.5, 3}}}, {5, {{13.0 / 18, 2}, {0.5, 3}, {7.0 / 24, 4}}}};
  for (const auto& w : wants) {
    const SpinQuantumNumber spin(w.two_j);
    std::vector<double> grid;
    for (const auto& p : w.points) grid.push_back(p.first);
    const Staircase s = staircase(spin, grid);
    for (std::size_t i = 0; i < w.points.size(); ++i) {
      const auto [purity, order] = w.points[i];
      const std::string where = "j=" + spin.to_string() + " purity " + fmt(purity);
      out.require(s.grid[i].second >= order, where + " order " + std::to_string(s.grid[i].second));
      const StaircasePoint& th = s.thresholds[static_cast<std::size_t>(order - 1)];
      out.require(th.certified == WitnessSource::ExplicitState, where + " witness not explicit");
      bool catalogued = true;
      try {
        (void)catalogue_info(th.witness_name);
      } catch (const DomainError&) {
        catalogued = false;
      }
      out.require(catalogued, where + " witness '" + th.witness_name + "' not catalogued");
      if (catalogued) {
        const SpinState wst = catalogue_state(th.witness_name);
        out.require(is_t_anticoherent(wst, order, 1e-10), where + " witness not " + std::to_string(order) + "-AC");
        out.require(std::abs(wst.purity() - th.purity) < 1e-12 && wst.purity() >= purity - 1e-12, where + " witness purity");
      }
      out.detail << "(" << fmt(purity) << ", " << order << ") by " << th.witness_name << "; ";
    }
  }
}

void suites_check(Outcome& out) {
  const RoofOptions o = roof(16);
  const auto start = Clock::now();
  std::vector<props::SuiteResult> res = {props::axiom_t1(500, 11), props::axiom_t2(500, 11), props::axiom_t3(500, 11),
                                         props::axiom_q1(500, 11, o), props::axiom_q2(500, 11), props::axiom_q3(500, 11, o),
                                         props::axiom_q4(500, 11, o), props::axiom_q6(500, 11, o)};
  for (const auto& r : res) {
    out.require(r.ok(), r.name + ": " + std::to_string(r.violations) + " violations, " + r.first_failure);
    out.detail << r.name.substr(0, r.name.find(':')) << " " << r.samples << "/" << r.violations << " ";
  }
  out.detail << "(samples/violations), " << fmt(seconds_since(start)) << " s";
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> all = {
      {1, "summary-state triples", summary_check},
      {2, "spin-2 rank-2 family curves", curves_check},
      {3, "Schmidt spectra and majorization", schmidt_check},
      {4, "cumulative-multipole LOCC counterexample", cm_check},
      {5, "convex-roof shortcuts", shortcut_check},
      {6, "fidelity-negativity identity", fidelity_negativity_identity},
      {7, "quantum purity ratio t vs N-t", ratio_check},
      {8, "monotonicity under covariant channels", t4_check},
      {9, "reduction against brute-force marginals", reduction_check},
      {10, "staircase attainability", staircase_check},
      {11, "axiom property suites", suites_check},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    Outcome out;
    const auto start = Clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    if (!out.pass) ++failures;
    std::printf("%s criterion %2d: %s | %s [%.1f s]\n", out.pass ? "PASS" : "FAIL", c.id, c.name, out.detail.str().c_str(),
                seconds_since(start));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
