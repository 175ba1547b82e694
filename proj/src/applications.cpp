#include "anticoherence/applications.hpp"

#include <algorithm>
#include <cmath>

#include "anticoherence/catalogue.hpp"
#include "anticoherence/errors.hpp"
#include "anticoherence/exact.hpp"
#include "anticoherence/measures.hpp"
#include "anticoherence/parallel.hpp"
#include "anticoherence/reduction.hpp"

namespace ac {

LossFamily parse_loss_family(std::string_view text) {
  if (text == "ghz") return LossFamily::Ghz;
  if (text == "w") return LossFamily::W;
  if (text == "file") return LossFamily::UserFile;
  throw DomainError("unknown state family '" + std::string(text) + "' (expected ghz, w or file)");
}

std::string to_string(LossFamily f) {
  switch (f) {
    case LossFamily::Ghz: return "ghz";
    case LossFamily::W: return "w";
    case LossFamily::UserFile: return "file";
  }
  return "?";
}

namespace {

RoofOptions serial(RoofOptions o) {
  o.threads = 1;
  return o;
}

}  // namespace

LossScan loss_scan_states(const std::string& family, const std::vector<SpinState>& states, int t,
                          const RoofOptions& opts) {
  if (t < 1) throw DomainError("t must be at least 1");
  struct Task {
    std::size_t state;
    int q;
  };
  LossScan scan;
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const int N = states[i].spin().two_j();
    for (int q = 1; q <= N; ++q) {
      if (q < t) {
        scan.notes.push_back(family + " N=" + std::to_string(N) + " q=" + std::to_string(q) + ": t=" +
                             std::to_string(t) + " exceeds q, skipped");
      } else {
        tasks.push_back({i, q});
      }
    }
  }
  scan.records.resize(tasks.size());
  const RoofOptions inner = serial(opts);
  parallel_for(
      tasks.size(),
      [&](std::size_t k) {
        const Task& task = tasks[k];
        const SpinState& rho = states[task.state];
        const int N = rho.spin().two_j();
        const SpinState marginal = task.q == N ? rho : reduce(rho, task.q).as_spin_state();
        const RoofResult r = quantum_purity(marginal, t, inner);
        scan.records[k] = {family, N, task.q, t, std::clamp(r.value, 0.0, 1.0), to_string(r.certified)};
      },
      opts.threads);
  return scan;
}

LossScan loss_scan(LossFamily family, int n_min, int n_max, int t, const RoofOptions& opts) {
  if (family == LossFamily::UserFile) throw DomainError("the file family needs user-supplied states");
  if (n_min < 1 || n_max < n_min) throw DomainError("invalid N range");
  std::vector<SpinState> states;
  for (int N = n_min; N <= n_max; ++N) states.push_back(catalogue_state(to_string(family), N));
  return loss_scan_states(to_string(family), states, t, opts);
}

double CurveRow::total_error() const { return std::abs(total_analytic - total_numeric); }
double CurveRow::quantum_error() const { return std::abs(quantum_analytic - quantum_numeric); }

std::vector<double> unit_grid(int n) {
  if (n < 2) throw DomainError("a grid needs at least 2 points");
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = static_cast<double>(i) / (n - 1);
  return g;
}

namespace {

struct Closed {
  double total, quantum;
};

Closed closed_form(bool purity, int t, double lam) {
  const double mix = lam * (1.0 - lam);
  if (t == 1) return {1.0, 1.0};
  if (purity) {
    if (t == 2) return {1.0, lam * lam - lam + 1.0};
    return {2.0 / 3.0 * (-2.0 * lam * lam + 2.0 * lam + 1.0), 2.0 / 3.0};
  }
  if (t == 2) return {1.0, 0.5 + std::abs(lam - 0.5)};
  return {(1.0 + 4.0 * std::sqrt(mix)) / 3.0, 1.0 / 3.0};
}

}  // namespace

std::vector<CurveRow> example1_curves(const std::vector<double>& lambdas, const RoofOptions& opts) {
  for (double lam : lambdas) {
    if (!(lam >= 0.0 && lam <= 1.0)) throw DomainError("lambda must lie in [0, 1]");
  }
  constexpr int kPerLambda = 6;
  std::vector<CurveRow> rows(lambdas.size() * kPerLambda);
  const RoofOptions inner = serial(opts);
  parallel_for(
      rows.size(),
      [&](std::size_t k) {
        const double lam = lambdas[k / kPerLambda];
        const int slot = static_cast<int>(k % kPerLambda);
        const bool purity = slot < 3;
        const int t = 1 + slot % 3;
        const SpinState rho = catalogue_state("j2_rank2", lam);
        const Closed c = closed_form(purity, t, lam);
        CurveRow row;
        row.lambda = lam;
        row.kind = purity ? "purity" : "fidelity";
        row.t = t;
        row.total_analytic = c.total;
        row.quantum_analytic = c.quantum;
        row.classical_analytic = c.total - c.quantum;
        row.total_numeric = purity ? total_purity(rho, t) : total_fidelity(rho, t);
        const RoofResult r = purity ? quantum_purity(rho, t, inner) : quantum_fidelity(rho, t, inner);
        row.quantum_numeric = r.value;
        row.classical_numeric = row.total_numeric - r.value;
        row.certification = to_string(r.certified);
        rows[k] = row;
      },
      opts.threads);
  return rows;
}

const std::vector<std::string>& summary_states() {
  static const std::vector<std::string> names = {"j3o2_2AC", "j2_3AC", "j5o2_2AC", "j5o2_3AC", "j5o2_rank4"};
  return names;
}

std::vector<SummaryRow> summary_table(const RoofOptions& opts) {
  struct Task {
    std::string name;
    int t;
  };
  std::vector<Task> tasks;
  for (const auto& name : summary_states()) {
    const int two_j = catalogue_info(name).two_j;
    for (int t = 1; t <= std::min(two_j - 1, 4); ++t) tasks.push_back({name, t});
  }
  std::vector<SummaryRow> rows(tasks.size());
  const RoofOptions inner = serial(opts);
  parallel_for(
      tasks.size(),
      [&](std::size_t k) {
        const Task& task = tasks[k];
        const exact::ExactState ex = catalogue_exact(task.name);
        const SpinState rho = ex.to_state();
        SummaryRow row;
        row.state = task.name;
        row.two_j = rho.spin().two_j();
        const Eigen::VectorXd ev = rho.spectrum();
        row.rank = static_cast<int>((ev.array() > 1e-10).count());
        const exact::Surd p = ex.purity();
        row.purity = p.to_double();
        row.purity_exact = p.to_string();
        row.t = task.t;
        const exact::Surd total = exact::total_purity(ex, task.t);
        row.total = total.to_double();
        if (total.is_rational()) row.total_exact = exact::to_string(total.rational());
        const RoofResult r = quantum_purity(rho, task.t, inner);
        row.quantum = r.value;
        row.classical = row.total - r.value;
        row.certification = to_string(r.certified);
        row.roof_gap = r.best_gap;
        rows[k] = row;
      },
      opts.threads);
  return rows;
}

}  // namespace ac
