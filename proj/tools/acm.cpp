#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/version.hpp>

#include "CLI11.hpp"
#include "anticoherence/applications.hpp"
#include "anticoherence/catalogue.hpp"
#include "anticoherence/channels.hpp"
#include "anticoherence/entanglement.hpp"
#include "anticoherence/errors.hpp"
#include "anticoherence/evaluate.hpp"
#include "anticoherence/exact.hpp"
#include "anticoherence/extremal.hpp"
#include "anticoherence/reduction.hpp"
#include "anticoherence/roof.hpp"
#include "anticoherence/state_io.hpp"

#ifndef ACM_VERSION
#define ACM_VERSION "0.0.0"
#endif

using namespace ac;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitDomain = 3;
constexpr int kExitUsage = 64;

struct Globals {
  double tol = 1e-6;
  std::uint64_t seed = 1;
  int restarts = 64;
  std::string out;
  bool no_validate = false;
  bool json = false;
  bool csv = false;
  bool timing = false;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
};

struct Output {
  Json payload = Json::object();
  std::optional<Table> table;
  std::vector<std::string> notes;
  int exit_code = 0;
};

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (!v.is_string()) return v.dump();
  const std::string s = v.get<std::string>();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void flatten(const Json& v, const std::string& prefix, std::vector<std::pair<std::string, Json>>& out) {
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it) flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (v.is_array() && !v.empty() && (v[0].is_object() || v[0].is_array())) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], prefix + "." + std::to_string(i), out);
  } else if (v.is_array()) {
    out.emplace_back(prefix, v.dump());
  } else {
    out.emplace_back(prefix, v);
  }
}

std::string render(const Output& o, const Json& manifest, bool csv) {
  std::ostringstream s;
  if (!csv) {
    Json doc = o.payload;
    doc["manifest"] = manifest;
    if (o.table) {
      Json rows = Json::array();
      for (const auto& r : o.table->rows) {
        Json row = Json::object();
        for (std::size_t c = 0; c < r.size(); ++c) row[o.table->columns[c]] = r[c];
        rows.push_back(row);
      }
      doc["columns"] = o.table->columns;
      doc["rows"] = rows;
    }
    if (!o.notes.empty()) doc["notes"] = o.notes;
    s << doc.dump(2) << "\n";
    return s.str();
  }
  s << "# manifest " << manifest.dump() << "\n";
  for (const auto& n : o.notes) s << "# note " << n << "\n";
  std::vector<std::string> cols;
  std::vector<std::vector<Json>> rows;
  if (o.table) {
    cols = o.table->columns;
    rows = o.table->rows;
  } else {
    cols = {"key", "value"};
    std::vector<std::pair<std::string, Json>> flat;
    flatten(o.payload, "", flat);
    for (auto& [k, v] : flat) rows.push_back({k, v});
  }
  for (std::size_t c = 0; c < cols.size(); ++c) s << (c ? "," : "") << cols[c];
  s << "\n";
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) s << (c ? "," : "") << csv_cell(r[c]);
    s << "\n";
  }
  return s.str();
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot write '" + path + "'");
  f << text;
}

RoofOptions roof_options(const Globals& g) {
  RoofOptions o;
  o.restarts = g.restarts;
  o.seed = g.seed;
  o.tol = g.tol;
  return o;
}

StateDocument load(const std::string& path) {
  if (path.empty() || path == "-") return read_state(std::cin);
  return read_state_file(path);
}

Json roof_json(const RoofResult& r, bool with_ensemble) {
  Json j{{"value", r.value},
         {"certification", to_string(r.certified)},
         {"method", r.method},
         {"restarts", r.restarts},
         {"best_gap", r.best_gap},
         {"converged", r.converged},
         {"restart_values", r.restart_values},
         {"ensemble_size", r.ensemble.members.size()}};
  if (with_ensemble) {
    Json members = Json::array();
    for (const auto& m : r.ensemble.members) {
      Json amps = Json::array();
      for (Eigen::Index k = 0; k < m.psi.size(); ++k) amps.push_back(complex_to_json(m.psi(k)));
      members.push_back(Json{{"weight", m.weight}, {"amplitudes", amps}});
    }
    j["ensemble"] = members;
  }
  return j;
}

exact::ExactState exact_from_source(const StateSource& s) {
  if (s.lambda.empty()) return catalogue_exact(s.catalogue, s.two_j);
  return catalogue_exact(s.catalogue, exact::parse_rational(s.lambda), s.two_j);
}

// Exact total on the rational path, when the input names its recipe and the numbers agree.
std::optional<std::string> exact_total(const StateDocument& doc, const SpinState& rho, int t, const MeasureSpec& spec) {
  if (!doc.source) return std::nullopt;
  if (spec.kind != MeasureKind::Purity && spec.kind != MeasureKind::CumulativeMultipole) return std::nullopt;
  if (spec.kind == MeasureKind::CumulativeMultipole && t >= rho.spin().two_j()) return std::nullopt;
  const exact::ExactState ex = exact_from_source(*doc.source);
  if (ex.spin() != rho.spin() || (ex.to_matrix() - rho.matrix()).cwiseAbs().maxCoeff() > 1e-12) return std::nullopt;
  const exact::Surd v = spec.kind == MeasureKind::Purity ? exact::total_purity(ex, t) : exact::total_cm(ex, t);
  if (!v.is_rational()) return std::nullopt;
  return exact::to_string(v.rational());
}

Json state_summary(const SpinState& rho) {
  return Json{{"two_j", rho.spin().two_j()}, {"j", rho.spin().to_string()}, {"purity", rho.purity()}};
}

Json exact_matrix_json(const exact::ExactState& ex) {
  Json rows = Json::array();
  const int d = ex.spin().dim();
  for (int r = 0; r < d; ++r) {
    Json row = Json::array();
    for (int c = 0; c < d; ++c) row.push_back(Json::array({ex(r, c).real().to_string(), ex(r, c).imag().to_string()}));
    rows.push_back(row);
  }
  return rows;
}

std::string version_string() { return ACM_VERSION; }

Json manifest_json(const std::vector<std::string>& argv, const Globals& g) {
  std::string cmd;
  for (const auto& a : argv) cmd += (cmd.empty() ? "" : " ") + a;
  return Json{{"command", cmd},
              {"seed", g.seed},
              {"restarts", g.restarts},
              {"tolerances", {{"roof", g.tol}, {"input", kInputTolerance}, {"validate", !g.no_validate}}},
              {"versions",
               {{"acm", version_string()},
                {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                              std::to_string(EIGEN_MINOR_VERSION)},
                {"boost", BOOST_LIB_VERSION},
                {"compiler", __VERSION__}}}};
}

// ---------------------------------------------------------------------------
// subcommands

Output cmd_measure(const Globals& g, const std::string& path, int t, const std::string& kind, bool quantum,
                   bool classical) {
  const StateDocument doc = load(path);
  const SpinState rho = doc.state(!g.no_validate);
  const MeasureSpec spec = MeasureSpec::parse(kind);
  const MeasureResult m = evaluate_measure(rho, t, spec, quantum || classical, roof_options(g));
  Json r{{"kind", spec.name()}, {"t", t}, {"total", m.total}, {"conjectural_t4", m.conjectural_t4}};
  if (auto ex = exact_total(doc, rho, t, spec)) r["total_exact"] = *ex;
  if (m.quantum) r["quantum"] = *m.quantum;
  if (m.classical) r["classical"] = *m.classical;
  if (m.roof) r["roof"] = roof_json(*m.roof, false);
  Output o;
  o.payload = Json{{"state", state_summary(rho)}, {"result", r}};
  return o;
}

Output cmd_roof(const Globals& g, const std::string& path, int t, const std::string& kind, int ensemble_size) {
  const SpinState rho = load(path).state(!g.no_validate);
  RoofOptions opts = roof_options(g);
  opts.ensemble_size = ensemble_size;
  RoofResult r;
  if (kind == "purity") {
    r = quantum_purity(rho, t, opts);
  } else if (kind == "hs") {
    r = quantum_hs(rho, t, opts);
  } else if (kind == "fidelity") {
    r = quantum_fidelity(rho, t, opts);
  } else if (kind == "negativity") {
    r = negativity_roof(rho, t, opts);
  } else {
    throw DomainError("roof kind must be purity, hs, fidelity or negativity");
  }
  Output o;
  o.payload = Json{{"state", state_summary(rho)}, {"kind", kind}, {"t", t}, {"result", roof_json(r, true)}};
  return o;
}

Output cmd_negativity(const Globals& g, const std::string& path, int t, bool pure_schmidt) {
  const StateDocument doc = load(path);
  const SpinState rho = doc.state(!g.no_validate);
  Output o;
  o.payload = Json{{"state", state_summary(rho)}, {"t", t}};
  if (pure_schmidt) {
    const PureSpinState psi = doc.pure_state(!g.no_validate);
    const SchmidtSpectrum s = schmidt(psi, t);
    o.payload["method"] = "schmidt";
    o.payload["negativity"] = negativity_pure(psi, t);
    o.payload["schmidt_coefficients"] = std::vector<double>(s.coefficients.data(), s.coefficients.data() + s.coefficients.size());
    o.payload["negativity_partial_transpose"] = negativity_mixed(rho, t);
  } else {
    o.payload["method"] = "partial-transpose";
    o.payload["negativity"] = negativity_mixed(rho, t);
  }
  return o;
}

Output cmd_reduce(const Globals& g, const std::string& path, int t) {
  const SpinState rho = load(path).state(!g.no_validate);
  const SpinState red = reduce(rho, t).as_spin_state();
  Output o;
  o.payload = state_to_json(red);
  o.payload["parent_two_j"] = rho.spin().two_j();
  o.payload["t"] = t;
  return o;
}

Output cmd_channel(const Globals& g, const std::string& path, const std::string& spec_file, const std::string& rotation) {
  const SpinState rho = load(path).state(!g.no_validate);
  ChannelSpec spec = spec_file.empty() ? ChannelSpec::random_rotation(rho.spin(), AngleDensity::parse(rotation))
                                       : read_channel_file(spec_file);
  const CpCheck cp = choi_cp_check(spec);
  if (!cp.cp && !g.no_validate) {
    throw ValidationError("channel is not completely positive: Choi min eigenvalue " + std::to_string(cp.min_eigenvalue),
                          cp.min_eigenvalue);
  }
  const SpinState out = apply_channel(spec, rho);
  Output o;
  o.payload = state_to_json(out);
  o.payload["channel"] = channel_to_json(spec);
  o.payload["cp"] = Json{{"completely_positive", cp.cp}, {"choi_min_eigenvalue", cp.min_eigenvalue}};
  return o;
}

Output cmd_t4(const Globals& g, const std::string& kind, const std::string& j, std::optional<int> t, int trials) {
  const SpinQuantumNumber spin = SpinQuantumNumber::parse(j);
  const MeasureSpec spec = MeasureSpec::parse(kind);
  std::vector<int> ts;
  if (t) {
    ts.push_back(*t);
  } else {
    for (int k = 1; k <= spin.two_j(); ++k) ts.push_back(k);
  }
  Output o;
  Table tab{{"kind", "j", "t", "trials", "violations", "worst_margin", "conjectural", "status", "box_channels",
             "rotation_channels"},
            {}};
  int violations = 0;
  bool hard = false;
  for (int tt : ts) {
    const T4Report r = t4_harness(spec, spin, tt, trials, g.seed);
    violations += r.violations;
    hard = hard || r.hard_fail();
    const std::string status = r.violations == 0 ? "pass" : (r.hard_fail() ? "fail" : "soft-fail");
    tab.rows.push_back({spec.name(), spin.to_string(), tt, r.trials, r.violations, r.worst_margin, r.conjectural, status,
                        r.box_channels, r.rotation_channels});
  }
  o.payload = Json{{"kind", spec.name()}, {"j", spin.to_string()}, {"violations", violations}, {"hard_fail", hard}};
  o.table = tab;
  return o;
}

Output cmd_staircase(const Globals& g, const std::string& j, int grid_points) {
  const SpinQuantumNumber spin = SpinQuantumNumber::parse(j);
  if (spin.two_j() < 1) throw DomainError("staircase needs j >= 1/2");
  if (grid_points < 2) throw DomainError("--grid needs at least 2 points");
  std::vector<double> grid;
  const double lo = 1.0 / spin.dim();
  for (int i = 0; i < grid_points; ++i) grid.push_back(lo + (1.0 - lo) * i / (grid_points - 1));
  SearchOptions so;
  so.seed = g.seed;
  const Staircase s = staircase(spin, grid, so);
  Output o;
  Table tab{{"purity", "max_order"}, {}};
  for (const auto& [p, order] : s.grid) tab.rows.push_back({p, order});
  Json th = Json::array();
  for (const auto& p : s.thresholds) {
    th.push_back(Json{{"t", p.max_order},
                      {"purity", p.purity},
                      {"certified", to_string(p.certified)},
                      {"witness_name", p.witness_name},
                      {"catalogue_purity", p.catalogue_purity},
                      {"search_purity", p.search_purity},
                      {"exceeds_catalogue", p.exceeds_catalogue},
                      {"witness", state_to_json(p.witness)}});
    std::ostringstream n;
    n.precision(12);
    n << "t=" << p.max_order << " threshold=" << p.purity << " witness=" << p.witness_name << " ("
      << to_string(p.certified) << ")";
    if (p.exceeds_catalogue) n << " search exceeds catalogue";
    o.notes.push_back(n.str());
  }
  o.payload = Json{{"j", spin.to_string()}, {"thresholds", th}};
  o.table = tab;
  return o;
}

Output cmd_catalogue(const std::string& name, const std::optional<std::string>& lambda, const std::optional<std::string>& j) {
  Output o;
  if (name.empty()) {
    Table tab{{"name", "two_j", "has_lambda", "default_lambda", "summary"}, {}};
    for (const auto& e : catalogue()) tab.rows.push_back({e.name, e.two_j, e.has_lambda, e.default_lambda, e.summary});
    o.table = tab;
    return o;
  }
  const CatalogueInfo& info = catalogue_info(name);
  StateSource src;
  src.catalogue = info.name;
  if (info.two_j < 0) {
    if (!j) throw DomainError("'" + name + "' needs --j");
    src.two_j = SpinQuantumNumber::parse(*j).two_j();
  } else if (j && SpinQuantumNumber::parse(*j).two_j() != info.two_j) {
    throw DomainError("'" + name + "' has fixed spin " + SpinQuantumNumber(info.two_j).to_string());
  }
  if (info.has_lambda) {
    src.lambda = exact::to_string(exact::parse_rational(lambda ? *lambda : info.default_lambda));
  } else if (lambda) {
    throw DomainError("'" + name + "' takes no --lambda");
  }
  const exact::ExactState ex = exact_from_source(src);
  const SpinState rho = ex.to_state();
  const double lam = src.lambda.empty() ? 0.0 : exact::to_double(exact::parse_rational(src.lambda));
  std::vector<Vector> support;
  for (const auto& [w, v] : catalogue_members(info.name, lam, src.two_j)) {
    if (w != 0.0) support.push_back(v);
  }
  if (support.size() == 1) {
    o.payload = state_to_json(PureSpinState::normalized(rho.spin(), support.front()));
  } else {
    o.payload = state_to_json(rho);
  }
  o.payload["name"] = info.name;
  o.payload["summary"] = info.summary;
  o.payload["source"] = source_to_json(src);
  o.payload["purity_exact"] = ex.purity().to_string();
  o.payload["ac_order"] = exact_ac_order(ex);
  o.payload["exact_matrix"] = exact_matrix_json(ex);
  return o;
}

Output cmd_table1(const Globals& g) {
  Output o;
  Table tab{{"state", "two_j", "rank", "purity", "purity_exact", "t", "total", "total_exact", "quantum", "classical",
             "certification", "roof_gap"},
            {}};
  for (const auto& r : summary_table(roof_options(g))) {
    tab.rows.push_back({r.state, r.two_j, r.rank, r.purity, r.purity_exact, r.t, r.total, r.total_exact, r.quantum,
                        r.classical, r.certification, r.roof_gap});
  }
  o.table = tab;
  return o;
}

Output cmd_fig1(const Globals& g, int grid) {
  Output o;
  Table tab{{"lambda", "kind", "t", "total_analytic", "total_numeric", "quantum_analytic", "quantum_numeric",
             "classical_analytic", "classical_numeric", "certification"},
            {}};
  double worst = 0.0;
  for (const auto& r : example1_curves(unit_grid(grid), roof_options(g))) {
    worst = std::max({worst, r.total_error(), r.quantum_error()});
    tab.rows.push_back({r.lambda, r.kind, r.t, r.total_analytic, r.total_numeric, r.quantum_analytic, r.quantum_numeric,
                        r.classical_analytic, r.classical_numeric, r.certification});
  }
  std::ostringstream n;
  n << "max |analytic - numeric| = " << worst;
  o.notes.push_back(n.str());
  o.payload = Json{{"max_abs_error", worst}};
  o.table = tab;
  return o;
}

Output cmd_fig2(const Globals& g, const std::string& family, int nmin, int nmax, int t, const std::vector<std::string>& files) {
  const LossFamily fam = parse_loss_family(family);
  LossScan scan;
  if (fam == LossFamily::UserFile) {
    if (files.empty()) throw DomainError("--family file needs at least one --state");
    std::vector<SpinState> states;
    for (const auto& f : files) states.push_back(load(f).state(!g.no_validate));
    scan = loss_scan_states("file", states, t, roof_options(g));
  } else {
    scan = loss_scan(fam, nmin, nmax, t, roof_options(g));
  }
  Output o;
  Table tab{{"family", "N", "q", "t", "value", "certification"}, {}};
  for (const auto& r : scan.records) tab.rows.push_back({r.family, r.N, r.q, r.t, r.value, r.certification});
  o.table = tab;
  o.notes = scan.notes;
  return o;
}

Output cmd_validate(const std::string& path) {
  const StateDocument doc = load(path);
  const DensityCheck& c = doc.check;
  Output o;
  o.payload = Json{{"valid", c.ok()},
                   {"two_j", doc.spin.two_j()},
                   {"kind", doc.pure ? "pure" : "mixed"},
                   {"hermitian", c.hermitian},
                   {"normalized", c.normalized},
                   {"positive", c.positive},
                   {"hermiticity_error", c.hermiticity_error},
                   {"trace_error", c.trace_error},
                   {"min_eigenvalue", c.min_eigenvalue},
                   {"tolerance", doc.tol}};
  if (!c.ok()) {
    o.payload["report"] = c.describe();
    o.exit_code = kExitValidation;
  }
  return o;
}

void print_error(const std::string& type, const std::string& message, std::optional<double> min_eig = std::nullopt) {
  Json e{{"type", type}, {"message", message}};
  if (min_eig) e["min_eigenvalue"] = *min_eig;
  std::cerr << Json{{"error", e}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::string> args(argv, argv + argc);
  if (!args.empty()) args[0] = "acm";

  CLI::App app{"Anticoherence measures for spin states"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);
  Globals g;
  app.add_option("--tol", g.tol, "roof convergence tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--restarts", g.restarts, "convex-roof restarts")->check(CLI::Range(1, 100000));
  app.add_option("--out", g.out, "output file (default stdout)");
  app.add_flag("--no-validate", g.no_validate, "accept states failing the input checks");
  auto* json_flag = app.add_flag("--json", g.json, "JSON output");
  app.add_flag("--csv", g.csv, "CSV output")->excludes(json_flag);
  app.add_flag("--timing", g.timing, "record wall time in the manifest (output is then not byte-reproducible)");
  app.fallthrough();

  std::string state = "-";
  int t = 0;
  std::string kind = "purity";
  auto add_state = [&](CLI::App* sub) { sub->add_option("--state", state, "state file, - for stdin"); };

  bool quantum = false, classical = false;
  auto* measure = app.add_subcommand("measure", "total measure, optionally split into quantum and classical parts");
  add_state(measure);
  measure->add_option("--t", t)->required();
  measure->add_option("--kind", kind, "purity|hs|trace|fidelity|cm|schatten:P");
  measure->add_flag("--quantum", quantum);
  measure->add_flag("--classical", classical);

  int ensemble_size = 0;
  auto* roof = app.add_subcommand("roof", "convex-roof evaluation with the optimal ensemble");
  add_state(roof);
  roof->add_option("--t", t)->required();
  roof->add_option("--kind", kind, "purity|hs|fidelity|negativity");
  roof->add_option("--ensemble-size", ensemble_size)->check(CLI::NonNegativeNumber);

  bool pure_schmidt = false;
  auto* neg = app.add_subcommand("negativity", "negativity across the t | N-t split");
  add_state(neg);
  neg->add_option("--t", t)->required();
  neg->add_flag("--pure-schmidt", pure_schmidt, "pure input: Schmidt-coefficient formula");

  auto* red = app.add_subcommand("reduce", "symmetric t-qubit marginal as a spin-t/2 state");
  add_state(red);
  red->add_option("--t", t)->required();

  std::string spec_file, rotation;
  auto* chan = app.add_subcommand("channel", "apply a rotationally covariant channel");
  add_state(chan);
  auto* spec_opt = chan->add_option("--spec", spec_file, "JSON {\"two_j\", \"f\"}");
  auto* rot_opt = chan->add_option("--rotation", rotation, "angle density, e.g. 0.5*identity+0.5*delta:pi/2");
  spec_opt->excludes(rot_opt);

  std::string j;
  std::optional<int> t_opt;
  int trials = 1000;
  auto* t4 = app.add_subcommand("t4-scan", "monotonicity of a total under random CP covariant channels");
  t4->add_option("--kind", kind);
  t4->add_option("--j", j)->required();
  t4->add_option("--t", t_opt, "all t = 1..2j when omitted");
  t4->add_option("--trials", trials)->check(CLI::PositiveNumber);

  int grid = 101;
  auto* stair = app.add_subcommand("staircase", "maximal anticoherence order against purity");
  stair->add_option("--j", j)->required();
  stair->add_option("--grid", grid, "number of purity points");

  std::string name;
  std::optional<std::string> lambda, j_opt;
  auto* cat = app.add_subcommand("catalogue", "named states, or the list of names");
  cat->add_option("--name", name);
  cat->add_option("--lambda", lambda, "mixing weight, exact text such as 1/3");
  cat->add_option("--j", j_opt, "spin for ghz and w");

  auto* tab1 = app.add_subcommand("table1", "purity-based triples of the summary states");

  auto* fig1 = app.add_subcommand("fig1", "total, quantum and classical curves of the spin-2 rank-2 family");
  fig1->add_option("--grid", grid);

  std::string family;
  int nmin = 1, nmax = 0;
  std::vector<std::string> files;
  auto* fig2 = app.add_subcommand("fig2", "quantum purity measure of marginals under particle loss");
  fig2->add_option("--family", family, "ghz|w|file")->required();
  fig2->add_option("--nmin", nmin);
  fig2->add_option("--nmax", nmax);
  fig2->add_option("--t", t)->required();
  fig2->add_option("--state", files, "state files for --family file");

  auto* val = app.add_subcommand("validate", "check a state file");
  add_state(val);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }
  if (chan->parsed() && spec_file.empty() && rotation.empty()) {
    std::cerr << "channel needs --spec or --rotation\n\n" << chan->help();
    return kExitUsage;
  }

  try {
    Output o;
    if (measure->parsed()) {
      o = cmd_measure(g, state, t, kind, quantum, classical);
    } else if (roof->parsed()) {
      o = cmd_roof(g, state, t, kind, ensemble_size);
    } else if (neg->parsed()) {
      o = cmd_negativity(g, state, t, pure_schmidt);
    } else if (red->parsed()) {
      o = cmd_reduce(g, state, t);
    } else if (chan->parsed()) {
      o = cmd_channel(g, state, spec_file, rotation);
    } else if (t4->parsed()) {
      o = cmd_t4(g, kind, j, t_opt, trials);
    } else if (stair->parsed()) {
      o = cmd_staircase(g, j, grid);
    } else if (cat->parsed()) {
      o = cmd_catalogue(name, lambda, j_opt);
    } else if (tab1->parsed()) {
      o = cmd_table1(g);
    } else if (fig1->parsed()) {
      o = cmd_fig1(g, grid);
    } else if (fig2->parsed()) {
      if (nmax == 0) nmax = nmin;
      o = cmd_fig2(g, family, nmin, nmax, t, files);
    } else {
      o = cmd_validate(state);
    }
    // scans default to CSV, single results and listings to JSON
    const bool scan = stair->parsed() || tab1->parsed() || fig1->parsed() || fig2->parsed();
    const bool csv = g.csv || (scan && !g.json);
    Json manifest = manifest_json(args, g);
    if (g.timing) {
      manifest["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    write_output(render(o, manifest, csv), g.out);
    return o.exit_code;
  } catch (const ValidationError& e) {
    print_error("validation", e.what(), e.min_eigenvalue());
    return kExitValidation;
  } catch (const DomainError& e) {
    print_error("domain", e.what());
    return kExitDomain;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
}
