#include "anticoherence/state_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>

#include "anticoherence/errors.hpp"

namespace ac {

namespace {

[[noreturn]] void bad(const std::string& what) { throw ValidationError("state file: " + what); }

int read_two_j(const Json& doc) {
  const Json& v = doc.at("two_j");
  if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > 1000) bad("two_j must be a non-negative integer");
  return v.get<int>();
}

Vector vector_from_json(const Json& arr) {
  if (!arr.is_array() || arr.empty()) bad("expected a non-empty array of complex numbers");
  Vector v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(arr[i]);
  return v;
}

}  // namespace

cplx complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  throw ValidationError("state file: complex numbers are [re, im] pairs, got " + j.dump());
}

Json complex_to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

StateDocument parse_state(const Json& doc, double tol) {
  if (!doc.is_object()) bad("top level must be a JSON object");
  StateDocument out;
  const bool has_amps = doc.contains("amplitudes");
  const bool has_matrix = doc.contains("matrix");
  if (has_amps == has_matrix) bad("exactly one of \"amplitudes\" and \"matrix\" is required");
  std::string kind = has_amps ? "pure" : "mixed";
  if (doc.contains("kind")) {
    if (!doc["kind"].is_string()) bad("kind must be a string");
    kind = doc["kind"].get<std::string>();
    if (kind != "pure" && kind != "mixed") bad("kind must be \"pure\" or \"mixed\"");
    if ((kind == "pure") != has_amps) bad("kind \"" + kind + "\" does not match the data field");
  }
  out.pure = has_amps;
  int two_j = doc.contains("two_j") ? read_two_j(doc) : -1;

  if (has_amps) {
    if (two_j < 0) bad("amplitude files need two_j");
    const Vector psi = vector_from_json(doc["amplitudes"]);
    if (psi.size() != two_j + 1) {
      bad("two_j = " + std::to_string(two_j) + " needs " + std::to_string(two_j + 1) + " amplitudes, got " +
          std::to_string(psi.size()));
    }
    out.amplitudes = psi;
    out.matrix = psi * psi.adjoint();
  } else {
    const Json& rows = doc["matrix"];
    if (!rows.is_array() || rows.empty()) bad("matrix must be a non-empty array of rows");
    const auto n = static_cast<Eigen::Index>(rows.size());
    out.matrix = Matrix(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      const Json& row = rows[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) bad("matrix must be square");
      for (Eigen::Index c = 0; c < n; ++c) out.matrix(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
    }
    if (two_j < 0) two_j = static_cast<int>(n) - 1;
    if (two_j + 1 != n) bad("matrix dimension " + std::to_string(n) + " does not match two_j = " + std::to_string(two_j));
  }
  if (!out.matrix.allFinite()) bad("non-finite entries");
  out.spin = SpinQuantumNumber(two_j);
  out.tol = tol;
  out.check = check_density_matrix(out.matrix, tol);

  if (doc.contains("source")) {
    const Json& s = doc["source"];
    if (!s.is_object() || !s.contains("catalogue") || !s["catalogue"].is_string()) bad("source needs a catalogue name");
    StateSource src;
    src.catalogue = s["catalogue"].get<std::string>();
    if (s.contains("lambda")) {
      if (!s["lambda"].is_string()) bad("source lambda must be a rational string");
      src.lambda = s["lambda"].get<std::string>();
    }
    if (s.contains("two_j")) src.two_j = read_two_j(s);
    out.source = src;
  }
  return out;
}

SpinState StateDocument::state(bool validate) const {
  if (validate && !check.ok()) throw ValidationError("invalid state: " + check.describe(), check.min_eigenvalue);
  if (pure && !validate) return pure_state(false).density();
  return SpinState::unchecked(spin, matrix);
}

PureSpinState StateDocument::pure_state(bool validate) const {
  if (amplitudes) {
    if (validate) return PureSpinState::from_amplitudes(spin, *amplitudes, tol);
    return PureSpinState::normalized(spin, *amplitudes);
  }
  const SpinState rho = state(validate);
  if (std::abs(rho.purity() - 1.0) > tol) throw DomainError("the state is mixed; a pure state is required");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  return PureSpinState::normalized(spin, es.eigenvectors().col(rho.dim() - 1));
}

StateDocument read_state(std::istream& in, double tol) {
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    bad(std::string("not valid JSON: ") + e.what());
  }
  return parse_state(doc, tol);
}

StateDocument read_state_file(const std::string& path, double tol) {
  std::ifstream in(path);
  if (!in) bad("cannot open '" + path + "'");
  return read_state(in, tol);
}

Json state_to_json(const SpinState& rho) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < rho.dim(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < rho.dim(); ++c) row.push_back(complex_to_json(rho.matrix()(r, c)));
    rows.push_back(row);
  }
  return Json{{"two_j", rho.spin().two_j()}, {"kind", "mixed"}, {"matrix", rows}};
}

Json state_to_json(const PureSpinState& psi) {
  Json amps = Json::array();
  for (Eigen::Index k = 0; k < psi.dim(); ++k) amps.push_back(complex_to_json(psi.amplitudes()(k)));
  return Json{{"two_j", psi.spin().two_j()}, {"kind", "pure"}, {"amplitudes", amps}};
}

Json source_to_json(const StateSource& s) {
  Json j{{"catalogue", s.catalogue}};
  if (!s.lambda.empty()) j["lambda"] = s.lambda;
  if (s.two_j >= 0) j["two_j"] = s.two_j;
  return j;
}

ChannelSpec parse_channel(const Json& doc) {
  if (!doc.is_object() || !doc.contains("two_j") || !doc.contains("f")) {
    throw ValidationError("channel file: needs \"two_j\" and \"f\"");
  }
  const Json& tj = doc["two_j"];
  if (!tj.is_number_integer() || tj.get<long long>() < 0 || tj.get<long long>() > 1000) {
    throw ValidationError("channel file: two_j must be a non-negative integer");
  }
  const Json& f = doc["f"];
  if (!f.is_array()) throw ValidationError("channel file: f must be an array");
  std::vector<double> damping;
  for (const auto& v : f) {
    if (!v.is_number()) throw ValidationError("channel file: f entries must be real numbers");
    damping.push_back(v.get<double>());
  }
  return ChannelSpec::raw(SpinQuantumNumber(tj.get<int>()), damping);
}

ChannelSpec read_channel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("channel file: cannot open '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("channel file: not valid JSON: ") + e.what());
  }
  return parse_channel(doc);
}

Json channel_to_json(const ChannelSpec& spec) {
  return Json{{"two_j", spec.spin.two_j()},
              {"f", spec.f},
              {"provenance", to_string(spec.provenance)},
              {"descriptor", spec.descriptor}};
}

}  // namespace ac
