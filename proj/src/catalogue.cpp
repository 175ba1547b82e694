#include "anticoherence/catalogue.hpp"

#include <functional>

namespace ac {

using exact::ComplexSurd;
using exact::ExactState;
using exact::make_rational;
using exact::Rational;
using exact::Surd;

namespace {

struct Member {
  Rational constant;  // weight = constant + slope * lambda
  Rational slope;
  ExactState::Amplitudes amplitudes;
};

struct Recipe {
  int two_j;
  std::vector<Member> members;
};

ComplexSurd re(const Surd& s) { return ComplexSurd(s); }
ComplexSurd im(const Surd& s) { return ComplexSurd(Surd(), s); }
Surd rt(long long n, long long d = 1) { return Surd::sqrt(make_rational(n, d)); }
Surd q(long long n, long long d = 1) { return Surd(make_rational(n, d)); }

ExactState::Amplitudes amps(int two_j, std::initializer_list<std::pair<int, ComplexSurd>> entries) {
  ExactState::Amplitudes a(two_j + 1);
  for (const auto& [k, v] : entries) a.at(k) = v;
  return a;
}

Member fixed(Rational w, ExactState::Amplitudes a) { return {std::move(w), Rational(0), std::move(a)}; }

// lambda |a><a| + (1 - lambda) |b><b|
std::vector<Member> family(ExactState::Amplitudes a, ExactState::Amplitudes b) {
  return {{Rational(0), Rational(1), std::move(a)}, {Rational(1), Rational(-1), std::move(b)}};
}

// Amplitude indices k hold m = j - k.
Recipe recipe(std::string_view name, int two_j) {
  if (name == "j2_psi_plus" || name == "j2_psi_minus" || name == "j2_rank2" || name == "j2_3AC") {
    auto plus = amps(4, {{0, re(q(1, 2))}, {2, im(rt(1, 2))}, {4, re(q(1, 2))}});
    auto minus = amps(4, {{0, re(q(1, 2))}, {2, im(-rt(1, 2))}, {4, re(q(1, 2))}});
    if (name == "j2_psi_plus") return {4, {fixed(1, plus)}};
    if (name == "j2_psi_minus") return {4, {fixed(1, minus)}};
    if (name == "j2_3AC") return {4, {fixed(make_rational(1, 2), plus), fixed(make_rational(1, 2), minus)}};
    return {4, family(plus, minus)};
  }
  if (name == "j7o2_2AC_subspace") {
    return {7, family(amps(7, {{0, re(rt(3, 10))}, {5, re(rt(7, 10))}}),
                      amps(7, {{2, re(rt(7, 10))}, {7, re(-rt(3, 10))}}))};
  }
  if (name == "j5o2_pt_pair" || name == "j5o2_3AC") {
    auto a = amps(5, {{5, re(rt(1, 6))}, {1, re(rt(5, 6))}});
    auto b = amps(5, {{4, re(-rt(5, 6))}, {0, re(rt(1, 6))}});
    if (name == "j5o2_3AC") return {5, {fixed(make_rational(1, 2), a), fixed(make_rational(1, 2), b)}};
    return {5, family(a, b)};
  }
  if (name == "j3o2_2AC") {
    return {3, {fixed(make_rational(1, 2), amps(3, {{0, re(rt(1, 2))}, {2, re(rt(1, 2))}})),
                fixed(make_rational(1, 2), amps(3, {{1, re(-rt(1, 2))}, {3, re(rt(1, 2))}}))}};
  }
  if (name == "j5o2_2AC") {
    return {5, {fixed(make_rational(1, 6), amps(5, {{0, re(rt(1, 2))}, {5, re(rt(1, 2))}})),
                fixed(make_rational(5, 6), amps(5, {{1, re(rt(1, 2))}, {4, re(rt(1, 2))}}))}};
  }
  if (name == "j5o2_rank4") {
    return {5, {fixed(make_rational(1, 12), amps(5, {{1, re(q(1))}})),
                fixed(make_rational(1, 4), amps(5, {{4, re(q(1))}})),
                fixed(make_rational(1, 3), amps(5, {{0, re(rt(11, 20))}, {5, re(rt(9, 20))}})),
                fixed(make_rational(1, 3), amps(5, {{2, re(q(1))}}))}};
  }
  if (name == "j2_cm_psi") {
    return {4, {fixed(1, amps(4, {{0, re(rt(1, 3))}, {2, re(rt(1, 3))}, {4, re(rt(1, 3))}}))}};
  }
  if (name == "j2_cm_phi") {
    return {4, {fixed(1, amps(4, {{0, re(-q(2) * rt(1, 6))}, {2, re(-rt(1, 6))}, {4, re(rt(1, 6))}}))}};
  }
  if (name == "ghz" || name == "w") {
    if (two_j < 1) throw DomainError("'" + std::string(name) + "' needs a spin j >= 1/2");
    if (name == "ghz") return {two_j, {fixed(1, amps(two_j, {{0, re(rt(1, 2))}, {two_j, re(rt(1, 2))}}))}};
    return {two_j, {fixed(1, amps(two_j, {{1, re(q(1))}}))}};
  }
  throw DomainError("unknown catalogue state '" + std::string(name) + "'");
}

}  // namespace

const std::vector<CatalogueInfo>& catalogue() {
  static const std::vector<CatalogueInfo> entries = {
      {"j2_rank2", "spin-2 rank-2 family lambda|psi+><psi+| + (1-lambda)|psi-><psi-|, psi+- = (|2>+-i sqrt2|0>+|-2>)/2; 1-AC support, 3-AC at lambda=1/2", 4, true, "1/2"},
      {"j2_3AC", "j2_rank2 at lambda = 1/2: purity 1/2, exactly 3-AC", 4, false, ""},
      {"j2_psi_plus", "(|2>+i sqrt2|0>+|-2>)/2", 4, false, ""},
      {"j2_psi_minus", "(|2>-i sqrt2|0>+|-2>)/2", 4, false, ""},
      {"j7o2_2AC_subspace", "mixtures of sqrt(3/10)|7/2>+sqrt(7/10)|-3/2> and sqrt(7/10)|3/2>-sqrt(3/10)|-7/2>, a 2-AC subspace", 7, true, "1/2"},
      {"j5o2_pt_pair", "mixtures of |-5/2>/sqrt6+sqrt(5/6)|3/2> and -sqrt(5/6)|-3/2>+|5/2>/sqrt6 (orthogonal partial transposes at t=1)", 5, true, "1/2"},
      {"j5o2_3AC", "equal mixture of the j5o2_pt_pair states: purity 1/2, exactly 3-AC", 5, false, ""},
      {"j3o2_2AC", "equal mixture of (|3/2>+|-1/2>)/sqrt2 and (-|1/2>+|-3/2>)/sqrt2: purity 1/2, exactly 2-AC", 3, false, ""},
      {"j5o2_2AC", "1/6 (|5/2>+|-5/2>)/sqrt2 + 5/6 (|3/2>+|-3/2>)/sqrt2: purity 13/18, exactly 2-AC", 5, false, ""},
      {"j5o2_rank4", "rank-4 mixture 1/12|3/2> + 1/4|-3/2> + 1/3(sqrt(11/20)|5/2>+sqrt(9/20)|-5/2>) + 1/3|1/2>: purity 7/24, exactly 4-AC", 5, false, ""},
      {"j2_cm_psi", "(|2>+|0>+|-2>)/sqrt3", 4, false, ""},
      {"j2_cm_phi", "(-2|2>-|0>+|-2>)/sqrt6", 4, false, ""},
      {"ghz", "(|j,j>+|j,-j>)/sqrt2, spin given by the caller", -1, false, ""},
      {"w", "|j,j-1>, spin given by the caller", -1, false, ""},
  };
  return entries;
}

const CatalogueInfo& catalogue_info(std::string_view name) {
  for (const auto& e : catalogue()) {
    if (e.name == name) return e;
  }
  throw DomainError("unknown catalogue state '" + std::string(name) + "'");
}

ExactState catalogue_exact(std::string_view name, const Rational& lambda, int two_j) {
  const CatalogueInfo& info = catalogue_info(name);
  if (info.has_lambda && (lambda < 0 || lambda > 1)) throw DomainError("lambda must lie in [0, 1]");
  const Recipe r = recipe(name, two_j);
  std::vector<std::pair<Rational, ExactState::Amplitudes>> members;
  for (const auto& m : r.members) {
    const Rational w = m.constant + m.slope * lambda;
    if (w != 0) members.emplace_back(w, m.amplitudes);
  }
  return ExactState::mixture(SpinQuantumNumber(r.two_j), members);
}

ExactState catalogue_exact(std::string_view name, int two_j) {
  const CatalogueInfo& info = catalogue_info(name);
  const Rational lambda = info.has_lambda ? exact::parse_rational(info.default_lambda) : Rational(0);
  return catalogue_exact(name, lambda, two_j);
}

std::vector<std::pair<double, Vector>> catalogue_members(std::string_view name, double lambda, int two_j) {
  const CatalogueInfo& info = catalogue_info(name);
  if (info.has_lambda && !(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("lambda must lie in [0, 1]");
  const Recipe r = recipe(name, two_j);
  std::vector<std::pair<double, Vector>> out;
  for (const auto& m : r.members) {
    const double w = exact::to_double(m.constant) + exact::to_double(m.slope) * lambda;
    Vector v(r.two_j + 1);
    for (int k = 0; k <= r.two_j; ++k) v(k) = m.amplitudes[k].to_complex();
    out.emplace_back(w, v);
  }
  return out;
}

SpinState catalogue_state(std::string_view name, double lambda, int two_j) {
  const auto members = catalogue_members(name, lambda, two_j);
  const int dim = static_cast<int>(members.front().second.size());
  Matrix rho = Matrix::Zero(dim, dim);
  for (const auto& [w, v] : members) rho += w * v * v.adjoint();
  return SpinState::from_matrix(SpinQuantumNumber(dim - 1), rho, 1e-12);
}

SpinState catalogue_state(std::string_view name, int two_j) {
  const CatalogueInfo& info = catalogue_info(name);
  const double lambda = info.has_lambda ? exact::to_double(exact::parse_rational(info.default_lambda)) : 0.0;
  return catalogue_state(name, lambda, two_j);
}

int exact_ac_order(const ExactState& rho) {
  const int N = rho.spin().two_j();
  for (int L = 1; L <= N; ++L) {
    for (int M = -L; M <= L; ++M) {
      if (!exact::multipole(rho, L, M).is_zero()) return L - 1;
    }
  }
  return N;
}

}  // namespace ac
