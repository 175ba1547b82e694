#include "anticoherence/exact.hpp"

#include <boost/multiprecision/integer.hpp>

#include <cmath>
#include <sstream>

namespace ac::exact {

namespace bmp = boost::multiprecision;

Rational make_rational(long long num, long long den) {
  if (den == 0) throw DomainError("zero denominator");
  return Rational(Integer(num), Integer(den));
}

Integer factorial(int n) {
  if (n < 0) throw DomainError("factorial of a negative number");
  Integer f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

std::string to_string(const Rational& q) {
  const Integer num = bmp::numerator(q);
  const Integer den = bmp::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  while (!s.empty() && s.back() == ' ') s.pop_back();
  if (s.empty()) throw DomainError("empty rational");
  if (auto slash = s.find('/'); slash != std::string::npos) {
    const Rational num = parse_rational(s.substr(0, slash));
    const Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) throw DomainError("zero denominator in '" + s + "'");
    return num / den;
  }
  bool negative = false;
  std::size_t pos = 0;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  Integer mantissa = 0;
  int scale = 0;
  bool seen_digit = false;
  bool seen_dot = false;
  for (; pos < s.size(); ++pos) {
    const char c = s[pos];
    if (c >= '0' && c <= '9') {
      mantissa = mantissa * 10 + (c - '0');
      if (seen_dot) ++scale;
      seen_digit = true;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw DomainError("not a number: '" + s + "'");
  int exponent = 0;
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') throw DomainError("not a number: '" + s + "'");
    try {
      std::size_t used = 0;
      exponent = std::stoi(s.substr(pos + 1), &used);
      if (pos + 1 + used != s.size()) throw DomainError("not a number: '" + s + "'");
    } catch (const std::logic_error&) {
      throw DomainError("not a number: '" + s + "'");
    }
  }
  exponent -= scale;
  Rational value(mantissa);
  Integer ten_power = bmp::pow(Integer(10), std::abs(exponent));
  if (exponent >= 0) {
    value *= ten_power;
  } else {
    value /= ten_power;
  }
  return negative ? -value : value;
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

std::pair<Integer, Integer> square_free_split(const Integer& n) {
  if (n < 0) throw DomainError("square_free_split of a negative number");
  if (n == 0) return {0, 1};
  Integer rest = n;
  Integer outside = 1;
  Integer radicand = 1;
  for (unsigned p = 2; p < 10000; p += (p == 2 ? 1 : 2)) {
    if (Integer(p) * p > rest) break;
    int count = 0;
    while (rest % p == 0) {
      rest /= p;
      ++count;
    }
    for (int k = 0; k < count / 2; ++k) outside *= p;
    if (count % 2) radicand *= p;
  }
  if (rest > 1) {
    const Integer root = bmp::sqrt(rest);
    if (root * root == rest) {
      outside *= root;
    } else {
      radicand *= rest;
    }
  }
  return {outside, radicand};
}

// ---------------------------------------------------------------------------

Surd::Surd(const Rational& q) {
  if (q != 0) terms_.emplace(Integer(1), q);
}

Surd Surd::sqrt(const Rational& q) {
  if (q < 0) throw DomainError("square root of a negative rational");
  Surd out;
  if (q == 0) return out;
  // sqrt(p/d) = sqrt(p d) / d
  const Integer p = bmp::numerator(q);
  const Integer d = bmp::denominator(q);
  auto [outside, radicand] = square_free_split(p * d);
  out.terms_.emplace(radicand, Rational(outside, d));
  return out;
}

void Surd::add_term(const Integer& radicand, const Rational& coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.emplace(radicand, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

Surd Surd::operator+(const Surd& o) const {
  Surd out = *this;
  for (const auto& [r, c] : o.terms_) out.add_term(r, c);
  return out;
}

Surd Surd::operator-(const Surd& o) const { return *this + (-o); }

Surd Surd::operator-() const {
  Surd out = *this;
  for (auto& [r, c] : out.terms_) c = -c;
  return out;
}

Surd Surd::operator*(const Surd& o) const {
  Surd out;
  for (const auto& [r1, c1] : terms_) {
    for (const auto& [r2, c2] : o.terms_) {
      // sqrt(r1) sqrt(r2) = g sqrt((r1/g)(r2/g)) with g = gcd(r1, r2); both square-free.
      const Integer g = bmp::gcd(r1, r2);
      out.add_term((r1 / g) * (r2 / g), c1 * c2 * Rational(g));
    }
  }
  return out;
}

bool Surd::is_rational() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 1);
}

Rational Surd::rational() const {
  if (!is_rational()) throw DomainError("surd " + to_string() + " is irrational");
  return terms_.empty() ? Rational(0) : terms_.begin()->second;
}

double Surd::to_double() const {
  double acc = 0.0;
  for (const auto& [r, c] : terms_) acc += exact::to_double(c) * std::sqrt(r.convert_to<double>());
  return acc;
}

std::string Surd::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [r, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << exact::to_string(c);
    if (r != 1) os << "*sqrt(" << r.str() << ")";
  }
  return os.str();
}

// ---------------------------------------------------------------------------

Surd clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M) {
  if (m1 + m2 != M) return {};
  const int a = j1.twice(), b = j2.twice(), c = J.twice();
  if (c < std::abs(a - b) || c > a + b || (a + b + c) % 2) return {};
  if (std::abs(m1.twice()) > a || std::abs(m2.twice()) > b || std::abs(M.twice()) > c) return {};
  // all of the following are integers once the selection rules hold
  const int jpj_J = (a + b - c) / 2;
  const int J_j1pj2 = (c - a + b) / 2;
  const int Jpj1_j2 = (c + a - b) / 2;
  const int sum = (a + b + c) / 2;
  const int j1_m1 = (a - m1.twice()) / 2, j1pm1 = (a + m1.twice()) / 2;
  const int j2_m2 = (b - m2.twice()) / 2, j2pm2 = (b + m2.twice()) / 2;
  const int J_M = (c - M.twice()) / 2, JpM = (c + M.twice()) / 2;
  const int d1 = (c - b + m1.twice()) / 2;  // J - j2 + m1
  const int d2 = (c - a - m2.twice()) / 2;  // J - j1 - m2

  Rational radicand(Integer(c + 1) * factorial(Jpj1_j2) * factorial(J_j1pj2) * factorial(jpj_J),
                    factorial(sum + 1));
  radicand *= Rational(factorial(JpM) * factorial(J_M) * factorial(j1_m1) * factorial(j1pm1) *
                       factorial(j2_m2) * factorial(j2pm2));

  Rational series = 0;
  const int kmin = std::max({0, -d1, -d2});
  const int kmax = std::min({jpj_J, j1_m1, j2pm2});
  for (int k = kmin; k <= kmax; ++k) {
    Integer den = factorial(k) * factorial(jpj_J - k) * factorial(j1_m1 - k) * factorial(j2pm2 - k) *
                  factorial(d1 + k) * factorial(d2 + k);
    Rational term(Integer(1), den);
    series += (k % 2 ? -term : term);
  }
  return Surd::sqrt(radicand) * Surd(series);
}

Rational reduction_coefficient_squared(int N, int t, int L) {
  if (t < 0 || t > N || L < 0 || L > t) {
    throw DomainError("reduction coefficient needs 0 <= L <= t <= N");
  }
  const Integer tf = factorial(t);
  const Integer Nf = factorial(N);
  return Rational(tf * tf * factorial(N - L) * factorial(N + L + 1),
                  Nf * Nf * factorial(t - L) * factorial(t + L + 1));
}

Rational coherent_cumulative_multipole(int two_j, int t) {
  if (t < 1 || t > two_j - 1) throw DomainError("coherent cumulative multipole needs 1 <= t <= 2j-1");
  const Integer nf = factorial(two_j);
  return Rational(Integer(two_j), Integer(two_j + 1)) -
         Rational(nf * nf, factorial(two_j - t - 1) * factorial(two_j + t + 1));
}

// ---------------------------------------------------------------------------

ExactState ExactState::mixture(SpinQuantumNumber spin,
                               const std::vector<std::pair<Rational, Amplitudes>>& members) {
  const int d = spin.dim();
  std::vector<ComplexSurd> entries(static_cast<std::size_t>(d) * d);
  for (const auto& [w, psi] : members) {
    if (static_cast<int>(psi.size()) != d) throw ValidationError("exact amplitude vector has the wrong length");
    if (w < 0) throw ValidationError("negative mixture weight");
    const Surd ws(w);
    for (int r = 0; r < d; ++r) {
      if (psi[r].is_zero()) continue;
      for (int c = 0; c < d; ++c) {
        if (psi[c].is_zero()) continue;
        entries[r * d + c] += psi[r] * psi[c].conj() * ws;
      }
    }
  }
  Surd trace;
  for (int k = 0; k < d; ++k) trace += entries[k * d + k].real();
  if (!(trace - Surd(1)).is_zero()) throw ValidationError("exact state has trace " + trace.to_string());
  return ExactState(spin, std::move(entries));
}

Matrix ExactState::to_matrix() const {
  const int d = spin_.dim();
  Matrix m(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) m(r, c) = (*this)(r, c).to_complex();
  }
  return m;
}

SpinState ExactState::to_state() const { return SpinState::unchecked(spin_, to_matrix()); }

Surd ExactState::purity() const {
  Surd acc;
  for (const auto& e : entries_) acc += e.norm();
  return acc;
}

ComplexSurd multipole(const ExactState& rho, int L, int M) {
  const auto spin = rho.spin();
  if (L < 0 || L > spin.two_j() || std::abs(M) > L) throw DomainError("multipole index out of range");
  const int d = spin.dim();
  const HalfInt j = spin.half_int();
  const Surd norm = Surd::sqrt(Rational(Integer(2 * L + 1), Integer(d)));
  ComplexSurd acc;
  // rho_LM = sum_{m} T_LM(m+M, m) rho(m+M, m) with T real.
  for (int col = 0; col < d; ++col) {
    const HalfInt m = spin.m_at(col);
    const HalfInt mp = m + HalfInt::integer(M);
    if (std::abs(mp.twice()) > spin.two_j()) continue;
    const Surd cg = exact::clebsch_gordan(j, m, HalfInt::integer(L), HalfInt::integer(M), j, mp);
    if (cg.is_zero()) continue;
    acc += rho(spin.index_of(mp), col) * (norm * cg);
  }
  return acc;
}

Surd rank_weight(const ExactState& rho, int L) {
  Surd w;
  for (int M = -L; M <= L; ++M) w += multipole(rho, L, M).norm();
  return w;
}

Surd cumulative_multipole(const ExactState& rho, int t) {
  Surd w;
  for (int L = 1; L <= t; ++L) w += rank_weight(rho, L);
  return w;
}

Surd total_purity(const ExactState& rho, int t) {
  const int N = rho.spin().two_j();
  if (t < 1 || t > N) throw DomainError("t must satisfy 1 <= t <= 2j");
  Surd tr = Surd(Rational(Integer(1), Integer(t + 1)));
  for (int L = 1; L <= t; ++L) tr += Surd(reduction_coefficient_squared(N, t, L)) * rank_weight(rho, L);
  return Surd(Rational(Integer(t + 1), Integer(t))) * (Surd(1) - tr);
}

Surd total_cm(const ExactState& rho, int t) {
  const Rational coh = coherent_cumulative_multipole(rho.spin().two_j(), t);
  return Surd(1) - cumulative_multipole(rho, t) * Surd(Rational(1) / coh);
}

}  // namespace ac::exact
