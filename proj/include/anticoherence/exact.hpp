#pragma once

// Exact arithmetic for quantities built from Clebsch-Gordan coefficients.
//
// Every CG coefficient is a rational multiple of the square root of a rational,
// so states with amplitudes of the form q*sqrt(r) stay inside the ring of finite
// sums  sum_k q_k sqrt(s_k)  with s_k square-free.  That ring is closed under
// + and *, and distinct square-free radicands are linearly independent over Q,
// which gives a canonical form and an exact zero test.

#include <complex>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "anticoherence/spin.hpp"

namespace ac::exact {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

Rational make_rational(long long num, long long den = 1);
Integer factorial(int n);

/// "p/q" (or "p" when q = 1).
std::string to_string(const Rational& q);
/// Parses "1/3", "-2", "0.125", "1e-3" exactly.
Rational parse_rational(std::string_view text);
double to_double(const Rational& q);

/// n = outside^2 * radicand with radicand square-free.
/// Trial division covers primes below 10^4; a larger cofactor is treated as
/// square-free unless it is a perfect square. Inputs here are products of small
/// factorials, well inside that range.
std::pair<Integer, Integer> square_free_split(const Integer& n);

class Surd {
 public:
  Surd() = default;
  Surd(const Rational& q);  // NOLINT(google-explicit-constructor)
  Surd(long long n) : Surd(Rational(n)) {}  // NOLINT(google-explicit-constructor)

  /// sqrt(q) for q >= 0.
  static Surd sqrt(const Rational& q);

  Surd operator+(const Surd& o) const;
  Surd operator-(const Surd& o) const;
  Surd operator*(const Surd& o) const;
  Surd operator-() const;
  Surd& operator+=(const Surd& o) { return *this = *this + o; }
  Surd& operator-=(const Surd& o) { return *this = *this - o; }
  Surd& operator*=(const Surd& o) { return *this = *this * o; }
  bool operator==(const Surd& o) const { return terms_ == o.terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const;
  /// Throws DomainError unless is_rational().
  Rational rational() const;
  double to_double() const;
  std::string to_string() const;

  const std::map<Integer, Rational>& terms() const { return terms_; }

 private:
  void add_term(const Integer& radicand, const Rational& coeff);
  std::map<Integer, Rational> terms_;  // square-free radicand -> nonzero coefficient
};

class ComplexSurd {
 public:
  ComplexSurd() = default;
  ComplexSurd(Surd re, Surd im = Surd()) : re_(std::move(re)), im_(std::move(im)) {}  // NOLINT

  const Surd& real() const { return re_; }
  const Surd& imag() const { return im_; }

  ComplexSurd conj() const { return {re_, -im_}; }
  ComplexSurd operator+(const ComplexSurd& o) const { return {re_ + o.re_, im_ + o.im_}; }
  ComplexSurd operator-(const ComplexSurd& o) const { return {re_ - o.re_, im_ - o.im_}; }
  ComplexSurd operator*(const ComplexSurd& o) const {
    return {re_ * o.re_ - im_ * o.im_, re_ * o.im_ + im_ * o.re_};
  }
  ComplexSurd operator*(const Surd& s) const { return {re_ * s, im_ * s}; }
  ComplexSurd& operator+=(const ComplexSurd& o) { return *this = *this + o; }
  bool operator==(const ComplexSurd& o) const = default;

  Surd norm() const { return re_ * re_ + im_ * im_; }
  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  std::complex<double> to_complex() const { return {re_.to_double(), im_.to_double()}; }

 private:
  Surd re_;
  Surd im_;
};

/// Exact Condon-Shortley CG coefficient from the Racah closed form.
Surd clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M);

/// c_{N,t,L}^2 = (t!)^2 (N-L)! (N+L+1)! / ((N!)^2 (t-L)! (t+L+1)!).
Rational reduction_coefficient_squared(int N, int t, int L);

/// Cumulative multipole weight of any spin-coherent state:
/// 2j/(2j+1) - ((2j)!)^2 / ((2j-t-1)! (2j+t+1)!), 1 <= t <= 2j-1.
Rational coherent_cumulative_multipole(int two_j, int t);

/// A density matrix with entries in Q(i, sqrt(2), sqrt(3), ...).
class ExactState {
 public:
  using Amplitudes = std::vector<ComplexSurd>;

  /// sum_i w_i |psi_i><psi_i|; amplitudes ordered m = j ... -j. Does not require
  /// the psi_i to be orthogonal. Throws ValidationError unless the result has unit trace.
  static ExactState mixture(SpinQuantumNumber spin,
                            const std::vector<std::pair<Rational, Amplitudes>>& members);

  SpinQuantumNumber spin() const { return spin_; }
  const ComplexSurd& operator()(int row, int col) const { return entries_[row * spin_.dim() + col]; }
  Matrix to_matrix() const;
  SpinState to_state() const;
  Surd purity() const;

 private:
  ExactState(SpinQuantumNumber spin, std::vector<ComplexSurd> entries)
      : spin_(spin), entries_(std::move(entries)) {}
  SpinQuantumNumber spin_;
  std::vector<ComplexSurd> entries_;
};

ComplexSurd multipole(const ExactState& rho, int L, int M);
/// sum_M |rho_LM|^2
Surd rank_weight(const ExactState& rho, int L);
/// C_{<=t}(rho)
Surd cumulative_multipole(const ExactState& rho, int t);
/// (t+1)/t (1 - Tr rho_t^2), using Tr rho_t^2 = 1/(t+1) + sum_L c^2 sum_M |rho_LM|^2.
Surd total_purity(const ExactState& rho, int t);
/// 1 - C_{<=t}(rho) / C_{<=t}(coherent)
Surd total_cm(const ExactState& rho, int t);

}  // namespace ac::exact
