#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

// Polynomial algebra over the bosonic ladder operators and over the classical
// phase-space variables.
//
// Conventions used throughout the library:
//  * A monomial is indexed by a pair (dag, ann).  For operator polynomials the
//    pair means a_dag^dag a^ann in normal order; for classical polynomials it
//    means conj(alpha)^dag * alpha^ann.
//  * Monomials are kept in a canonical order: ascending total degree
//    (dag + ann), ties broken by ascending dag.
//  * Coefficients with magnitude <= 1e-15 are pruned after every operation so
//    exact cancellations do not leave dust behind.

namespace cascade {

using cplx = std::complex<double>;

inline constexpr double k_coeff_eps = 1e-15;

/// Exponent pair of a single monomial.
struct Mono {
  int dag = 0;  // power of a_dag (operator) or conj(alpha) (classical)
  int ann = 0;  // power of a (operator) or alpha (classical)

  int degree() const { return dag + ann; }

  friend bool operator==(const Mono& a, const Mono& b) = default;
};

/// Canonical monomial order: ascending degree, then ascending dag power.
struct MonoOrder {
  bool operator()(const Mono& a, const Mono& b) const {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return a.dag < b.dag;
  }
};

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double out = 1.0;
  for (int i = 0; i < k; ++i) out = out * double(n - i) / double(i + 1);
  return out;
}

/// Falling factorial n (n-1) ... (n-k+1); 1 for k = 0, 0 once it crosses zero.
inline double falling_factorial(int n, int k) {
  double out = 1.0;
  for (int i = 0; i < k; ++i) out *= double(n - i);
  return out;
}

namespace detail {

/// Strict step function: theta(0) = 0, so sign branches at zero emit nothing.
inline double heaviside(double x) { return x > 0.0 ? 1.0 : 0.0; }

/// Multiplication policy for normal-ordered ladder polynomials.  A single
/// cross term a^r a_dag^s reorders via
///   a^r a_dag^s = sum_p C(r, p) * s! / (s-p)! * a_dag^(s-p) a^(r-p).
struct NormalOrderedMul {
  template <typename Terms>
  static void accumulate(Terms& out, const Mono& lhs, const Mono& rhs,
                         const cplx& coeff) {
    const int r = lhs.ann;
    const int s = rhs.dag;
    const int pmax = std::min(r, s);
    for (int p = 0; p <= pmax; ++p) {
      const double weight = binomial(r, p) * falling_factorial(s, p);
      const Mono m{lhs.dag + s - p, r - p + rhs.ann};
      out[m] += coeff * weight;
    }
  }
};

/// Multiplication policy for commuting classical polynomials.
struct CommutingMul {
  template <typename Terms>
  static void accumulate(Terms& out, const Mono& lhs, const Mono& rhs,
                         const cplx& coeff) {
    out[Mono{lhs.dag + rhs.dag, lhs.ann + rhs.ann}] += coeff;
  }
};

}  // namespace detail

/// Sparse polynomial with complex coefficients over either algebra.
template <typename Mul>
class Polynomial {
 public:
  using terms_type = std::map<Mono, cplx, MonoOrder>;

  Polynomial() = default;

  /// Single monomial c * (dag, ann).
  static Polynomial term(int dag, int ann, cplx c = 1.0) {
    if (dag < 0 || ann < 0)
      throw std::invalid_argument("monomial exponents must be non-negative");
    Polynomial p;
    if (std::abs(c) > k_coeff_eps) p.terms_[Mono{dag, ann}] = c;
    return p;
  }

  static Polynomial constant(cplx c) { return term(0, 0, c); }

  const terms_type& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Total degree; -1 for the zero polynomial.
  int degree() const {
    return terms_.empty() ? -1 : terms_.rbegin()->first.degree();
  }

  cplx coeff(int dag, int ann) const {
    auto it = terms_.find(Mono{dag, ann});
    return it == terms_.end() ? cplx{0.0} : it->second;
  }

  Polynomial& operator+=(const Polynomial& rhs) {
    for (const auto& [m, c] : rhs.terms_) terms_[m] += c;
    prune();
    return *this;
  }

  Polynomial& operator-=(const Polynomial& rhs) {
    for (const auto& [m, c] : rhs.terms_) terms_[m] -= c;
    prune();
    return *this;
  }

  Polynomial& operator*=(cplx s) {
    for (auto& [m, c] : terms_) c *= s;
    prune();
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, cplx s) { return a *= s; }
  friend Polynomial operator*(cplx s, Polynomial a) { return a *= s; }
  friend Polynomial operator-(Polynomial a) { return a *= cplx{-1.0}; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial out;
    for (const auto& [ml, cl] : a.terms_)
      for (const auto& [mr, cr] : b.terms_)
        Mul::template accumulate(out.terms_, ml, mr, cl * cr);
    out.prune();
    return out;
  }

  /// Hermitian adjoint (operator algebra) / complex conjugate (classical):
  /// swaps the exponent pair and conjugates every coefficient.
  Polynomial adjoint() const {
    Polynomial out;
    for (const auto& [m, c] : terms_)
      out.terms_[Mono{m.ann, m.dag}] = std::conj(c);
    return out;
  }

  /// Largest coefficient magnitude; 0 for the zero polynomial.
  double max_abs_coeff() const {
    double out = 0.0;
    for (const auto& [m, c] : terms_) out = std::max(out, std::abs(c));
    return out;
  }

  /// Terms of one total degree only.
  Polynomial slice(int deg) const {
    Polynomial out;
    for (const auto& [m, c] : terms_)
      if (m.degree() == deg) out.terms_[m] = c;
    return out;
  }

  bool operator==(const Polynomial& rhs) const { return terms_ == rhs.terms_; }

 private:
  void prune() {
    for (auto it = terms_.begin(); it != terms_.end();)
      it = std::abs(it->second) <= k_coeff_eps ? terms_.erase(it) : std::next(it);
  }

  terms_type terms_;
};

/// Normal-ordered polynomial in (a_dag, a).
using OpPoly = Polynomial<detail::NormalOrderedMul>;
/// Commuting polynomial in (conj(alpha), alpha).
using ClassicalPoly = Polynomial<detail::CommutingMul>;

inline OpPoly op_a() { return OpPoly::term(0, 1); }
inline OpPoly op_adag() { return OpPoly::term(1, 0); }
inline OpPoly op_number() { return OpPoly::term(1, 1); }

/// a_dag^j a^k as a single normal-ordered monomial.
inline OpPoly op_monomial(int dag, int ann, cplx c = 1.0) {
  return OpPoly::term(dag, ann, c);
}

/// Normal-ordered classical shadow: a_dag^j a^k -> conj(alpha)^j alpha^k.
/// This is the substitution used by the mean-field (Ehrenfest) check, where
/// expectations are factorized over coherent states.
inline ClassicalPoly classical_shadow(const OpPoly& p) {
  ClassicalPoly out;
  for (const auto& [m, c] : p.terms()) out += ClassicalPoly::term(m.dag, m.ann, c);
  return out;
}

/// Inverse of classical_shadow: reinterpret conj(alpha)^j alpha^k termwise as
/// the normal-ordered a_dag^j a^k.  Because drift polynomials are derived as
/// normal-ordered operator identities, <as_operator(drift)> is the exact
/// time derivative of <a> in any state, not only coherent ones.
inline OpPoly as_operator(const ClassicalPoly& p) {
  OpPoly out;
  for (const auto& [m, c] : p.terms()) out += OpPoly::term(m.dag, m.ann, c);
  return out;
}

/// Render a polynomial for diagnostics, e.g. "(1.5+0i) ad^2 a".
template <typename Mul>
std::string to_string(const Polynomial<Mul>& p,
                      const char* up = "ad", const char* down = "a") {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : p.terms()) {
    if (!out.empty()) out += " + ";
    out += "(" + std::to_string(c.real()) + (c.imag() < 0 ? "-" : "+") +
           std::to_string(std::abs(c.imag())) + "i)";
    if (m.dag > 0) out += std::string(" ") + up + (m.dag > 1 ? "^" + std::to_string(m.dag) : "");
    if (m.ann > 0) out += std::string(" ") + down + (m.ann > 1 ? "^" + std::to_string(m.ann) : "");
  }
  return out;
}

}  // namespace cascade
