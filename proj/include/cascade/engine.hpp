#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include "cascade/algebra.hpp"
#include "cascade/lindblad.hpp"

// The quantization engine.  Given a classical drift polynomial
// h(alpha, conj(alpha)), emit a Lindbladian whose mean-field equation of
// motion for <a> reproduces h exactly.
//
// Two routes are provided:
//  * cascade_quantize: fully general.  h is split into homogeneous pieces,
//    each piece into elementary fragments (antiholomorphic, mixed pair,
//    diagonal), and every fragment is quantized by a closed form.  Fragments
//    generate lower-degree drift byproducts, which are negated, merged and
//    re-quantized, descending one degree at a time until nothing remains.
//  * table_quantize_deg3: the fine-tuned direct table for degree <= 3, which
//    emits the fewest dissipators and matches the reference Lindbladians of
//    the named catalog systems term for term.
//
// Conventions: theta(x) is the strict Heaviside step (theta(0) = 0) and every
// sign branch compares exactly, so at a branch point neither channel is
// emitted.  Empty sums and factorials of negative integers contribute zero.

namespace cascade {

/// Homogeneous-fragment coefficients of h.  For each degree n the
/// antiholomorphic part is lambda_n conj(alpha)^n.  Mixed pairs are
///   mu_{n,k} conj(alpha)^k alpha^(n-k) + nu_{n,k} conj(alpha)^(n-k-1) alpha^(k+1)
/// with 0 <= k <= K(n), K(n) = n/2 - 1 (n even), (n-1)/2 (n odd).  For odd n
/// the two k = K monomials coincide and merge into the diagonal coefficient
/// eps_n conj(alpha)^K alpha^(K+1).
struct PairCoeffs {
  cplx mu{0.0};
  cplx nu{0.0};
};

struct Decomposition {
  std::map<int, cplx> lambda;                       // n -> lambda_n
  std::map<std::pair<int, int>, PairCoeffs> pairs;  // (n, k) -> (mu, nu)
  std::map<int, cplx> eps;                          // odd n -> eps_n
};

/// K(n): the largest pair index of degree n.
inline int pair_cutoff(int n) { return n % 2 == 0 ? n / 2 - 1 : (n - 1) / 2; }

inline Decomposition decompose(const ClassicalPoly& h) {
  Decomposition out;
  for (const auto& [m, c] : h.terms()) {
    const int n = m.degree();
    const int j = m.dag;
    if (m.ann == 0) {
      out.lambda[n] += c;
      continue;
    }
    const int cut = pair_cutoff(n);
    if (n % 2 == 1 && j == cut) {
      out.eps[n] += c;  // the merged diagonal monomial conj^K alpha^(K+1)
    } else if (j <= cut) {
      out.pairs[{n, j}].mu += c;
    } else {
      out.pairs[{n, n - 1 - j}].nu += c;  // conj^(n-k-1) alpha^(k+1), k = n-1-j
    }
  }
  return out;
}

/// Reassemble a decomposition (used to property-test exactness).
inline ClassicalPoly reassemble(const Decomposition& d) {
  ClassicalPoly h;
  for (const auto& [n, lam] : d.lambda) h += ClassicalPoly::term(n, 0, lam);
  for (const auto& [nk, mn] : d.pairs) {
    const auto [n, k] = nk;
    h += ClassicalPoly::term(k, n - k, mn.mu);
    h += ClassicalPoly::term(n - k - 1, k + 1, mn.nu);
  }
  for (const auto& [n, e] : d.eps)
    h += ClassicalPoly::term((n - 1) / 2, (n + 1) / 2, e);
  return h;
}

/// One elementary quantization: an emitted Lindbladian fragment plus the
/// lower-degree drift byproduct it generates.  The cascade re-quantizes the
/// NEGATED byproduct, so drift(fragment) = target + byproduct holds.
struct QuantizationStep {
  Lindbladian fragment;
  ClassicalPoly byproduct;
};

/// Hamiltonian quantizing lambda conj(alpha)^n exactly (no byproduct):
///   H_n = -i/(n+1) (conj(lambda) a^(n+1) - lambda ad^(n+1)).
inline OpPoly quantize_antiholomorphic(cplx lambda, int n) {
  if (n < 0) throw std::invalid_argument("degree must be non-negative");
  OpPoly h;
  if (std::abs(lambda) <= k_coeff_eps) return h;
  const cplx pref = cplx{0.0, -1.0} / double(n + 1);
  h += OpPoly::term(0, n + 1, pref * std::conj(lambda));
  h -= OpPoly::term(n + 1, 0, pref * lambda);
  return h;
}

namespace detail {

/// a! / (a-p)! with the convention that any negative-integer factorial makes
/// the whole term vanish.
inline double guarded_falling(int a, int p) {
  if (a < 0 || a - p < 0) return 0.0;
  return falling_factorial(a, p);
}

}  // namespace detail

/// The closed-form coefficients of one elementary fragment.  Only the fields
/// of the relevant branch are populated; the kappa/gamma pairs obey the
/// theta(0)=0 convention, so at most one of each +/- pair is nonzero.
struct CascadeCoefficients {
  cplx chi{0.0};
  cplx sigma{0.0};
  double zeta = 0.0;
  double kappa = 0.0;        // even branch: |sigma|^2
  double kappa_minus = 0.0;  // odd k < K branch, zeta < 0
  double kappa_plus = 0.0;   // odd k < K branch, zeta > 0
  double gamma_minus = 0.0;  // diagonal branch, Re eps < 0
  double gamma_plus = 0.0;   // diagonal branch, Re eps > 0
};

inline CascadeCoefficients coefficients_pair_even(int n, int k, cplx mu, cplx nu) {
  const cplx I{0.0, 1.0};
  const double denom = double((n + 2) * (k + 1));
  CascadeCoefficients c;
  c.chi = I * (double(k + 2) * mu - double(k + 1) * std::conj(nu)) / denom;
  c.sigma = -2.0 * (double(n - k) * mu + double(k + 1) * std::conj(nu)) / denom;
  c.kappa = std::norm(c.sigma);
  return c;
}

inline CascadeCoefficients coefficients_pair_odd(int n, int k, cplx mu, cplx nu) {
  const cplx I{0.0, 1.0};
  CascadeCoefficients c;
  c.chi = I * (mu - std::conj(nu)) / double(n + 1);
  c.sigma = -2.0 * (double(n - k) * mu + double(k + 1) * std::conj(nu)) /
            double((n + 1) * (k + 1));
  c.zeta = (double(n - 3) - double(n + 1) * std::norm(c.sigma)) / 4.0 - double(k);
  if (c.zeta < 0.0) c.kappa_minus = -4.0 * c.zeta / double(n + 1);
  if (c.zeta > 0.0) c.kappa_plus = 4.0 * c.zeta / double(n + 1);
  return c;
}

inline CascadeCoefficients coefficients_diagonal_odd(int n, cplx eps) {
  CascadeCoefficients c;
  if (eps.real() < 0.0) c.gamma_minus = -4.0 * eps.real() / double(n + 1);
  if (eps.real() > 0.0) c.gamma_plus = 4.0 * eps.real() / double(n + 1);
  return c;
}

/// Even n >= 2: quantize mu conj^k alpha^(n-k) + nu conj^(n-k-1) alpha^(k+1).
/// Emits H_{n,k}, a unit-rate channel D[c_{n,k}] and |sigma|^2 D[ad^(n/2+1)].
inline QuantizationStep quantize_pair_even(int n, int k, cplx mu, cplx nu) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("n must be even >= 2");
  if (k < 0 || k > pair_cutoff(n)) throw std::invalid_argument("k out of range");
  QuantizationStep step;
  if (std::abs(mu) <= k_coeff_eps && std::abs(nu) <= k_coeff_eps) return step;

  const auto c = coefficients_pair_even(n, k, mu, nu);
  step.fragment.hamiltonian = OpPoly::term(k + 1, n - k, c.chi) +
                              OpPoly::term(n - k, k + 1, std::conj(c.chi));
  const int m = n / 2;
  step.fragment.dissipators.push_back(
      {1.0, op_monomial(m - k - 1, k + 1) + c.sigma * op_monomial(0, m + 1)});
  if (c.kappa > k_coeff_eps)
    step.fragment.dissipators.push_back({c.kappa, op_monomial(m + 1, 0)});

  // Byproduct: three binomial sums over monomials one and two degrees down.
  using detail::guarded_falling;
  for (int p = 0; p <= m - k - 1; ++p)
    step.byproduct += ClassicalPoly::term(
        m - 1 - p, m - p,
        -0.5 * (k + 1) * binomial(m - k - 1, p) * guarded_falling(m - k - 1, p));
  for (int p = 1; p <= m; ++p)
    step.byproduct += ClassicalPoly::term(
        m - p, m + 1 - p,
        0.5 * c.kappa * (m + 1) * binomial(m + 1, p) * guarded_falling(m, p));
  for (int p = 0; p <= m - k; ++p) {
    const double coef =
        0.5 * (m - k - 1) * binomial(m - k - 1, p) * guarded_falling(m - k - 2, p);
    if (coef != 0.0)
      step.byproduct += ClassicalPoly::term(m - 1 - p, m - p, coef);
  }
  return step;
}

/// Odd n >= 3, k < K: quantize the mixed pair.  Emits H_{n,k}, a unit-rate
/// channel D[c_{n,k}] and exactly one of the kappa+/- channels by the sign
/// of zeta.
inline QuantizationStep quantize_pair_odd(int n, int k, cplx mu, cplx nu) {
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("n must be odd >= 3");
  if (k < 0 || k >= pair_cutoff(n))
    throw std::invalid_argument("k out of range (k = K is the diagonal case)");
  QuantizationStep step;
  if (std::abs(mu) <= k_coeff_eps && std::abs(nu) <= k_coeff_eps) return step;

  const auto c = coefficients_pair_odd(n, k, mu, nu);
  step.fragment.hamiltonian = OpPoly::term(k + 1, n - k, c.chi) +
                              OpPoly::term(n - k, k + 1, std::conj(c.chi));
  const int q = (n - 1) / 2;
  step.fragment.dissipators.push_back(
      {1.0, op_monomial(q - k, k + 1) + c.sigma * op_monomial(0, q + 1)});
  if (c.kappa_minus > 0.0)
    step.fragment.dissipators.push_back({c.kappa_minus, op_monomial(q + 1, 0)});
  if (c.kappa_plus > 0.0)
    step.fragment.dissipators.push_back({c.kappa_plus, op_monomial(0, q + 1)});

  using detail::guarded_falling;
  using detail::heaviside;
  for (int p = 1; p <= q - k; ++p)
    step.byproduct += ClassicalPoly::term(
        q - p, q + 1 - p,
        -0.5 * (k + 1) * binomial(q - k, p) * guarded_falling(q - k, p));
  const int r2 = (n - 3) / 2 - k;
  for (int p = 1; p <= r2; ++p)
    step.byproduct += ClassicalPoly::term(
        q - p, q + 1 - p,
        0.5 * heaviside(double(r2)) * (q - k) * binomial(q - k, p) *
            guarded_falling(r2, p));
  if (c.zeta < 0.0)
    for (int p = 1; p <= q; ++p)
      step.byproduct += ClassicalPoly::term(
          q - p, q + 1 - p,
          -c.zeta * binomial((n + 1) / 2, p) * guarded_falling(q, p));
  return step;
}

/// Odd n >= 1, the merged diagonal monomial eps conj^((n-1)/2) alpha^((n+1)/2).
/// Emits a number-conserving Hamiltonian and one gain or loss channel by the
/// sign of Re eps; gain generates a byproduct, loss does not.
inline QuantizationStep quantize_diagonal_odd(int n, cplx eps) {
  if (n < 1 || n % 2 == 0) throw std::invalid_argument("n must be odd >= 1");
  QuantizationStep step;
  if (std::abs(eps) <= k_coeff_eps) return step;

  const int half = (n + 1) / 2;
  step.fragment.hamiltonian =
      OpPoly::term(half, half, -2.0 * eps.imag() / double(n + 1));
  const auto c = coefficients_diagonal_odd(n, eps);
  if (c.gamma_minus > 0.0)
    step.fragment.dissipators.push_back({c.gamma_minus, op_monomial(0, half)});
  if (c.gamma_plus > 0.0) {
    step.fragment.dissipators.push_back({c.gamma_plus, op_monomial(half, 0)});
    const int q = (n - 1) / 2;
    for (int p = 1; p <= q; ++p)
      step.byproduct += ClassicalPoly::term(
          q - p, q + 1 - p,
          eps.real() * binomial(half, p) * detail::guarded_falling(q, p));
  }
  return step;
}

/// Fully general quantization.  Quantizes the top degree, folds the negated
/// byproducts into the lower-degree workload, repeats.  Terminates because
/// byproduct degrees are strictly smaller than their source degree.
inline Lindbladian cascade_quantize(const ClassicalPoly& h) {
  Lindbladian out;
  ClassicalPoly pending = h;
  while (!pending.is_zero()) {
    const int n = pending.degree();
    const Decomposition dec = decompose(pending.slice(n));
    pending -= pending.slice(n);

    auto fold = [&](QuantizationStep&& step) {
      if (!step.byproduct.is_zero() && step.byproduct.degree() >= n)
        throw std::logic_error("byproduct degree must drop");
      out += step.fragment;
      pending -= step.byproduct;
    };

    for (const auto& [deg, lam] : dec.lambda)
      out.hamiltonian += quantize_antiholomorphic(lam, deg);
    for (const auto& [nk, mn] : dec.pairs) {
      if (nk.first % 2 == 0)
        fold(quantize_pair_even(nk.first, nk.second, mn.mu, mn.nu));
      else
        fold(quantize_pair_odd(nk.first, nk.second, mn.mu, mn.nu));
    }
    for (const auto& [deg, e] : dec.eps) fold(quantize_diagonal_odd(deg, e));
  }
  return out;
}

/// Direct table for degree <= 3 (fewest dissipators; reproduces the reference
/// Lindbladians of the catalog).  Throws on higher degrees.
inline Lindbladian table_quantize_deg3(const ClassicalPoly& h) {
  if (h.degree() > 3)
    throw std::invalid_argument(
        "direct table handles degree <= 3; use cascade_quantize");
  const cplx I{0.0, 1.0};
  Lindbladian out;

  // Cubic slice z1 a^3 + z2 c a^2 + z3 c^2 a + z4 c^3  (c = conj(alpha)).
  const cplx z1 = h.coeff(0, 3), z2 = h.coeff(1, 2), z3 = h.coeff(2, 1),
             z4 = h.coeff(3, 0);
  const cplx w3 = 3.0 * z1 + std::conj(z3);
  const cplx a_coef = I / 4.0 * (z1 - std::conj(z3));
  out.hamiltonian += OpPoly::term(1, 3, a_coef) +
                     OpPoly::term(3, 1, std::conj(a_coef)) +
                     OpPoly::term(2, 2, -0.5 * z2.imag());
  if (std::abs(w3) > k_coeff_eps) {
    const cplx d = std::conj(w3) / (2.0 * std::abs(w3));
    out.dissipators.push_back(
        {std::abs(w3), op_number() + d * op_monomial(2, 0)});
  }
  const double gap = std::abs(w3) / 4.0 - z2.real();
  if (gap > 0.0) out.dissipators.push_back({gap, op_monomial(0, 2)});
  if (gap < 0.0) {
    out.dissipators.push_back({-gap, op_monomial(2, 0)});
    out.dissipators.push_back({-4.0 * gap, op_a()});
  }
  out.hamiltonian += quantize_antiholomorphic(z4, 3);

  // Quadratic slice y1 a^2 + y2 c a + y3 c^2.
  const cplx y1 = h.coeff(0, 2), y2 = h.coeff(1, 1), y3 = h.coeff(2, 0);
  const cplx w2 = 2.0 * y1 + std::conj(y2);
  out.hamiltonian += OpPoly::term(1, 2, -I * std::conj(y2) / 2.0) +
                     OpPoly::term(2, 1, I * y2 / 2.0);
  cplx constant = h.coeff(0, 0);
  if (std::abs(w2) > k_coeff_eps) {
    const cplx u = std::conj(w2) / std::abs(w2);
    out.dissipators.push_back({std::abs(w2), op_number() + u * op_adag()});
    constant += std::conj(w2) / 2.0;  // cancel the channel's constant drift
  }
  out.hamiltonian += quantize_antiholomorphic(y3, 2);

  // Linear slice e1 alpha + l1 conj(alpha).
  const cplx e1 = h.coeff(0, 1);
  out.hamiltonian += OpPoly::term(1, 1, -e1.imag());
  if (e1.real() < 0.0) out.dissipators.push_back({-2.0 * e1.real(), op_a()});
  if (e1.real() > 0.0) out.dissipators.push_back({2.0 * e1.real(), op_adag()});
  out.hamiltonian += quantize_antiholomorphic(h.coeff(1, 0), 1);

  // Constant (including the quadratic row's folded byproduct).
  out.hamiltonian += quantize_antiholomorphic(constant, 0);
  return out;
}

enum class Method { kTable, kCascade };

/// Dispatch: the direct table for degree <= 3, the cascade otherwise.
inline Lindbladian quantize(const ClassicalPoly& h) {
  return h.degree() <= 3 ? table_quantize_deg3(h) : cascade_quantize(h);
}

inline Lindbladian quantize(const ClassicalPoly& h, Method method) {
  return method == Method::kTable ? table_quantize_deg3(h) : cascade_quantize(h);
}

}  // namespace cascade
