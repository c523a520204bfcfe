#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "cascade/algebra.hpp"

// Lindbladian container plus the symbolic mean-field (Ehrenfest) machinery.
//
// A Lindbladian here is a Hamiltonian polynomial H and a list of dissipation
// channels (rate, jump operator).  The generator acts as
//   rho' = -i [H, rho] + sum_k rate_k D[c_k] rho,
//   D[c] rho = c rho c_dag - (c_dag c rho + rho c_dag c) / 2.

namespace cascade {

/// One dissipation channel rate * D[op].
struct Dissipator {
  double rate = 0.0;
  OpPoly op;
};

struct Lindbladian {
  OpPoly hamiltonian;
  std::vector<Dissipator> dissipators;

  Lindbladian& operator+=(const Lindbladian& rhs) {
    hamiltonian += rhs.hamiltonian;
    dissipators.insert(dissipators.end(), rhs.dissipators.begin(),
                       rhs.dissipators.end());
    return *this;
  }
};

/// Max |H - H_dag| coefficient; 0 means Hermitian.
inline double hermiticity_defect(const OpPoly& h) {
  return (h - h.adjoint()).max_abs_coeff();
}

/// Mean-field drift of <a> generated by one channel D[c], as a classical
/// polynomial.  Uses the adjoint-generator identity
///   d<a>/dt = <c_dag a c> - <{c_dag c, a}> / 2
/// normal-ordered symbolically and factorized over coherent states.
inline ClassicalPoly dissipator_drift(const OpPoly& c) {
  const OpPoly a = op_a();
  const OpPoly cdag = c.adjoint();
  const OpPoly expr =
      cdag * a * c - 0.5 * (cdag * c * a + a * (cdag * c));
  return classical_shadow(expr);
}

/// Mean-field drift of <a> generated by the Hamiltonian part, i <[H, a]>.
inline ClassicalPoly hamiltonian_drift(const OpPoly& h) {
  const OpPoly a = op_a();
  const OpPoly expr = cplx{0.0, 1.0} * (h * a - a * h);
  return classical_shadow(expr);
}

/// Full mean-field drift polynomial of <a> under the Lindbladian.
inline ClassicalPoly ehrenfest_drift(const Lindbladian& lb) {
  ClassicalPoly out = hamiltonian_drift(lb.hamiltonian);
  for (const auto& d : lb.dissipators) out += d.rate * dissipator_drift(d.op);
  return out;
}

/// Largest residual coefficient between the generated drift and the target
/// classical drift h; a sound quantization gives (numerically) zero.
inline double verify_ehrenfest(const Lindbladian& lb, const ClassicalPoly& h) {
  return (ehrenfest_drift(lb) - h).max_abs_coeff();
}

namespace detail {

/// Stable serialization of an operator polynomial used as a sort key.
inline std::string sort_key(const OpPoly& p) {
  std::string key;
  for (const auto& [m, c] : p.terms()) {
    key += std::to_string(m.dag) + "," + std::to_string(m.ann) + ":";
    key += std::to_string(c.real()) + "," + std::to_string(c.imag()) + ";";
  }
  return key;
}

}  // namespace detail

/// Canonical form for comparisons: zero-rate and zero-operator channels are
/// dropped and the rest are sorted by (operator degree, serialized operator).
inline Lindbladian canonicalize(const Lindbladian& lb) {
  Lindbladian out;
  out.hamiltonian = lb.hamiltonian;
  for (const auto& d : lb.dissipators) {
    if (d.rate > k_coeff_eps && !d.op.is_zero()) out.dissipators.push_back(d);
  }
  std::ranges::sort(out.dissipators, [](const Dissipator& a, const Dissipator& b) {
    if (a.op.degree() != b.op.degree()) return a.op.degree() < b.op.degree();
    return detail::sort_key(a.op) < detail::sort_key(b.op);
  });
  return out;
}

/// Term-for-term equality of canonicalized Lindbladians within tolerances.
inline bool equivalent(const Lindbladian& lhs, const Lindbladian& rhs,
                       double rate_tol = 1e-12, double coeff_tol = 1e-12) {
  const Lindbladian a = canonicalize(lhs);
  const Lindbladian b = canonicalize(rhs);
  if ((a.hamiltonian - b.hamiltonian).max_abs_coeff() > coeff_tol) return false;
  if (a.dissipators.size() != b.dissipators.size()) return false;
  for (std::size_t i = 0; i < a.dissipators.size(); ++i) {
    if (std::abs(a.dissipators[i].rate - b.dissipators[i].rate) > rate_tol)
      return false;
    if ((a.dissipators[i].op - b.dissipators[i].op).max_abs_coeff() > coeff_tol)
      return false;
  }
  return true;
}

}  // namespace cascade
