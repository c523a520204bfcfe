#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "cascade/algebra.hpp"
#include "cascade/lindblad.hpp"

// Truncated-Fock-space numerics: operator matrices, the Liouvillian
// superoperator on column-vectorized density matrices, steady states, adaptive
// time evolution and truncation-dimension selection.
//
// Density matrices are plain Eigen::MatrixXcd.  vec() stacks columns, so
// vec(A rho B) = kron(B^T, A) vec(rho).

namespace cascade {

using SparseXcd = Eigen::SparseMatrix<cplx>;

/// Exact truncated matrix of a normal-ordered polynomial:
/// <m| ad^j a^k |n> = sqrt(n!/(n-k)!) sqrt(m!/(m-j)!) for m = n - k + j.
inline Eigen::MatrixXcd matrix_of(const OpPoly& p, int dim) {
  if (dim < 1) throw std::invalid_argument("Fock dimension must be positive");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [m, c] : p.terms())
    for (int n = m.ann; n < dim; ++n) {
      const int row = n - m.ann + m.dag;
      if (row >= dim) continue;
      // One sqrt of the full product keeps integer entries exact and makes
      // the adjoint identity hold bitwise.
      out(row, n) +=
          c * std::sqrt(falling_factorial(n, m.ann) * falling_factorial(row, m.dag));
    }
  return out;
}

inline Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& m) {
  return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

inline Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd& v, int dim) {
  return Eigen::Map<const Eigen::MatrixXcd>(v.data(), dim, dim);
}

/// Superoperator of rho -> A rho - rho A as a sparse matrix on vec(rho).
inline SparseXcd commutator_superop(const Eigen::MatrixXcd& a) {
  const int dim = int(a.rows());
  SparseXcd id(dim, dim);
  id.setIdentity();
  const SparseXcd as = a.sparseView();
  const SparseXcd at = SparseXcd(as.transpose());
  return SparseXcd(Eigen::kroneckerProduct(id, as)) -
         SparseXcd(Eigen::kroneckerProduct(at, id));
}

/// Full generator -i[H, .] + sum_s eta_s D[L_s] on vec(rho), sparse.
inline SparseXcd liouvillian_sparse(const Lindbladian& lb, int dim) {
  if (dim < 2) throw std::invalid_argument("Fock dimension must be >= 2");
  SparseXcd id(dim, dim);
  id.setIdentity();
  SparseXcd out(dim * dim, dim * dim);
  out = cplx{0.0, -1.0} * commutator_superop(matrix_of(lb.hamiltonian, dim));
  for (const auto& d : lb.dissipators) {
    const Eigen::MatrixXcd l = matrix_of(d.op, dim);
    const SparseXcd ls = l.sparseView();
    const SparseXcd lc = SparseXcd(ls.conjugate());
    const SparseXcd ldl = Eigen::MatrixXcd(l.adjoint() * l).sparseView();
    const SparseXcd ldlt = SparseXcd(ldl.transpose());
    out += d.rate * (SparseXcd(Eigen::kroneckerProduct(lc, ls)) -
                     0.5 * SparseXcd(Eigen::kroneckerProduct(id, ldl)) -
                     0.5 * SparseXcd(Eigen::kroneckerProduct(ldlt, id)));
  }
  return out;
}

inline Eigen::MatrixXcd liouvillian(const Lindbladian& lb, int dim) {
  return Eigen::MatrixXcd(liouvillian_sparse(lb, dim));
}

inline cplx expectation(const Eigen::MatrixXcd& rho, const OpPoly& p) {
  return (matrix_of(p, int(rho.rows())) * rho).trace();
}

/// Normalized coherent-state amplitudes in the truncated basis.
inline Eigen::VectorXcd coherent_vector(cplx alpha, int dim) {
  Eigen::VectorXcd v(dim);
  v(0) = 1.0;
  for (int n = 1; n < dim; ++n) v(n) = v(n - 1) * alpha / std::sqrt(double(n));
  v.normalize();
  return v;
}

inline Eigen::MatrixXcd coherent_state(cplx alpha, int dim) {
  const Eigen::VectorXcd v = coherent_vector(alpha, dim);
  return v * v.adjoint();
}

/// Truncated displacement operator exp(alpha ad - conj(alpha) a).
inline Eigen::MatrixXcd displacement_operator(cplx alpha, int dim) {
  const Eigen::MatrixXcd gen = alpha * matrix_of(op_adag(), dim) -
                               std::conj(alpha) * matrix_of(op_a(), dim);
  return gen.exp();
}

struct SteadyStateOptions {
  bool check_nullspace = true;      // singular-value test for uniqueness
  double nullspace_threshold = 1e-10;  // relative to the largest singular value
};

/// Unique steady state of the truncated generator: one row of the Liouvillian
/// is replaced by the vectorized trace constraint and the system is solved by
/// sparse LU.  With check_nullspace set, a dense singular-value scan first
/// confirms the nullspace is one-dimensional (quadratic storage in dim^2, so
/// reserve it for modest dimensions).
inline Eigen::MatrixXcd steady_state(const Lindbladian& lb, int dim,
                                     const SteadyStateOptions& opts = {}) {
  const SparseXcd gen = liouvillian_sparse(lb, dim);
  if (opts.check_nullspace) {
    const Eigen::BDCSVD<Eigen::MatrixXcd> svd{Eigen::MatrixXcd(gen)};
    const auto& sv = svd.singularValues();
    const double cut = sv(0) * opts.nullspace_threshold;
    int null_dim = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) <= cut) ++null_dim;
    if (null_dim != 1)
      throw std::runtime_error(
          "steady state is not unique at this truncation (nullspace dimension " +
          std::to_string(null_dim) + ")");
  }
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(size_t(gen.nonZeros()) + size_t(dim));
  for (int col = 0; col < gen.outerSize(); ++col)
    for (SparseXcd::InnerIterator it(gen, col); it; ++it)
      if (it.row() != 0) trip.emplace_back(int(it.row()), col, it.value());
  for (int n = 0; n < dim; ++n) trip.emplace_back(0, n * (dim + 1), cplx{1.0});
  SparseXcd sys(dim * dim, dim * dim);
  sys.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<SparseXcd> lu(sys);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("steady-state factorization failed at this truncation");
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(dim * dim);
  rhs(0) = 1.0;
  const Eigen::VectorXcd sol = lu.solve(rhs);
  const Eigen::MatrixXcd rho = unvectorize(sol, dim);
  return 0.5 * (rho + rho.adjoint().eval());
}

struct EvolveOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double dt_init = 1e-3;
  int save_points = 0;  // additional interior checkpoints; endpoints always kept
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::MatrixXcd> states;
};

namespace detail {

/// One Dormand-Prince 5(4) attempt from (t, v) with step dt.  Returns the
/// 5th-order update and the embedded error estimate.
struct Rk45Step {
  Eigen::VectorXcd next;
  double error;  // scaled max norm; accept when <= 1
};

inline Rk45Step rk45_attempt(const SparseXcd& gen, const Eigen::VectorXcd& v,
                             double dt, double rtol, double atol) {
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                      a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                      a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                      a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                      e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const Eigen::VectorXcd k1 = gen * v;
  const Eigen::VectorXcd k2 = gen * (v + dt * (a21 * k1));
  const Eigen::VectorXcd k3 = gen * (v + dt * (a31 * k1 + a32 * k2));
  const Eigen::VectorXcd k4 = gen * (v + dt * (a41 * k1 + a42 * k2 + a43 * k3));
  const Eigen::VectorXcd k5 =
      gen * (v + dt * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  const Eigen::VectorXcd k6 = gen * (v + dt * (a61 * k1 + a62 * k2 + a63 * k3 +
                                               a64 * k4 + a65 * k5));
  Rk45Step out;
  out.next = v + dt * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  const Eigen::VectorXcd k7 = gen * out.next;
  const Eigen::VectorXcd err =
      dt * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
  double worst = 0.0;
  for (int i = 0; i < err.size(); ++i) {
    const double scale =
        atol + rtol * std::max(std::abs(v(i)), std::abs(out.next(i)));
    worst = std::max(worst, std::abs(err(i)) / scale);
  }
  out.error = worst;
  return out;
}

}  // namespace detail

/// Adaptive integration of rho' = L rho over [0, T].  Checkpoints (including
/// both endpoints) are hit exactly by clamping the step.
inline Trajectory evolve(const Lindbladian& lb, const Eigen::MatrixXcd& rho0,
                         double t_final, const EvolveOptions& opts = {}) {
  const int dim = int(rho0.rows());
  const SparseXcd gen = liouvillian_sparse(lb, dim);

  std::vector<double> marks{0.0};
  for (int k = 1; k <= opts.save_points; ++k)
    marks.push_back(t_final * double(k) / double(opts.save_points + 1));
  marks.push_back(t_final);

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(rho0);

  Eigen::VectorXcd v = vectorize(rho0);
  double t = 0.0;
  double dt = std::min(opts.dt_init, t_final > 0 ? t_final : opts.dt_init);
  const double dt_floor = std::max(t_final, 1.0) * 1e-14;

  for (std::size_t mark = 1; mark < marks.size(); ++mark) {
    const double target = marks[mark];
    while (t < target) {
      bool clipped = false;
      double step = dt;
      if (t + step >= target) {
        step = target - t;
        clipped = true;
      }
      const auto trial = detail::rk45_attempt(gen, v, step, opts.rtol, opts.atol);
      if (trial.error <= 1.0) {
        v = trial.next;
        t += step;
        if (!clipped)
          dt = step * std::min(5.0, std::max(0.2, 0.9 * std::pow(trial.error + 1e-16, -0.2)));
      } else {
        dt = step * std::max(0.2, 0.9 * std::pow(trial.error, -0.2));
        if (dt < dt_floor)
          throw std::runtime_error("time step underflow in evolve");
      }
    }
    traj.times.push_back(t);
    traj.states.push_back(unvectorize(v, dim));
  }
  return traj;
}

struct TruncationOptions {
  int start = 8;
  double tol = 1e-6;
  int max_dim = 64;
  double boundary_tol = 0.05;  // top-level population that flags truncation bite
};

/// Doubles the truncation dimension until every requested steady-state
/// observable is stable to tol between successive dimensions; returns the
/// smaller dimension of the first stable pair.  Persistent boundary
/// population together with monotonically growing observables is reported as
/// divergence (no normalizable steady state).
inline int auto_truncate(const Lindbladian& lb,
                         const std::vector<OpPoly>& observables,
                         const TruncationOptions& opts = {}) {
  if (opts.start < 4) throw std::invalid_argument("start dimension must be >= 4");
  std::vector<cplx> prev;
  bool prev_boundary_bad = false;
  for (int dim = opts.start; dim <= opts.max_dim; dim *= 2) {
    const Eigen::MatrixXcd rho =
        steady_state(lb, dim, SteadyStateOptions{.check_nullspace = false});
    std::vector<cplx> vals;
    vals.reserve(observables.size());
    for (const auto& p : observables) vals.push_back(expectation(rho, p));
    const bool boundary_bad = rho(dim - 1, dim - 1).real() > opts.boundary_tol;

    if (!prev.empty()) {
      bool grew = true;
      bool stable = true;
      for (std::size_t i = 0; i < vals.size(); ++i) {
        if (std::abs(vals[i]) < std::abs(prev[i]) - opts.tol) grew = false;
        if (std::abs(vals[i] - prev[i]) >= opts.tol) stable = false;
      }
      if (boundary_bad && prev_boundary_bad && grew)
        throw std::runtime_error(
            "steady-state observables diverge with truncation dimension; "
            "no normalizable steady state");
      if (stable && !boundary_bad) return dim / 2;
    }
    prev = std::move(vals);
    prev_boundary_bad = boundary_bad;
  }
  throw std::runtime_error("steady-state observables did not converge by dimension " +
                           std::to_string(opts.max_dim));
}

}  // namespace cascade
