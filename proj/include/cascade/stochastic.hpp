#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cascade/fock.hpp"
#include "cascade/wigner.hpp"

// White-noise-driven dynamics: the stochastic master equation
//
//   d rho = L0 rho dt + i (kappa/sqrt(2)) [a + ad, rho] o dW
//
// integrated as a Stratonovich equation (Heun predictor-corrector), its Ito
// drift correction, ensemble-average checks, and interspike-interval
// statistics of Wigner-mode spike trains.

namespace cascade {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

/// Deterministic base generator plus the strength of the white-noise drive
/// entering through the commutator coupling i (kappa/sqrt 2) [a + ad, rho].
struct NoisyGenerator {
  Lindbladian base;
  double noise_strength = 0.0;  // kappa >= 0
};

/// Deterministic drift of the Ito form: L0 + (kappa^2/2) D[a + ad], which
/// equals L0 + kappa^2 D[x].  Averaging the noise over realizations yields
/// exactly this Lindbladian.
inline Lindbladian ito_form(const NoisyGenerator& g) {
  if (g.noise_strength < 0.0)
    throw std::invalid_argument("noise strength must be nonnegative");
  Lindbladian out = g.base;
  if (g.noise_strength > 0.0)
    out.dissipators.push_back(
        {0.5 * g.noise_strength * g.noise_strength, op_a() + op_adag()});
  return out;
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Standard normal deviate addressed purely by (seed, trajectory, step):
/// rerunning any subset of steps or trajectories reproduces the same noise,
/// independent of execution order.
inline double counter_normal(std::uint64_t seed, std::uint64_t trajectory,
                             std::uint64_t step) {
  const std::uint64_t key =
      splitmix64(seed + 0x9e3779b97f4a7c15ULL * (trajectory + 1));
  const std::uint64_t a = splitmix64(key ^ splitmix64(step));
  const std::uint64_t b = splitmix64(a);
  const double u1 = double((a >> 11) + 1) * 0x1.0p-53;  // (0, 1]
  const double u2 = double(b >> 11) * 0x1.0p-53;        // [0, 1)
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

/// Shared Heun stepper: v' = v + (dt/2)(A v + A v~) + (dW/2)(B v + B v~)
/// with the predictor v~ = v + dt A v + dW B v.  Converges to the
/// Stratonovich solution of dv = A v dt + B v o dW.
struct HeunStepper {
  SparseXcd drift;    // A = L0 superoperator
  SparseXcd noise;    // B = i (kappa/sqrt 2) [a + ad, .] superoperator
  int dim = 0;

  HeunStepper(const NoisyGenerator& g, int fock_dim)
      : drift(liouvillian_sparse(g.base, fock_dim)),
        noise(cplx{0.0, g.noise_strength / std::sqrt(2.0)} *
              commutator_superop(
                  matrix_of(op_a() + op_adag(), fock_dim))),
        dim(fock_dim) {
    if (g.noise_strength < 0.0)
      throw std::invalid_argument("noise strength must be nonnegative");
  }

  void step(Eigen::VectorXcd& v, double dt, double dw) const {
    const Eigen::VectorXcd av = drift * v;
    const Eigen::VectorXcd bv = noise * v;
    const Eigen::VectorXcd predictor = v + dt * av + dw * bv;
    v += 0.5 * dt * (av + drift * predictor) +
         0.5 * dw * (bv + noise * predictor);
  }
};

inline double trace_of_vec(const Eigen::VectorXcd& v, int dim) {
  cplx tr = 0.0;
  for (int n = 0; n < dim; ++n) tr += v(n * (dim + 1));
  return tr.real();
}

}  // namespace detail

struct StochasticOptions {
  double dt = 1e-3;
  std::uint64_t seed = 0;
  int trajectory = 0;   // stream index for independent ensemble members
  int save_every = 1;   // record every k-th step (endpoints always recorded)
  double trace_tol = 1e-8;  // per-step trace guard
};

/// Integrate the Stratonovich stochastic master equation for one noise
/// realization.  The Wiener increments are Normal(0, dt) drawn from the
/// counter-based stream, so a rerun with the same options is bit-identical.
inline Trajectory stratonovich_run(const NoisyGenerator& g,
                                   const Eigen::MatrixXcd& rho0, double t_final,
                                   const StochasticOptions& opts = {}) {
  if (opts.dt <= 0.0) throw std::invalid_argument("dt must be positive");
  if (t_final < 0.0) throw std::invalid_argument("t_final must be nonnegative");
  if (rho0.rows() != rho0.cols())
    throw std::invalid_argument("initial state must be square");
  const int dim = int(rho0.rows());
  const detail::HeunStepper stepper(g, dim);

  Trajectory out;
  Eigen::VectorXcd v = vectorize(rho0);
  double t = 0.0;
  out.times.push_back(t);
  out.states.push_back(rho0);
  std::uint64_t step = 0;
  while (t < t_final - 1e-12 * std::max(t_final, 1.0)) {
    const double dt = std::min(opts.dt, t_final - t);
    const double dw = std::sqrt(dt) * detail::counter_normal(
                                          opts.seed, opts.trajectory, step);
    stepper.step(v, dt, dw);
    t += dt;
    ++step;
    const double drift = std::abs(detail::trace_of_vec(v, dim) - 1.0);
    if (!(drift < opts.trace_tol))
      throw std::runtime_error(
          "stochastic integration unstable at t=" + std::to_string(t) +
          ": |trace - 1| = " + std::to_string(drift) +
          " exceeds " + std::to_string(opts.trace_tol));
    const bool last = t >= t_final - 1e-12 * std::max(t_final, 1.0);
    if (last || step % std::uint64_t(std::max(opts.save_every, 1)) == 0) {
      out.times.push_back(t);
      out.states.push_back(unvectorize(v, dim));
    }
  }
  return out;
}

/// Moment report for the pure noise generator kappa^2 D[x]: means and the x
/// variance must stay put while the y variance grows linearly at rate
/// kappa^2.
struct NoiseMomentReport {
  double mean_x_drift = 0.0;   // max_t |<x>_t - <x>_0|
  double mean_y_drift = 0.0;
  double var_x_drift = 0.0;    // max_t |Var x(t) - Var x(0)|
  double var_y_slope = 0.0;    // least-squares slope of Var y(t)
  double var_y_residual = 0.0; // max |Var y(t) - Var y(0) - slope * t|
};

inline NoiseMomentReport noise_moment_check(double kappa,
                                            const Eigen::MatrixXcd& rho0,
                                            double t_final) {
  const double s2 = std::sqrt(2.0);
  const OpPoly x_op = (1.0 / s2) * (op_a() + op_adag());
  const OpPoly y_op = (cplx{0.0, 1.0} / s2) * (op_adag() - op_a());
  const OpPoly xx = x_op * x_op;
  const OpPoly yy = y_op * y_op;

  Lindbladian diffusion;
  diffusion.dissipators.push_back({kappa * kappa, x_op});
  const Trajectory traj =
      evolve(diffusion, rho0, t_final, EvolveOptions{.save_points = 9});

  const size_t n = traj.times.size();
  std::vector<double> var_y(n);
  NoiseMomentReport rep;
  double mx0 = 0.0, my0 = 0.0, vx0 = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const Eigen::MatrixXcd& rho = traj.states[i];
    const double mx = expectation(rho, x_op).real();
    const double my = expectation(rho, y_op).real();
    const double vx = expectation(rho, xx).real() - mx * mx;
    var_y[i] = expectation(rho, yy).real() - my * my;
    if (i == 0) {
      mx0 = mx;
      my0 = my;
      vx0 = vx;
      continue;
    }
    rep.mean_x_drift = std::max(rep.mean_x_drift, std::abs(mx - mx0));
    rep.mean_y_drift = std::max(rep.mean_y_drift, std::abs(my - my0));
    rep.var_x_drift = std::max(rep.var_x_drift, std::abs(vx - vx0));
  }
  // Least-squares slope of Var y against time.
  double st = 0.0, sv = 0.0, stt = 0.0, stv = 0.0;
  for (size_t i = 0; i < n; ++i) {
    st += traj.times[i];
    sv += var_y[i];
    stt += traj.times[i] * traj.times[i];
    stv += traj.times[i] * var_y[i];
  }
  const double denom = n * stt - st * st;
  rep.var_y_slope = denom > 0.0 ? (n * stv - st * sv) / denom : 0.0;
  for (size_t i = 0; i < n; ++i)
    rep.var_y_residual =
        std::max(rep.var_y_residual,
                 std::abs(var_y[i] - var_y[0] -
                          rep.var_y_slope * (traj.times[i] - traj.times[0])));
  return rep;
}

// ---------------------------------------------------------------------------
// Spike trains

/// Schmitt-trigger detector: a spike fires when the armed signal reaches the
/// high threshold; it re-arms when the signal falls to the low threshold
/// after the refractory number of samples.  NaN thresholds are calibrated
/// from the first `calibration` samples (all samples when 0) as
/// mean +- 0.5 * (max - min) / 2.
struct SpikeDetector {
  double high = kNan;
  double low = kNan;
  int refractory = 5;
  int calibration = 0;
};

struct SpikeStatistics {
  std::vector<double> spike_times;
  std::vector<double> intervals;
  double mean = 0.0;
  double stddev = 0.0;
  double sigma_bar = 0.0;  // stddev / mean, dimensionless
};

/// Interval statistics of an already-detected spike train.  At least three
/// spikes (two intervals) are required.  An exactly periodic train (all
/// intervals equal) reports stddev and sigma_bar of zero exactly.
inline SpikeStatistics interval_statistics(std::vector<double> spike_times) {
  if (spike_times.size() < 3)
    throw std::runtime_error(
        "need at least 3 spikes for interval statistics, found " +
        std::to_string(spike_times.size()));
  SpikeStatistics stats;
  stats.spike_times = std::move(spike_times);
  for (size_t k = 0; k + 1 < stats.spike_times.size(); ++k)
    stats.intervals.push_back(stats.spike_times[k + 1] - stats.spike_times[k]);
  double sum = 0.0, lo = stats.intervals[0], hi = stats.intervals[0];
  for (double z : stats.intervals) {
    sum += z;
    lo = std::min(lo, z);
    hi = std::max(hi, z);
  }
  stats.mean = sum / double(stats.intervals.size());
  if (lo == hi) {
    stats.stddev = 0.0;
  } else {
    double ss = 0.0;
    for (double z : stats.intervals) ss += (z - stats.mean) * (z - stats.mean);
    stats.stddev = std::sqrt(ss / double(stats.intervals.size()));
  }
  stats.sigma_bar = stats.stddev / stats.mean;
  return stats;
}

inline SpikeStatistics spike_train_stats(const std::vector<double>& times,
                                         const std::vector<double>& values,
                                         const SpikeDetector& det = {}) {
  if (times.size() != values.size())
    throw std::invalid_argument("times and values must have equal length");
  if (times.empty()) throw std::invalid_argument("empty signal");

  double high = det.high, low = det.low;
  if (std::isnan(high) || std::isnan(low)) {
    const size_t window = det.calibration > 0
                              ? std::min(times.size(), size_t(det.calibration))
                              : times.size();
    double mean = 0.0, lo = values[0], hi = values[0];
    for (size_t i = 0; i < window; ++i) {
      mean += values[i];
      lo = std::min(lo, values[i]);
      hi = std::max(hi, values[i]);
    }
    mean /= double(window);
    const double half = 0.5 * (hi - lo) / 2.0;
    if (std::isnan(high)) high = mean + half;
    if (std::isnan(low)) low = mean - half;
  }
  if (!(high > low))
    throw std::invalid_argument("high threshold must exceed low threshold");

  std::vector<double> spikes;
  bool armed = true;
  long last_spike = std::numeric_limits<long>::min();
  for (size_t i = 0; i < values.size(); ++i) {
    if (armed && values[i] >= high) {
      spikes.push_back(times[i]);
      armed = false;
      last_spike = long(i);
    } else if (!armed && values[i] <= low &&
               long(i) - last_spike > det.refractory) {
      armed = true;
    }
  }
  return interval_statistics(std::move(spikes));
}

// ---------------------------------------------------------------------------
// Wigner-mode trajectories and the coherence scan

struct ModePoint {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
};

struct ModeTrajectoryOptions {
  StochasticOptions stochastic{};
  GridSpec grid{};
  int mode_every = 50;  // Wigner-mode cadence in integration steps
};

/// Track the Wigner-function mode of one noise realization on a decimated
/// schedule.  The state itself is not stored.
inline std::vector<ModePoint> mode_trajectory(const NoisyGenerator& g,
                                              const Eigen::MatrixXcd& rho0,
                                              double t_final,
                                              const ModeTrajectoryOptions& opts = {}) {
  const StochasticOptions& so = opts.stochastic;
  if (so.dt <= 0.0) throw std::invalid_argument("dt must be positive");
  if (rho0.rows() != rho0.cols())
    throw std::invalid_argument("initial state must be square");
  const int dim = int(rho0.rows());
  const detail::HeunStepper stepper(g, dim);

  std::vector<ModePoint> out;
  auto record = [&](double t, const Eigen::VectorXcd& v) {
    const auto [x, y] = wigner_mode(wigner(unvectorize(v, dim), opts.grid));
    out.push_back({t, x, y});
  };

  Eigen::VectorXcd v = vectorize(rho0);
  double t = 0.0;
  record(t, v);
  std::uint64_t step = 0;
  while (t < t_final - 1e-12 * std::max(t_final, 1.0)) {
    const double dt = std::min(so.dt, t_final - t);
    const double dw =
        std::sqrt(dt) * detail::counter_normal(so.seed, so.trajectory, step);
    stepper.step(v, dt, dw);
    t += dt;
    ++step;
    const double drift = std::abs(detail::trace_of_vec(v, dim) - 1.0);
    if (!(drift < so.trace_tol))
      throw std::runtime_error(
          "stochastic integration unstable at t=" + std::to_string(t) +
          ": |trace - 1| = " + std::to_string(drift));
    const bool last = t >= t_final - 1e-12 * std::max(t_final, 1.0);
    if (last || step % std::uint64_t(std::max(opts.mode_every, 1)) == 0)
      record(t, v);
  }
  return out;
}

struct ScanRow {
  double kappa = 0.0;
  double sigma_bar = kNan;
  double inv_sigma_bar = kNan;
  int n_spikes = 0;
  std::string note;  // empty on success, reason otherwise
};

struct ScanConfig {
  double t_final = 200.0;
  int fock_dim = 16;
  double displacement = 0.2;  // coherent bias toward the lower-right peak
  ModeTrajectoryOptions mode{};
  SpikeDetector detector{};
};

/// Deterministic steady state biased by a small coherent displacement toward
/// its lower-right Wigner peak (x > 0, y < 0 quadrant argmax).  This is the
/// common launch state for spike-train runs: the bias breaks the rest-state
/// symmetry so excitable systems start near the firing threshold.
inline Eigen::MatrixXcd biased_steady_initial(const Lindbladian& base, int dim,
                                              double displacement,
                                              const GridSpec& spec = {}) {
  const Eigen::MatrixXcd rho_ss =
      steady_state(base, dim, SteadyStateOptions{.check_nullspace = false});
  const WignerGrid grid = wigner(rho_ss, spec);
  double best = -std::numeric_limits<double>::infinity();
  double px = 1.0, py = -1.0;
  for (int r = 0; r < grid.w.rows(); ++r)
    for (int c = 0; c < grid.w.cols(); ++c)
      if (grid.xs[c] > 0.0 && grid.ys[r] < 0.0 && grid.w(r, c) > best) {
        best = grid.w(r, c);
        px = grid.xs[c];
        py = grid.ys[r];
      }
  const double norm = std::hypot(px, py);
  const cplx delta = displacement * cplx{px / norm, py / norm} / std::sqrt(2.0);
  const Eigen::MatrixXcd d = displacement_operator(delta, dim);
  return d * rho_ss * d.adjoint();
}

/// Sweep noise strengths on a common base generator.  The initial state is
/// the biased steady state above; each row reports interval statistics of
/// the Y* spike train.  Rows where spike detection fails carry a note
/// instead of aborting the scan.
inline std::vector<ScanRow> coherence_scan(const Lindbladian& base,
                                           const std::vector<double>& kappas,
                                           const ScanConfig& cfg = {}) {
  if (kappas.empty()) throw std::invalid_argument("empty kappa list");
  const int dim = cfg.fock_dim;
  const Eigen::MatrixXcd rho0 =
      biased_steady_initial(base, dim, cfg.displacement, cfg.mode.grid);

  std::vector<ScanRow> rows;
  for (double kappa : kappas) {
    ScanRow row;
    row.kappa = kappa;
    try {
      const std::vector<ModePoint> track =
          mode_trajectory({base, kappa}, rho0, cfg.t_final, cfg.mode);
      std::vector<double> times(track.size()), ys(track.size());
      for (size_t i = 0; i < track.size(); ++i) {
        times[i] = track[i].t;
        ys[i] = track[i].y;
      }
      const SpikeStatistics stats = spike_train_stats(times, ys, cfg.detector);
      row.n_spikes = int(stats.spike_times.size());
      row.sigma_bar = stats.sigma_bar;
      row.inv_sigma_bar =
          stats.sigma_bar > 0.0 ? 1.0 / stats.sigma_bar : kNan;
    } catch (const std::exception& err) {
      row.note = err.what();
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace cascade
