// casq — quantize planar polynomial flows into Lindblad generators and run
// the truncated-Fock-space numerics behind them.
//
//   quantize    system JSON -> lindblad JSON (+ dissipator/degree summary)
//   verify      check that a lindblad file reproduces a system's drift
//   steady      steady state: density dump + observables JSON
//   wigner      steady-state Wigner function on a grid -> CSV
//   evolve      deterministic evolution -> observable time-series CSV
//   stochastic  noisy trajectory of the Wigner mode -> CSV
//   scan        coherence scan over noise strengths -> CSV
//   catalog     list the built-in systems / show one as system JSON
//
// Exit codes: 0 success, 1 verification failure, 2 numerical failure,
// 3 input error.  Every command is deterministic given its full flag set;
// file outputs are written atomically (temp file + rename).

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cascade/classical.hpp"
#include "cascade/engine.hpp"
#include "cascade/fock.hpp"
#include "cascade/json_io.hpp"
#include "cascade/lindblad.hpp"
#include "cascade/stochastic.hpp"
#include "cascade/wigner.hpp"

namespace {

using namespace cascade;

// ---------------------------------------------------------------------------
// Small I/O helpers.

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return json::parse(in);
}

void write_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::invalid_argument("cannot write " + tmp);
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

/// Write to the given path (atomically) or to stdout when the path is empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty())
    std::cout << text;
  else
    write_atomic(path, text);
}

/// Round-trip decimal formatting for CSV cells.
std::string fmt(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

// ---------------------------------------------------------------------------
// Shared flag bundles.

struct TruncationFlags {
  int fock = 0;
  bool auto_truncate = false;
};

void add_truncation_flags(CLI::App* cmd, TruncationFlags& tf) {
  auto* fock = cmd->add_option("--fock", tf.fock, "Fock-space dimension")
                   ->check(CLI::Range(2, 4096));
  cmd->add_flag("--auto-truncate", tf.auto_truncate,
                "grow the dimension until steady observables stabilize")
      ->excludes(fock);
}

/// Resolve the truncation dimension, growing it automatically if asked.
int resolve_dim(const Lindbladian& lb, const TruncationFlags& tf) {
  if (tf.auto_truncate) return auto_truncate(lb, {op_number()});
  if (tf.fock < 2)
    throw std::invalid_argument("need --fock N or --auto-truncate");
  return tf.fock;
}

GridSpec parse_grid(const std::string& text) {
  if (text.empty()) return {};
  GridSpec spec;
  const auto axis = [](const std::string& part, double& lo, double& hi,
                       int& n) {
    if (std::sscanf(part.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3 ||
        n < 1 || !(lo < hi))
      throw std::invalid_argument("bad grid axis \"" + part +
                                  "\"; expected min:max:count");
  };
  const auto comma = text.find(',');
  axis(text.substr(0, comma), spec.xmin, spec.xmax, spec.nx);
  if (comma != std::string::npos)
    axis(text.substr(comma + 1), spec.ymin, spec.ymax, spec.ny);
  return spec;
}

Lindbladian load_lindblad(const std::string& path) {
  return lindblad_from_json(read_json(path));
}

ClassicalPoly load_system(const std::string& path) {
  return system_from_json(read_json(path));
}

// ---------------------------------------------------------------------------
// quantize

struct QuantizeArgs {
  std::string system, method, out;
};

int cmd_quantize(const QuantizeArgs& a) {
  const ClassicalPoly h = load_system(a.system);
  Lindbladian lb;
  if (a.method.empty())
    lb = quantize(h);
  else
    lb = quantize(h, a.method == "table" ? Method::kTable : Method::kCascade);

  int degree = lb.hamiltonian.degree();
  for (const auto& d : lb.dissipators) degree = std::max(degree, d.op.degree());
  std::ostream& info = a.out.empty() ? std::cerr : std::cout;
  info << "dissipators: " << lb.dissipators.size() << '\n'
       << "max operator degree: " << std::max(degree, 0) << '\n';
  emit(a.out, lindblad_to_json(lb).dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  std::string lindblad, system;
};

int cmd_verify(const VerifyArgs& a) {
  const Lindbladian lb = load_lindblad(a.lindblad);
  const ClassicalPoly h = load_system(a.system);
  const ClassicalPoly residual = ehrenfest_drift(lb) - h;
  const double worst = residual.max_abs_coeff();
  std::cout << "max residual coefficient: " << fmt(worst) << '\n';
  if (worst < 1e-10) return 0;
  std::cout << "residual: " << poly_to_json(residual).dump() << '\n';
  return 1;
}

// ---------------------------------------------------------------------------
// steady

struct SteadyArgs {
  std::string lindblad, out;
  TruncationFlags trunc;
};

/// Solve the steady state and insist the result is meaningful: a small
/// generator residual (guards a near-singular factorization) and a truncation
/// boundary that is not soaking up the population (guards amplifying systems
/// with no normalizable steady state).
Eigen::MatrixXcd checked_steady_state(const Lindbladian& lb, int dim) {
  const Eigen::MatrixXcd rho =
      steady_state(lb, dim, SteadyStateOptions{.check_nullspace = dim <= 32});
  const double residual =
      (liouvillian_sparse(lb, dim) * vectorize(rho)).cwiseAbs().maxCoeff();
  if (!(residual < 1e-8))
    throw std::runtime_error("steady-state residual " + fmt(residual) +
                             " at dimension " + std::to_string(dim) +
                             "; the generator is degenerate or ill-conditioned");
  const double boundary = rho(dim - 1, dim - 1).real();
  if (boundary > 0.5)
    throw std::runtime_error(
        "truncation boundary holds " + fmt(boundary) +
        " of the population; no normalizable steady state at this dimension");
  if (boundary > 0.05)
    std::cerr << "warning: truncation boundary population " << fmt(boundary)
              << "; consider a larger --fock\n";
  return rho;
}

json state_report(const Eigen::MatrixXcd& rho, int dim) {
  json doc;
  doc["dim"] = dim;
  const cplx a = expectation(rho, op_a());
  doc["observables"] = {
      {"n", expectation(rho, op_number()).real()},
      {"x", std::sqrt(2.0) * a.real()},
      {"y", std::sqrt(2.0) * a.imag()},
      {"purity", (rho * rho).trace().real()},
  };
  json re = json::array(), im = json::array();
  for (int r = 0; r < dim; ++r) {
    json re_row = json::array(), im_row = json::array();
    for (int c = 0; c < dim; ++c) {
      re_row.push_back(rho(r, c).real());
      im_row.push_back(rho(r, c).imag());
    }
    re.push_back(re_row);
    im.push_back(im_row);
  }
  doc["rho"] = {{"re", re}, {"im", im}};
  return doc;
}

int cmd_steady(const SteadyArgs& a) {
  const Lindbladian lb = load_lindblad(a.lindblad);
  const int dim = resolve_dim(lb, a.trunc);
  const Eigen::MatrixXcd rho = checked_steady_state(lb, dim);
  emit(a.out, state_report(rho, dim).dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// wigner

struct WignerArgs {
  std::string lindblad, grid, out;
  TruncationFlags trunc;
  bool scale = false;
};

std::string wigner_csv(const WignerGrid& grid) {
  std::ostringstream out;
  out << "x,y,w\n";
  for (int r = 0; r < grid.w.rows(); ++r)
    for (int c = 0; c < grid.w.cols(); ++c)
      out << fmt(grid.xs[c]) << ',' << fmt(grid.ys[r]) << ','
          << fmt(grid.w(r, c)) << '\n';
  return out.str();
}

int cmd_wigner(const WignerArgs& a) {
  const Lindbladian lb = load_lindblad(a.lindblad);
  const int dim = resolve_dim(lb, a.trunc);
  const Eigen::MatrixXcd rho = checked_steady_state(lb, dim);
  WignerGrid grid = wigner(rho, parse_grid(a.grid));
  if (a.scale) grid = scale_unit(grid);
  emit(a.out, wigner_csv(grid));
  return 0;
}

// ---------------------------------------------------------------------------
// evolve

struct EvolveArgs {
  std::string lindblad, initial = "vacuum", out;
  TruncationFlags trunc;
  double t_final = 10.0;
  int save_points = 50;
};

/// Initial state from its flag form: "vacuum" or "coherent:X,Y" with (X, Y)
/// the phase-space center.
Eigen::MatrixXcd parse_initial(const std::string& text, int dim) {
  if (text == "vacuum") return coherent_state(0.0, dim);
  double x = 0.0, y = 0.0;
  if (std::sscanf(text.c_str(), "coherent:%lf,%lf", &x, &y) == 2)
    return coherent_state(cplx{x, y} / std::sqrt(2.0), dim);
  throw std::invalid_argument("bad --initial \"" + text +
                              "\"; expected vacuum or coherent:X,Y");
}

int cmd_evolve(const EvolveArgs& a) {
  const Lindbladian lb = load_lindblad(a.lindblad);
  const int dim = resolve_dim(lb, a.trunc);
  const Eigen::MatrixXcd rho0 = parse_initial(a.initial, dim);
  const Trajectory traj =
      evolve(lb, rho0, a.t_final, EvolveOptions{.save_points = a.save_points});

  std::ostringstream out;
  out << "t,n,x,y,purity\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const Eigen::MatrixXcd& rho = traj.states[i];
    const cplx av = expectation(rho, op_a());
    out << fmt(traj.times[i]) << ',' << fmt(expectation(rho, op_number()).real())
        << ',' << fmt(std::sqrt(2.0) * av.real()) << ','
        << fmt(std::sqrt(2.0) * av.imag()) << ','
        << fmt((rho * rho).trace().real()) << '\n';
  }
  emit(a.out, out.str());
  return 0;
}

// ---------------------------------------------------------------------------
// stochastic

struct StochasticArgs {
  std::string lindblad, grid, out;
  std::vector<double> kappa;
  double dt = 1e-3, t_final = 200.0, displacement = 0.2;
  std::uint64_t seed = 0;
  int fock = 16, trajectories = 1, mode_every = 50;
};

int cmd_stochastic(const StochasticArgs& a) {
  if (a.kappa.size() != 1)
    throw std::invalid_argument("stochastic runs take exactly one --kappa");
  if (a.kappa.front() < 0.0)
    throw std::invalid_argument("noise strength must be nonnegative");
  const Lindbladian lb = load_lindblad(a.lindblad);
  const GridSpec grid = parse_grid(a.grid);
  const Eigen::MatrixXcd rho0 =
      biased_steady_initial(lb, a.fock, a.displacement, grid);

  ModeTrajectoryOptions opts;
  opts.stochastic.dt = a.dt;
  opts.stochastic.seed = a.seed;
  opts.grid = grid;
  opts.mode_every = a.mode_every;

  std::ostringstream out;
  out << (a.trajectories > 1 ? "traj,t,x,y\n" : "t,x,y\n");
  for (int traj = 0; traj < a.trajectories; ++traj) {
    opts.stochastic.trajectory = traj;
    for (const ModePoint& p :
         mode_trajectory({lb, a.kappa.front()}, rho0, a.t_final, opts)) {
      if (a.trajectories > 1) out << traj << ',';
      out << fmt(p.t) << ',' << fmt(p.x) << ',' << fmt(p.y) << '\n';
    }
  }
  emit(a.out, out.str());
  return 0;
}

// ---------------------------------------------------------------------------
// scan

struct ScanArgs {
  std::string lindblad, grid, out;
  std::vector<double> kappa;
  double dt = 1e-3, t_final = 200.0, displacement = 0.2;
  double spike_high = kNan, spike_low = kNan;
  std::uint64_t seed = 0;
  int fock = 16, mode_every = 50;
};

int cmd_scan(const ScanArgs& a) {
  const Lindbladian lb = load_lindblad(a.lindblad);
  ScanConfig cfg;
  cfg.t_final = a.t_final;
  cfg.fock_dim = a.fock;
  cfg.displacement = a.displacement;
  cfg.mode.stochastic.dt = a.dt;
  cfg.mode.stochastic.seed = a.seed;
  cfg.mode.grid = parse_grid(a.grid);
  cfg.mode.mode_every = a.mode_every;
  cfg.detector.high = a.spike_high;
  cfg.detector.low = a.spike_low;

  std::ostringstream out;
  out << "kappa,sigma_bar,inv_sigma_bar,n_spikes\n";
  for (const ScanRow& row : coherence_scan(lb, a.kappa, cfg)) {
    out << fmt(row.kappa) << ',' << fmt(row.sigma_bar) << ','
        << fmt(row.inv_sigma_bar) << ',' << row.n_spikes << '\n';
    if (!row.note.empty())
      std::cerr << "kappa=" << fmt(row.kappa) << ": " << row.note << '\n';
  }
  emit(a.out, out.str());
  return 0;
}

// ---------------------------------------------------------------------------
// catalog

struct CatalogArgs {
  std::string action, name;
  std::vector<std::string> params;
};

int cmd_catalog(const CatalogArgs& a) {
  if (a.action == "list") {
    for (const std::string& name : catalog_names()) {
      const CatalogEntry entry = catalog(name);
      std::cout << name;
      for (const auto& [key, value] : entry.params)
        std::cout << ' ' << key << '=' << value;
      std::cout << '\n';
    }
    return 0;
  }
  if (a.name.empty())
    throw std::invalid_argument("catalog show needs a system name");
  std::map<std::string, double> overrides;
  for (const std::string& kv : a.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::invalid_argument("bad --param \"" + kv +
                                  "\"; expected name=value");
    overrides[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
  }
  std::cout << system_to_json(catalog(a.name, overrides)).dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "casq: map planar polynomial flows to Lindblad generators and drive "
      "the truncated-Fock-space numerics"};
  app.require_subcommand(1);

  QuantizeArgs qa;
  auto* quantize = app.add_subcommand(
      "quantize", "system JSON -> lindblad JSON with drift = (f + i g)/sqrt(2)");
  quantize->add_option("--system", qa.system, "system JSON file")->required();
  quantize->add_option("--method", qa.method,
                       "force a construction (default: table for degree <= 3)")
      ->check(CLI::IsMember({"table", "cascade"}));
  quantize->add_option("--out", qa.out, "output path (default: stdout)");

  VerifyArgs va;
  auto* verify = app.add_subcommand(
      "verify", "exit 0 iff the lindblad file reproduces the system's drift");
  verify->add_option("--lindblad", va.lindblad, "lindblad JSON file")
      ->required();
  verify->add_option("--system", va.system, "system JSON file")->required();

  SteadyArgs sa;
  auto* steady =
      app.add_subcommand("steady", "steady state: observables + density dump");
  steady->add_option("--lindblad", sa.lindblad, "lindblad JSON file")
      ->required();
  add_truncation_flags(steady, sa.trunc);
  steady->add_option("--out", sa.out, "output path (default: stdout)");

  WignerArgs wa;
  auto* wig = app.add_subcommand(
      "wigner", "steady-state Wigner function -> CSV (x,y,w)");
  wig->add_option("--lindblad", wa.lindblad, "lindblad JSON file")->required();
  add_truncation_flags(wig, wa.trunc);
  wig->add_option("--grid", wa.grid,
                  "xmin:xmax:nx[,ymin:ymax:ny] (default -6:6:201, square)");
  wig->add_flag("--scale-unit", wa.scale, "rescale W to peak magnitude 1");
  wig->add_option("--out", wa.out, "output path (default: stdout)");

  EvolveArgs ea;
  auto* evolve = app.add_subcommand(
      "evolve", "deterministic evolution -> CSV (t,n,x,y,purity)");
  evolve->add_option("--lindblad", ea.lindblad, "lindblad JSON file")
      ->required();
  add_truncation_flags(evolve, ea.trunc);
  evolve->add_option("--t-final", ea.t_final, "integration time")
      ->check(CLI::NonNegativeNumber);
  evolve->add_option("--save-points", ea.save_points,
                     "interior checkpoints between the endpoints")
      ->check(CLI::Range(0, 100000));
  evolve->add_option("--initial", ea.initial, "vacuum or coherent:X,Y");
  evolve->add_option("--out", ea.out, "output path (default: stdout)");

  StochasticArgs ta;
  auto* stoch = app.add_subcommand(
      "stochastic", "noisy Wigner-mode trajectory -> CSV (t,x,y)");
  stoch->add_option("--lindblad", ta.lindblad, "lindblad JSON file")
      ->required();
  stoch->add_option("--kappa", ta.kappa, "noise strength")
      ->required()
      ->delimiter(',');
  stoch->add_option("--fock", ta.fock, "Fock-space dimension")
      ->check(CLI::Range(2, 4096));
  stoch->add_option("--dt", ta.dt, "time step")->check(CLI::PositiveNumber);
  stoch->add_option("--t-final", ta.t_final, "integration time")
      ->check(CLI::NonNegativeNumber);
  stoch->add_option("--seed", ta.seed, "noise seed");
  stoch->add_option("--trajectories", ta.trajectories,
                    "independent realizations (adds a traj column)")
      ->check(CLI::Range(1, 100000));
  stoch->add_option("--mode-every", ta.mode_every,
                    "Wigner-mode cadence in steps")
      ->check(CLI::PositiveNumber);
  stoch->add_option("--grid", ta.grid, "mode-search grid");
  stoch->add_option("--displacement", ta.displacement,
                    "initial coherent bias")
      ->check(CLI::NonNegativeNumber);
  stoch->add_option("--out", ta.out, "output path (default: stdout)");

  ScanArgs ca;
  auto* scan = app.add_subcommand(
      "scan", "sigma-bar vs noise strength -> CSV "
              "(kappa,sigma_bar,inv_sigma_bar,n_spikes)");
  scan->add_option("--lindblad", ca.lindblad, "lindblad JSON file")
      ->required();
  scan->add_option("--kappa", ca.kappa, "noise strengths (comma separated)")
      ->required()
      ->delimiter(',');
  scan->add_option("--fock", ca.fock, "Fock-space dimension")
      ->check(CLI::Range(2, 4096));
  scan->add_option("--dt", ca.dt, "time step")->check(CLI::PositiveNumber);
  scan->add_option("--t-final", ca.t_final, "integration time per row")
      ->check(CLI::PositiveNumber);
  scan->add_option("--seed", ca.seed, "noise seed");
  scan->add_option("--mode-every", ca.mode_every,
                   "Wigner-mode cadence in steps")
      ->check(CLI::PositiveNumber);
  scan->add_option("--grid", ca.grid, "mode-search grid");
  scan->add_option("--displacement", ca.displacement, "initial coherent bias")
      ->check(CLI::NonNegativeNumber);
  scan->add_option("--spike-high", ca.spike_high, "firing threshold on Y*");
  scan->add_option("--spike-low", ca.spike_low, "re-arm threshold on Y*");
  scan->add_option("--out", ca.out, "output path (default: stdout)");

  CatalogArgs ga;
  auto* cat = app.add_subcommand("catalog", "built-in system library");
  cat->add_option("action", ga.action, "list or show")
      ->required()
      ->check(CLI::IsMember({"list", "show"}));
  cat->add_option("name", ga.name, "system name (for show)");
  cat->add_option("--param", ga.params, "parameter override name=value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (*quantize) return cmd_quantize(qa);
    if (*verify) return cmd_verify(va);
    if (*steady) return cmd_steady(sa);
    if (*wig) return cmd_wigner(wa);
    if (*evolve) return cmd_evolve(ea);
    if (*stoch) return cmd_stochastic(ta);
    if (*scan) return cmd_scan(ca);
    if (*cat) return cmd_catalog(ga);
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
