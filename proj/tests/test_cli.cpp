#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "cascade/classical.hpp"
#include "cascade/engine.hpp"
#include "cascade/fock.hpp"
#include "cascade/json_io.hpp"
#include "cascade/lindblad.hpp"

// End-to-end tests of the casq binary (path injected by the build).  Each
// test drives the executable through a shell the way a user would and then
// parses its outputs back through the library schemas.

using namespace cascade;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout only; stderr is routed to the test log
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(CASQ_PATH) + " " + args;
  std::array<char, 4096> buf{};
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::fgets(buf.data(), int(buf.size()), pipe) != nullptr)
    res.output += buf.data();
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

/// Scratch directory for one test run's files.
std::filesystem::path scratch() {
  const auto dir =
      std::filesystem::temp_directory_path() /
      ("casq_cli_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_file(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  out << doc.dump(2);
  return path.string();
}

json slurp_json(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return json::parse(in);
}

/// Random polynomial system of total degree <= max_degree with coefficients
/// in the unit disk, in the complex-form schema.
json random_system(std::mt19937_64& rng, int max_degree) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  json h = json::array();
  const int n_terms = 1 + int(rng() % 6);
  for (int t = 0; t < n_terms; ++t) {
    const int d = int(rng() % (max_degree + 1));
    const int j = int(rng() % (d + 1));
    h.push_back({j, d - j, coef(rng), coef(rng)});
  }
  return {{"form", "complex"}, {"h", h}};
}

}  // namespace

// ---------------------------------------------------------------------------
// Round trips

TEST_CASE("cli_quantize_verify_round_trip_for_the_catalog") {
  const auto dir = scratch();
  for (const std::string& name : catalog_names()) {
    INFO(name);
    const auto show = run("catalog show " + name);
    REQUIRE(show.exit_code == 0);
    const auto sys_path = dir / (name + ".json");
    {
      std::ofstream out(sys_path);
      out << show.output;
    }
    const auto lb_path = (dir / (name + "_lb.json")).string();
    const auto quant = run("quantize --system " + sys_path.string() +
                           " --out " + lb_path);
    REQUIRE(quant.exit_code == 0);
    const auto verify = run("verify --lindblad " + lb_path + " --system " +
                            sys_path.string());
    CHECK(verify.exit_code == 0);
  }
}

TEST_CASE("cli_quantize_verify_round_trip_for_random_systems") {
  const auto dir = scratch();
  std::mt19937_64 rng(20240817);
  for (int trial = 0; trial < 50; ++trial) {
    INFO("trial " << trial);
    const auto sys_path =
        write_file(dir / ("rand" + std::to_string(trial) + ".json"),
                   random_system(rng, 6));
    const auto lb_path = dir / ("rand" + std::to_string(trial) + "_lb.json");
    REQUIRE(run("quantize --system " + sys_path + " --out " +
                lb_path.string()).exit_code == 0);
    CHECK(run("verify --lindblad " + lb_path.string() + " --system " +
              sys_path).exit_code == 0);
  }
}

TEST_CASE("cli_outputs_parse_back_losslessly") {
  const auto dir = scratch();
  const auto show = run("catalog show van_der_pol");
  REQUIRE(show.exit_code == 0);
  const json sys_doc = json::parse(show.output);

  // System JSON -> library -> the same drift the catalog built.
  const ClassicalPoly h = system_from_json(sys_doc);
  CHECK((h - catalog("van_der_pol").h).max_abs_coeff() == 0.0);

  // Lindblad JSON -> library -> identical re-serialization.
  const auto sys_path = write_file(dir / "vdp.json", sys_doc);
  const auto lb_path = (dir / "vdp_lb.json").string();
  REQUIRE(run("quantize --system " + sys_path + " --out " + lb_path)
              .exit_code == 0);
  const json lb_doc = slurp_json(lb_path);
  const Lindbladian lb = lindblad_from_json(lb_doc);
  CHECK(lindblad_to_json(lb) == lb_doc);
  CHECK(verify_ehrenfest(lb, h) < 1e-12);
}

TEST_CASE("cli_quantize_reports_channel_count_and_degree") {
  const auto dir = scratch();
  const auto show = run("catalog show hopf --param mu=3");
  REQUIRE(show.exit_code == 0);
  const auto sys_path = write_file(dir / "hopf3.json", json::parse(show.output));
  // Without --out the summary goes to stderr and the JSON to stdout.
  const auto quant = run("quantize --system " + sys_path + " 2>/dev/null");
  REQUIRE(quant.exit_code == 0);
  const Lindbladian lb = lindblad_from_json(json::parse(quant.output));
  CHECK(lb.dissipators.size() == 2);
  const auto summary = run("quantize --system " + sys_path + " --out " +
                           (dir / "hopf3_lb.json").string());
  CHECK(summary.output.find("dissipators: 2") != std::string::npos);
  CHECK(summary.output.find("max operator degree: 2") != std::string::npos);
}

// ---------------------------------------------------------------------------
// Catalog listing

TEST_CASE("cli_catalog_lists_ten_systems_with_parameters") {
  const auto res = run("catalog list");
  REQUIRE(res.exit_code == 0);
  std::istringstream lines(res.output);
  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line)) {
    INFO(line);
    CHECK(line.find('=') != std::string::npos);
    ++count;
  }
  CHECK(count == catalog_names().size());
  CHECK(res.output.find("van_der_pol mu=0.5") != std::string::npos);
}

// ---------------------------------------------------------------------------
// Numerics through the CLI

TEST_CASE("cli_steady_state_of_pure_damping_is_the_vacuum") {
  const auto dir = scratch();
  const json damp = {{"hamiltonian", json::array()},
                     {"dissipators",
                      {{{"rate", 0.6}, {"operator", {{0, 1, 1.0, 0.0}}}}}}};
  const auto lb_path = write_file(dir / "damp.json", damp);
  const auto res = run("steady --lindblad " + lb_path + " --fock 8");
  REQUIRE(res.exit_code == 0);
  const json doc = json::parse(res.output);
  CHECK(doc["dim"] == 8);
  CHECK(std::abs(doc["observables"]["n"].get<double>()) < 1e-12);
  CHECK(doc["rho"]["re"][0][0].get<double>() == Catch::Approx(1.0));
  CHECK(std::abs(doc["rho"]["im"][0][0].get<double>()) < 1e-14);
}

TEST_CASE("cli_wigner_grid_has_the_requested_shape") {
  const auto dir = scratch();
  const json damp = {{"hamiltonian", json::array()},
                     {"dissipators",
                      {{{"rate", 0.6}, {"operator", {{0, 1, 1.0, 0.0}}}}}}};
  const auto lb_path = write_file(dir / "damp.json", damp);
  const auto csv_path = (dir / "w.csv").string();
  REQUIRE(run("wigner --lindblad " + lb_path +
              " --fock 8 --grid=-2:2:41,-1:1:21 --scale-unit --out " +
              csv_path).exit_code == 0);

  std::ifstream in(csv_path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,y,w");
  std::size_t rows = 0;
  double peak = 0.0, first_x = 0.0, first_y = 0.0;
  for (std::string line; std::getline(in, line); ++rows) {
    double x, y, w;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &y, &w) == 3);
    if (rows == 0) {
      first_x = x;
      first_y = y;
    }
    peak = std::max(peak, std::abs(w));
  }
  CHECK(rows == 41 * 21);
  CHECK(first_x == -2.0);  // x varies fastest, so the corner comes first
  CHECK(first_y == -1.0);
  CHECK(peak == Catch::Approx(1.0));  // --scale-unit pins the extremum
}

TEST_CASE("cli_evolve_relaxes_toward_the_steady_occupation") {
  const auto dir = scratch();
  const auto show = run("catalog show stuart_landau");
  REQUIRE(show.exit_code == 0);
  const auto sys_path = write_file(dir / "sl.json", json::parse(show.output));
  const auto lb_path = (dir / "sl_lb.json").string();
  REQUIRE(run("quantize --system " + sys_path + " --out " + lb_path)
              .exit_code == 0);
  const auto csv_path = (dir / "sl.csv").string();
  REQUIRE(run("evolve --lindblad " + lb_path +
              " --fock 16 --t-final 8 --save-points 4 --initial "
              "coherent:1,0 --out " + csv_path).exit_code == 0);

  std::ifstream in(csv_path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,n,x,y,purity");
  double t = 0.0, n = 0.0, x = 0.0, y = 0.0, purity = 0.0;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &t, &n, &x, &y,
                        &purity) == 5);
    ++rows;
  }
  CHECK(rows == 6);  // endpoints + 4 interior checkpoints
  CHECK(t == 8.0);
  // Long-time occupation must match the steady solve of the same generator.
  const Lindbladian lb = lindblad_from_json(slurp_json(lb_path));
  const auto rho = steady_state(lb, 16);
  CHECK(n == Catch::Approx(expectation(rho, op_number()).real()).margin(1e-4));
}

TEST_CASE("cli_stochastic_trajectory_is_seed_deterministic") {
  const auto dir = scratch();
  const auto show = run("catalog show fitzhugh_nagumo");
  REQUIRE(show.exit_code == 0);
  const auto sys_path = write_file(dir / "fn.json", json::parse(show.output));
  const auto lb_path = (dir / "fn_lb.json").string();
  REQUIRE(run("quantize --system " + sys_path + " --out " + lb_path)
              .exit_code == 0);

  const std::string flags = " --kappa 0.4 --fock 12 --t-final 0.5 --dt 1e-3"
                            " --mode-every 100 --grid=-3:3:31";
  const auto a = run("stochastic --lindblad " + lb_path + flags + " --seed 7");
  const auto b = run("stochastic --lindblad " + lb_path + flags + " --seed 7");
  REQUIRE(a.exit_code == 0);
  CHECK(a.output == b.output);
  CHECK(a.output.rfind("t,x,y\n", 0) == 0);

  const auto c = run("stochastic --lindblad " + lb_path + flags + " --seed 8");
  REQUIRE(c.exit_code == 0);
  CHECK(c.output != a.output);
}

TEST_CASE("cli_scan_emits_one_row_per_noise_strength") {
  const auto dir = scratch();
  const auto show = run("catalog show fitzhugh_nagumo");
  REQUIRE(show.exit_code == 0);
  const auto sys_path = write_file(dir / "fn.json", json::parse(show.output));
  const auto lb_path = (dir / "fn_lb.json").string();
  REQUIRE(run("quantize --system " + sys_path + " --out " + lb_path)
              .exit_code == 0);
  const auto csv_path = (dir / "scan.csv").string();
  REQUIRE(run("scan --lindblad " + lb_path +
              " --kappa 0.2,0.5 --fock 12 --t-final 20 --mode-every 100"
              " --grid=-3:3:31 --out " + csv_path + " 2>/dev/null")
              .exit_code == 0);

  std::ifstream in(csv_path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "kappa,sigma_bar,inv_sigma_bar,n_spikes");
  std::vector<double> kappas;
  while (std::getline(in, line)) {
    double k, s, inv;
    int n;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%d", &k, &s, &inv, &n) == 4);
    kappas.push_back(k);
  }
  REQUIRE(kappas == std::vector<double>{0.2, 0.5});
}

// ---------------------------------------------------------------------------
// Exit codes

TEST_CASE("cli_exit_codes_separate_input_numerical_and_verification_errors") {
  const auto dir = scratch();

  SECTION("verification failure is exit 1") {
    const auto show = run("catalog show hopf");
    const auto sys_path = write_file(dir / "hopf.json", json::parse(show.output));
    const auto lb_path = (dir / "hopf_lb.json").string();
    REQUIRE(run("quantize --system " + sys_path + " --out " + lb_path)
                .exit_code == 0);
    json doc = slurp_json(lb_path);
    doc["dissipators"][0]["rate"] = doc["dissipators"][0]["rate"].get<double>() * 1.01;
    const auto bad_path = write_file(dir / "hopf_bad.json", doc);
    const auto res = run("verify --lindblad " + bad_path + " --system " + sys_path);
    CHECK(res.exit_code == 1);
    CHECK(res.output.find("residual") != std::string::npos);
  }

  SECTION("an amplifier with no normalizable steady state is exit 2") {
    const json amp = {{"hamiltonian", json::array()},
                      {"dissipators",
                       {{{"rate", 0.6}, {"operator", {{1, 0, 1.0, 0.0}}}}}}};
    const auto lb_path = write_file(dir / "amp.json", amp);
    CHECK(run("steady --lindblad " + lb_path + " --fock 16 2>/dev/null")
              .exit_code == 2);
    CHECK(run("steady --lindblad " + lb_path + " --auto-truncate 2>/dev/null")
              .exit_code == 2);
  }

  SECTION("a generator with a degenerate steady state is exit 2") {
    const json ham = {{"hamiltonian", {{1, 1, 1.0, 0.0}}},
                      {"dissipators", json::array()}};
    const auto lb_path = write_file(dir / "ham.json", ham);
    CHECK(run("steady --lindblad " + lb_path + " --fock 8 2>/dev/null")
              .exit_code == 2);
  }

  SECTION("malformed input is exit 3") {
    const auto bad_path = (dir / "garbage.json").string();
    std::ofstream(bad_path) << "{nope";
    CHECK(run("quantize --system " + bad_path + " 2>/dev/null").exit_code == 3);
  }

  SECTION("the table method refuses degree above three with exit 3") {
    const json deg5 = {{"form", "complex"},
                       {"h", {{0, 1, -0.5, 1.0}, {2, 3, -0.25, 0.0}}}};
    const auto sys_path = write_file(dir / "deg5.json", deg5);
    CHECK(run("quantize --system " + sys_path + " --method table 2>/dev/null")
              .exit_code == 3);
    // The default dispatch falls back to the cascade and succeeds.
    CHECK(run("quantize --system " + sys_path + " 2>/dev/null").exit_code == 0);
  }

  SECTION("unknown catalog names and missing flags are exit 3") {
    CHECK(run("catalog show lorenz 2>/dev/null").exit_code == 3);
    CHECK(run("steady --lindblad /nonexistent.json --fock 8 2>/dev/null")
              .exit_code == 3);
    const json damp = {{"hamiltonian", json::array()},
                       {"dissipators",
                        {{{"rate", 0.6}, {"operator", {{0, 1, 1.0, 0.0}}}}}}};
    const auto lb_path = write_file(dir / "damp.json", damp);
    CHECK(run("steady --lindblad " + lb_path + " 2>/dev/null").exit_code == 3);
  }
}
