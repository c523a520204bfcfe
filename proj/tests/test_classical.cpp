#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "cascade/classical.hpp"

using namespace cascade;

namespace {

RealSystem random_system(std::mt19937& rng, int max_degree) {
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  RealSystem s;
  for (int t = 0; t < 5; ++t) {
    const int d = deg(rng);
    std::uniform_int_distribution<int> split(0, d);
    const int i = split(rng);
    s.f += RealPoly::term(i, d - i, coef(rng));
    const int d2 = deg(rng);
    std::uniform_int_distribution<int> split2(0, d2);
    const int i2 = split2(rng);
    s.g += RealPoly::term(i2, d2 - i2, coef(rng));
  }
  return s;
}

}  // namespace

TEST_CASE("clockwise_rotation_maps_to_minus_i_alpha") {
  RealSystem s;
  s.f = RealPoly::term(0, 1, 1.0);   // x' = y
  s.g = RealPoly::term(1, 0, -1.0);  // y' = -x
  const ClassicalPoly h = to_complex(s);
  CHECK(h.size() == 1u);
  CHECK(std::abs(h.coeff(0, 1) - cplx{0.0, -1.0}) < 1e-15);
}

TEST_CASE("hopf_normal_form_maps_to_single_complex_equation") {
  const CatalogEntry e = catalog("hopf", {{"mu", 0.7}});
  // i alpha + mu alpha - 2 conj(alpha) alpha^2
  CHECK(e.h.size() == 2u);
  CHECK(std::abs(e.h.coeff(0, 1) - cplx{0.7, 1.0}) < 1e-14);
  CHECK(std::abs(e.h.coeff(1, 2) - cplx{-2.0}) < 1e-14);
}

TEST_CASE("saddle_node_complex_drift_matches_hand_expansion") {
  const CatalogEntry e = catalog("saddle_node", {{"mu", 1.4}});
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(e.h.coeff(0, 0) - cplx{1.4 * r}) < 1e-14);
  CHECK(std::abs(e.h.coeff(0, 1) - cplx{-0.5}) < 1e-14);
  CHECK(std::abs(e.h.coeff(1, 0) - cplx{0.5}) < 1e-14);
  CHECK(std::abs(e.h.coeff(0, 2) - cplx{-r / 2}) < 1e-14);
  CHECK(std::abs(e.h.coeff(1, 1) - cplx{-r}) < 1e-14);
  CHECK(std::abs(e.h.coeff(2, 0) - cplx{-r / 2}) < 1e-14);
}

TEST_CASE("to_real_inverts_to_complex_on_random_systems") {
  std::mt19937 rng(3);
  for (int rep = 0; rep < 30; ++rep) {
    const RealSystem s = random_system(rng, 5);
    const RealSystem back = to_real(to_complex(s));
    double err = 0.0;
    for (const auto& [m, c] : s.f.terms())
      err = std::max(err, std::abs(back.f.coeff(m.first, m.second) - c));
    for (const auto& [m, c] : back.f.terms())
      err = std::max(err, std::abs(s.f.coeff(m.first, m.second) - c));
    for (const auto& [m, c] : s.g.terms())
      err = std::max(err, std::abs(back.g.coeff(m.first, m.second) - c));
    for (const auto& [m, c] : back.g.terms())
      err = std::max(err, std::abs(s.g.coeff(m.first, m.second) - c));
    CHECK(err < 1e-12);
  }
}

TEST_CASE("symplectic_rotation_is_hamiltonian") {
  RealSystem s;
  s.f = RealPoly::term(0, 1, 1.0);
  s.g = RealPoly::term(1, 0, -1.0);
  const auto [ok, div] = is_hamiltonian(s);
  CHECK(ok);
  CHECK(div.is_zero());
}

TEST_CASE("van_der_pol_divergence_is_minus_mu_x2_minus_1") {
  const double mu = 0.8;
  const CatalogEntry e = catalog("van_der_pol", {{"mu", mu}});
  const auto [ok, div] = is_hamiltonian(e.real);
  CHECK(!ok);
  CHECK(std::abs(div.coeff(2, 0) + mu) < 1e-14);
  CHECK(std::abs(div.coeff(0, 0) - mu) < 1e-14);
  CHECK(div.terms().size() == 2u);
}

TEST_CASE("unusual_lienard_divergence_is_minus_k_x") {
  const double k = 1.7;
  // As printed: x' = y, y' = -x - k x y - (k^2/9) x^3.
  RealSystem s;
  s.f = RealPoly::term(0, 1, 1.0);
  s.g = RealPoly::term(1, 0, -1.0) + RealPoly::term(1, 1, -k) +
        RealPoly::term(3, 0, -k * k / 9.0);
  const auto [ok, div] = is_hamiltonian(s);
  CHECK(!ok);
  CHECK(div.terms().size() == 1u);
  CHECK(std::abs(div.coeff(1, 0) + k) < 1e-14);

  // The catalog's rescaled form keeps the same divergence.
  const auto [ok2, div2] = is_hamiltonian(catalog("unusual_lienard", {{"k", k}}).real);
  CHECK(!ok2);
  CHECK(std::abs(div2.coeff(1, 0) + k) < 1e-14);
  CHECK(div2.terms().size() == 1u);
}

TEST_CASE("rotational_symmetry_requires_ann_minus_dag_of_one") {
  CHECK(is_rotationally_symmetric(ClassicalPoly::term(0, 1, cplx{-0.3})));
  CHECK(is_rotationally_symmetric(ClassicalPoly::term(1, 2, cplx{-1.0})));
  CHECK(is_rotationally_symmetric(catalog("stuart_landau").h));
  CHECK(!is_rotationally_symmetric(catalog("van_der_pol").h));
  CHECK(!is_rotationally_symmetric(catalog("saddle_node").h));
}

TEST_CASE("lienard_cubic_family_passes_all_conditions") {
  const double g0 = 0.9, g1 = 1.3, g2 = 2.1, g3 = 0.4;
  const std::vector<double> u = {0.0, g1, 0.0, g3};
  const std::vector<double> v = {-g0, 0.0, g2};
  const LienardReport rep = lienard_conditions(u, v);
  CHECK(rep.u_odd);
  CHECK(rep.u_positive);
  CHECK(rep.v_even);
  CHECK(rep.v_unique_root);
  CHECK(rep.v_negative_before);
  CHECK(rep.v_increasing_after);
  CHECK(rep.pass());
  CHECK(std::abs(rep.x0 - std::sqrt(3.0 * g0 / g2)) < 1e-8);
}

TEST_CASE("lienard_cubic_family_passes_on_parameter_grid") {
  for (double g0 : {0.5, 2.5, 5.0})
    for (double g1 : {0.5, 5.0})
      for (double g2 : {0.5, 2.5, 5.0})
        for (double g3 : {0.5, 5.0}) {
          const LienardReport rep =
              lienard_conditions({0.0, g1, 0.0, g3}, {-g0, 0.0, g2});
          CHECK(rep.pass());
        }
}

TEST_CASE("lienard_u_x_v_one_fails_unique_root") {
  const LienardReport rep = lienard_conditions({0.0, 1.0}, {1.0});
  CHECK(rep.u_odd);
  CHECK(rep.u_positive);
  CHECK(!rep.v_unique_root);
  CHECK(!rep.pass());
}

TEST_CASE("lienard_negative_u_fails_positivity") {
  const LienardReport rep = lienard_conditions({0.0, -1.0}, {-1.0, 0.0, 1.0});
  CHECK(!rep.u_positive);
  CHECK(!rep.pass());
}

TEST_CASE("lienard_even_u_component_fails_oddness") {
  const LienardReport rep =
      lienard_conditions({0.0, 1.0, 0.3}, {-1.0, 0.0, 1.0});
  CHECK(!rep.u_odd);
}

TEST_CASE("catalog_lists_ten_systems") {
  CHECK(catalog_names().size() == 10u);
  for (const auto& name : catalog_names()) {
    const CatalogEntry e = catalog(name);
    CHECK(e.name == name);
    CHECK(!e.h.is_zero());
  }
}

TEST_CASE("catalog_rejects_unknown_names_and_parameters") {
  CHECK_THROWS_AS(catalog("doughnut"), std::invalid_argument);
  CHECK_THROWS_AS(catalog("hopf", {{"nu", 1.0}}), std::invalid_argument);
}

TEST_CASE("every_published_lindbladian_reproduces_its_drift") {
  // The central regression invariant: the reference Lindbladians must
  // generate exactly the classical drift of their systems.
  for (const auto& name : catalog_names()) {
    const CatalogEntry e = catalog(name);
    REQUIRE(e.published.has_value());
    CHECK(hermiticity_defect(e.published->hamiltonian) < 1e-12);
    for (const auto& d : e.published->dissipators) CHECK(d.rate >= 0.0);
    const double res = verify_ehrenfest(*e.published, e.h);
    INFO(name << " residual " << res);
    CHECK(res < 1e-12);
  }
}

TEST_CASE("published_lindbladians_verify_across_parameter_values") {
  auto check = [](const std::string& name,
                  const std::map<std::string, double>& p) {
    const CatalogEntry e = catalog(name, p);
    REQUIRE(e.published.has_value());
    const double res = verify_ehrenfest(*e.published, e.h);
    INFO(name << " residual " << res);
    CHECK(res < 1e-12);
  };
  check("saddle_node", {{"mu", -1.5}});
  check("saddle_node", {{"mu", 0.3}});
  check("transcritical", {{"mu", 0.2}});  // loss branch, mu < 1
  check("transcritical", {{"mu", 3.0}});  // gain branch, mu > 1
  check("pitchfork", {{"mu", 0.5}});
  check("pitchfork", {{"mu", 3.0}});
  check("hopf", {{"mu", -2.0}});
  check("hopf", {{"mu", 3.0}});
  check("infinite_period", {{"mu", 2.2}});
  check("stuart_landau", {{"kappa", 1.7}, {"gamma", 0.4}});
  check("van_der_pol", {{"mu", 2.0}});
  check("fitzhugh_nagumo", {{"eps", 0.4}, {"x0", 0.9}, {"mu", 1.1}});
  check("lienard_cubic", {{"g0", 0.3}, {"g1", 2.0}, {"g2", 1.4}, {"g3", 0.7}});
  check("unusual_lienard", {{"k", 2.5}});
}

TEST_CASE("van_der_pol_equals_lienard_cubic_special_case") {
  const double mu = 0.6;
  const CatalogEntry vdp = catalog("van_der_pol", {{"mu", mu}});
  const CatalogEntry lie = catalog(
      "lienard_cubic", {{"g0", mu}, {"g1", 1.0}, {"g2", mu}, {"g3", 0.0}});
  CHECK((vdp.h - lie.h).max_abs_coeff() < 1e-14);
  CHECK(equivalent(*vdp.published, *lie.published));
}

TEST_CASE("catalog_parameter_defaults_are_recorded") {
  const CatalogEntry e = catalog("fitzhugh_nagumo");
  CHECK(e.param("eps") == 0.1);
  CHECK(e.param("x0") == 1.2);
  CHECK(e.param("mu") == 0.2);
}
