#include <doctest.h>

#include <cmath>
#include <string>

#include "substep/tableau.hpp"

using namespace substep;

TEST_SUITE_BEGIN("tableau");

TEST_CASE("scheme id validates the sub-step range") {
  CHECK_THROWS_AS(SchemeId(0), DomainError);
  CHECK_THROWS_AS(SchemeId(7), DomainError);
  CHECK_THROWS_AS(SchemeId(-2), DomainError);
  for (int s = 1; s <= 6; ++s) {
    CHECK(SchemeId(s).substeps() == s);
  }
}

TEST_CASE("gamma1 roots reproduce the tabulated values") {
  CHECK(std::abs(gamma1_for_rho_inf(SchemeId(3), 0.0) - 0.8717330430) <= 1e-9);
  CHECK(std::abs(gamma1_for_rho_inf(SchemeId(3), 1.0) - 2.0 / 3.0) <= 1e-12);
  CHECK(std::abs(gamma1_for_rho_inf(SchemeId(6), 0.5) - 0.6126639724) <= 1e-9);
  CHECK(std::abs(gamma1_for_rho_inf(SchemeId(4), 1.0) - 0.7886751346) <= 1e-9);
  CHECK(std::abs(gamma1_for_rho_inf(SchemeId(2), 0.0) - (2.0 - std::sqrt(2.0))) <=
        1e-14);
  CHECK(gamma1_for_rho_inf(SchemeId(2), 1.0) == 0.5);
}

TEST_CASE("gamma1 domain checks") {
  CHECK_THROWS_AS(gamma1_for_rho_inf(SchemeId(1), 0.5), DomainError);
  CHECK_THROWS_AS(gamma1_for_rho_inf(SchemeId(3), -0.01), DomainError);
  CHECK_THROWS_AS(gamma1_for_rho_inf(SchemeId(3), 1.01), DomainError);
  CHECK_THROWS_AS(gamma1_for_rho_inf(SchemeId(2), -1.01), DomainError);
  CHECK_THROWS_AS(gamma1_for_rho_inf(SchemeId(2), 1.01), DomainError);
  // the two-sub-step member admits negative rho_inf
  CHECK_NOTHROW(gamma1_for_rho_inf(SchemeId(2), -0.5));
}

TEST_CASE("dissipation value inverts the root solve") {
  CHECK(std::abs(dissipation_value(SchemeId(3), 2.0 / 3.0) - 1.0) <= 1e-12);
  CHECK(std::abs(dissipation_value(SchemeId(3), 0.8717330430) - 0.0) <= 1e-8);
  CHECK(std::abs(dissipation_value(SchemeId(5), 0.4930103863) - 1.0) <= 1e-8);
  CHECK_THROWS_AS(dissipation_value(SchemeId(3), 0.0), DomainError);
  CHECK_THROWS_AS(dissipation_value(SchemeId(1), 0.5), DomainError);
}

TEST_CASE("round trip rho_inf -> gamma1 -> rho_inf over the tabulated range") {
  for (int s = 3; s <= 6; ++s) {
    for (int k = 0; k <= 10; ++k) {
      const double rho = 0.1 * k;
      const double g1 = gamma1_for_rho_inf(SchemeId(s), rho);
      CHECK(std::abs(dissipation_value(SchemeId(s), g1) - rho) <= 1e-9);
    }
  }
}

TEST_CASE("two-sub-step member covers the signed rho_inf range") {
  // rho_inf = -0.5 has the closed-form root gamma_1 = 2/3 ...
  CHECK(std::abs(gamma1_for_rho_inf(SchemeId(2), -0.5) - 2.0 / 3.0) <= 1e-14);
  CHECK(std::abs(dissipation_value(SchemeId(2), 2.0 / 3.0) + 0.5) <= 1e-14);
  // ... and rho_inf = -1 degenerates to gamma_1 = 1 with a vanishing
  // mid-stage weight; the tableau stays consistent.
  CHECK(gamma1_for_rho_inf(SchemeId(2), -1.0) == 1.0);
  const Tableau t = build_tableau(SchemeId(2), -1.0);
  CHECK(t.alpha(2, 1) == 0.0);
  CHECK(t.alpha(2, 0) == 0.5);
  CHECK(std::abs(t.rho_inf + 1.0) <= 1e-14);
}

TEST_CASE("default splitting ratios") {
  SUBCASE("three sub-steps, standard gamma_2") {
    const auto g = default_gammas(SchemeId(3), 2.0 / 3.0);
    REQUIRE(g.size() == 4);
    CHECK(g[0] == 0.0);
    CHECK(g[1] == 2.0 / 3.0);
    CHECK(std::abs(g[2] - (3.0 + std::sqrt(3.0)) * 2.0 / 9.0) <= 1e-15);
    CHECK(g[3] == 1.0);
  }
  SUBCASE("three sub-steps, doubled gamma_2") {
    const auto g = default_gammas(SchemeId(3), 0.7, Gamma2Rule::Double);
    CHECK(g[2] == doctest::Approx(1.4).epsilon(1e-15));
  }
  SUBCASE("five sub-steps at gamma_1 = 1/2 collides with gamma_s harmlessly") {
    const auto g = default_gammas(SchemeId(5), 0.5);
    REQUIRE(g.size() == 6);
    CHECK(g[1] == 0.5);
    CHECK(g[2] == 1.0);
    CHECK(g[3] == 1.5);
    CHECK(g[4] == 2.0);
    CHECK(g[5] == 1.0);
    CHECK_NOTHROW(build_tableau(SchemeId(5), 0.0, g));
  }
  SUBCASE("two sub-steps") {
    const auto g = default_gammas(SchemeId(2), 0.5);
    CHECK(g == std::vector<double>{0.0, 0.5, 1.0});
  }
  CHECK_THROWS_AS(default_gammas(SchemeId(3), -0.1), DomainError);
}

TEST_CASE("single-step tableau is the trapezoidal rule") {
  const Tableau t = build_tableau(SchemeId(1), 1.0);
  CHECK(t.gamma == std::vector<double>{0.0, 1.0});
  CHECK(t.alpha(1, 0) == 0.5);
  CHECK(t.alpha(1, 1) == 0.5);
  CHECK(t.rho_inf == 1.0);
}

TEST_CASE("two-sub-step tableau at rho_inf = 1") {
  const Tableau t = build_tableau(SchemeId(2), 1.0);
  CHECK(t.gamma1() == 0.5);
  CHECK(std::abs(t.alpha(2, 0) - 0.25) <= 1e-15);
  CHECK(std::abs(t.alpha(2, 1) - 0.5) <= 1e-15);
  CHECK(t.alpha(2, 2) == 0.25);
}

TEST_CASE("two-sub-step rows match their closed forms for general gamma_1") {
  for (const double rho : {0.0, 0.3, 0.8}) {
    const Tableau t = build_tableau(SchemeId(2), rho);
    const double g1 = t.gamma1();
    CAPTURE(rho);
    CHECK(std::abs(t.alpha(2, 0) - (-g1 * g1 + 3.0 * g1 - 1.0) / (2.0 * g1)) <=
          1e-15);
    CHECK(std::abs(t.alpha(2, 1) - (1.0 - g1) / (2.0 * g1)) <= 1e-15);
    CHECK(t.alpha(1, 0) == 0.5 * g1);
    CHECK(t.alpha(1, 1) == 0.5 * g1);
  }
}

namespace {

double max_consistency_residual(const Tableau& t) {
  double worst = 0.0;
  for (int i = 1; i <= t.substeps(); ++i) {
    double sum_a = 0.0, sum_ag = 0.0;
    for (int j = 0; j <= i; ++j) {
      sum_a += t.alpha(i, j);
      sum_ag += t.alpha(i, j) * t.gamma[j];
    }
    worst = std::max(worst, std::abs(sum_a - t.gamma[i]));
    worst = std::max(worst, std::abs(sum_ag - 0.5 * t.gamma[i] * t.gamma[i]));
  }
  return worst;
}

}  // namespace

TEST_CASE("consistency sums hold for every member and rho_inf") {
  for (int s = 1; s <= 6; ++s) {
    for (const double rho : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const Tableau t = build_tableau(SchemeId(s), rho);
      CAPTURE(s);
      CAPTURE(rho);
      CHECK(max_consistency_residual(t) <= (s == 3 ? 1e-12 : 1e-10));
      // structure: zero row 0, strict lower triangle, shared diagonal,
      // output weights identical to the last row
      CHECK(t.alpha.row(0).cwiseAbs().maxCoeff() == 0.0);
      for (int i = 1; i <= s; ++i) {
        CHECK(t.alpha(i, i) == 0.5 * t.gamma1());
        for (int j = i + 1; j <= s; ++j) CHECK(t.alpha(i, j) == 0.0);
      }
      for (int j = 0; j <= s; ++j) CHECK(t.b(j) == t.alpha(s, j));
    }
  }
}

TEST_CASE("row-2 third-moment condition holds for the quadratic-root gamma_2") {
  // Sum_j alpha_2j * gamma_j^2 = gamma_2^3 / 3 requires
  // gamma_2 = (3 +/- sqrt(3)) * gamma_1 / 2; neither default rule satisfies
  // it, so check the machinery with an explicit override.
  const double g1 = 2.0 / 3.0;
  const double g2 = (3.0 + std::sqrt(3.0)) * g1 / 2.0;
  const Tableau t = build_tableau(SchemeId(3), 1.0, std::vector<double>{0.0, g1, g2, 1.0});
  double m3 = 0.0;
  for (int j = 0; j <= 2; ++j) {
    m3 += t.alpha(2, j) * t.gamma[j] * t.gamma[j];
  }
  CHECK(std::abs(m3 - g2 * g2 * g2 / 3.0) <= 1e-10);
}

TEST_CASE("user-supplied splitting ratios are validated") {
  CHECK_THROWS_AS(build_tableau(SchemeId(3), 0.0, std::vector<double>{0.0, 0.5, 1.0}),
                  DomainError);  // wrong length
  CHECK_THROWS_AS(
      build_tableau(SchemeId(3), 0.0, std::vector<double>{0.1, 0.5, 0.8, 1.0}),
      DomainError);  // gamma_0 != 0
  CHECK_THROWS_AS(
      build_tableau(SchemeId(3), 0.0, std::vector<double>{0.0, 0.5, 0.8, 0.9}),
      DomainError);  // gamma_s != 1
  CHECK_THROWS_AS(
      build_tableau(SchemeId(3), 0.0, std::vector<double>{0.0, 0.8, 0.5, 1.0}),
      DomainError);  // not increasing
  // valid override: rho_inf is derived from gamma_1, not the argument
  const Tableau t =
      build_tableau(SchemeId(3), 0.0, std::vector<double>{0.0, 2.0 / 3.0, 1.2, 1.0});
  CHECK(std::abs(t.rho_inf - 1.0) <= 1e-12);
}

TEST_CASE("singular coefficient denominators are reported by name") {
  // gamma_2 = 1 with gamma_1 = 1/2 zeroes the alpha_43 numerator, which the
  // alpha_32 formula divides by.
  try {
    build_tableau(SchemeId(4), 0.0, std::vector<double>{0.0, 0.5, 1.0, 1.5, 1.0});
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("alpha") != std::string::npos);
  }
}

TEST_SUITE_END();
