#include <doctest.h>

#include <cmath>

#include "hetanova/asymptotic.hpp"
#include "hetanova/errors.hpp"
#include "oracles.hpp"

using namespace hetanova;

TEST_CASE("chi-square critical values") {
  CHECK(chi_square_critical(2, 0.05) == doctest::Approx(5.9915).epsilon(2e-4));
  CHECK(chi_square_critical(1, 0.05) == doctest::Approx(3.8415).epsilon(2e-4));
  CHECK(chi_square_critical(1, 0.05) == doctest::Approx(1.959964 * 1.959964).epsilon(1e-4));
  CHECK(chi_square_critical(3, 0.9999999) == doctest::Approx(0.0).scale(1).epsilon(1e-3));
  CHECK(chi_square_critical(4, 1.0) == 0.0);
  CHECK_THROWS_AS(chi_square_critical(0, 0.05), InvalidDFError);
}

TEST_CASE("chi-square quantiles match the quadrature oracle") {
  for (int df : {1, 2, 3, 5, 8, 15})
    for (double alpha : {0.01, 0.05, 0.5, 0.9}) {
      const double mine = chi_square_critical(df, alpha);
      const double oracle = oracles::chi_square_quantile_quadrature(df, 1.0 - alpha);
      CHECK(mine == doctest::Approx(oracle).epsilon(1e-8));
    }
}

TEST_CASE("build_sigma_T structure") {
  SUBCASE("a=2 collapses to a single unit entry") {
    const CellSummaryTable s(Layout::balanced(2, 3, 10), DGrid(2, 3, 0.0), DGrid(2, 3, 1.5));
    const AsymptoticCovariance cov = build_sigma_T(s);
    CHECK(cov.q == 1);
    CHECK(cov.sigma_T.size() == 1);
    CHECK(cov.sigma_T[0] == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("equal eta gives +-1/2 correlations for a=3") {
    const CellSummaryTable s(Layout::balanced(3, 2, 10), DGrid(3, 2, 0.0), DGrid(3, 2, 2.0));
    const AsymptoticCovariance cov = build_sigma_T(s);
    REQUIRE(cov.q == 3);
    // pairs ordered (1,2), (1,3), (2,3)
    CHECK(cov.sigma_T[0 * 3 + 1] == doctest::Approx(0.5).epsilon(1e-12));   // share level 1
    CHECK(cov.sigma_T[0 * 3 + 2] == doctest::Approx(-0.5).epsilon(1e-12));  // opposite roles of 2
    CHECK(cov.sigma_T[1 * 3 + 2] == doctest::Approx(0.5).epsilon(1e-12));   // share level 3
    for (int k = 0; k < 3; ++k) CHECK(cov.sigma_T[k * 3 + k] == doctest::Approx(1.0));
  }
  SUBCASE("eta and tau plug-in values") {
    // 2x2 with known variances and sizes: eta_i^2 = (N/b^2) sum_j S2_ij/n_ij.
    const CellSummaryTable s(Layout(2, 2, IGrid(2, 2, {4, 8, 10, 3})),
                             DGrid(2, 2, 0.0), DGrid(2, 2, {2.0, 1.0, 3.0, 4.0}));
    const AsymptoticCovariance cov = build_sigma_T(s);
    const double total = 25.0;
    const double eta1 = total / 4.0 * (2.0 / 4 + 1.0 / 8);
    const double eta2 = total / 4.0 * (3.0 / 10 + 4.0 / 3);
    CHECK(cov.eta2[0] == doctest::Approx(eta1).epsilon(1e-12));
    CHECK(cov.eta2[1] == doctest::Approx(eta2).epsilon(1e-12));
    CHECK(cov.tau[0] == doctest::Approx(std::sqrt(eta1 + eta2)).epsilon(1e-12));
    CHECK(cov.sigma_z[0] == doctest::Approx(eta1 + eta2).epsilon(1e-12));
  }
}

TEST_CASE("sigma_z equals the transcribed partitioned layout") {
  rng::Stream stream = rng::derive_stream(51, 0);
  for (int a : {3, 4, 5}) {
    std::vector<double> eta2(a);
    for (double& v : eta2) v = 0.5 + 2.0 * stream.next_uniform();
    const std::vector<double> expected = oracles::partitioned_sigma_z(a, eta2);

    // Summary engineered so the plug-in eta2 comes out as chosen.
    const int b = 2, n = 10;
    const double total = a * b * n;
    DGrid var(a, b, 0.0);
    for (int i = 0; i < a; ++i)
      for (int j = 0; j < b; ++j) var(i, j) = eta2[i] * b * b / total * n / 2.0;
    const CellSummaryTable s(Layout::balanced(a, b, n), DGrid(a, b, 0.0), var);
    const AsymptoticCovariance cov = build_sigma_T(s);
    for (int i = 0; i < a; ++i) CHECK(cov.eta2[i] == doctest::Approx(eta2[i]).epsilon(1e-12));
    const int q = cov.q;
    for (int k = 0; k < q * q; ++k)
      CHECK(cov.sigma_z[k] == doctest::Approx(expected[k]).epsilon(1e-11).scale(1));
  }
}

TEST_CASE("equicoordinate quantile") {
  McSettings mc;
  mc.draws = 200000;
  mc.seed = 99;

  SUBCASE("q=1 reproduces the two-sided normal quantile") {
    AsymptoticCovariance cov;
    cov.q = 1;
    cov.sigma_T = {1.0};
    CHECK(equicoordinate_quantile(cov, 0.05, mc) == doctest::Approx(1.959964).epsilon(0.006));
  }
  SUBCASE("independent pair solves (2 Phi(d) - 1)^2 = 0.95") {
    AsymptoticCovariance cov;
    cov.q = 2;
    cov.sigma_T = {1.0, 0.0, 0.0, 1.0};
    CHECK(equicoordinate_quantile(cov, 0.05, mc) == doctest::Approx(2.2365).epsilon(0.006));
  }
  SUBCASE("perfectly correlated pair behaves like q=1") {
    AsymptoticCovariance cov;
    cov.q = 2;
    cov.sigma_T = {1.0, 1.0, 1.0, 1.0};
    CHECK(equicoordinate_quantile(cov, 0.05, mc) == doctest::Approx(1.959964).epsilon(0.007));
  }
  SUBCASE("monotone decreasing in alpha") {
    AsymptoticCovariance cov;
    cov.q = 2;
    cov.sigma_T = {1.0, 0.3, 0.3, 1.0};
    const double d05 = equicoordinate_quantile(cov, 0.05, mc);
    const double d20 = equicoordinate_quantile(cov, 0.20, mc);
    CHECK(d05 > d20);
  }
  SUBCASE("raising correlations does not raise the quantile") {
    AsymptoticCovariance lo, hi;
    lo.q = hi.q = 2;
    lo.sigma_T = {1.0, 0.1, 0.1, 1.0};
    hi.sigma_T = {1.0, 0.9, 0.9, 1.0};
    CHECK(equicoordinate_quantile(hi, 0.05, mc) <=
          equicoordinate_quantile(lo, 0.05, mc) + 0.01);
  }
  SUBCASE("deterministic across thread counts") {
    AsymptoticCovariance cov;
    cov.q = 3;
    cov.sigma_T = {1.0, 0.5, -0.5, 0.5, 1.0, 0.5, -0.5, 0.5, 1.0};
    CHECK(equicoordinate_quantile(cov, 0.05, mc, 1) == equicoordinate_quantile(cov, 0.05, mc, 8));
  }
  SUBCASE("a matrix far from PSD is rejected") {
    AsymptoticCovariance cov;
    cov.q = 2;
    cov.sigma_T = {1.0, 2.0, 2.0, 1.0};  // eigenvalues 3 and -1
    CHECK_THROWS_AS(equicoordinate_quantile(cov, 0.05, mc), NotPSDError);
  }
}

TEST_CASE("asymptotic tests") {
  SUBCASE("lambda = 1 never rejects") {
    const DGrid mean(2, 3, {3, 5, 9, 3, 5, 9});
    const CellSummaryTable s(Layout::balanced(2, 3, 30), mean, DGrid(2, 3, 1.0));
    const AsymptoticTestResult r = asymptotic_test(s, AsymptoticKind::AlrtTreatmentA, 0.05, {});
    CHECK(r.df == 1);
    CHECK(*r.statistic.neg_two_log == doctest::Approx(0.0).scale(1).epsilon(1e-8));
    CHECK_FALSE(r.reject);
  }
  SUBCASE("a=2 asymptotic MCT reduces to a two-sided z-test") {
    rng::Stream stream = rng::derive_stream(52, 0);
    const CellSummaryTable s = oracles::random_summary(2, 3, stream);
    McSettings mc;
    mc.draws = 200000;
    const AsymptoticTestResult r = asymptotic_test(s, AsymptoticKind::AmctTreatmentA, 0.05, {}, mc);
    CHECK(r.threshold == doctest::Approx(1.959964).epsilon(0.006));
    CHECK(r.reject == (r.statistic.value > r.threshold));
  }
  SUBCASE("degrees of freedom per kind") {
    rng::Stream stream = rng::derive_stream(53, 0);
    const CellSummaryTable s = oracles::random_summary(3, 4, stream);
    CHECK(asymptotic_test(s, AsymptoticKind::AlrtInteraction, 0.05, {}).df == 6);
    CHECK(asymptotic_test(s, AsymptoticKind::AlrtSimpleA, 0.05, {}).df == 8);
    CHECK(asymptotic_test(s, AsymptoticKind::AlrtTreatmentA, 0.05, {}).df == 2);
  }
}
