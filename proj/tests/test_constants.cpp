#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "lyap/common.hpp"
#include "lyap/constants.hpp"
#include "lyap/varmin.hpp"

using namespace lyap;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
double cot(double x) { return std::cos(x) / std::sin(x); }
} // namespace

TEST_CASE("closed-form constants, exact to 1e-12") {
  CHECK(std::abs(gamma1n_periodic(2.0, 0).value - 8.0) < 1e-12);
  CHECK(std::abs(gamma1n_periodic(kPi, 1).value - (4 * kPi + 16.0)) < 1e-12);
  CHECK(std::abs(gamma1n_periodic(kPi, 2).value - (16 * kPi + 48.0 * cot(kPi / 3))) < 1e-12);

  CHECK(std::abs(gamma1n_antiperiodic(4.0, 0).value - 1.0) < 1e-12);
  CHECK(std::abs(gamma1n_antiperiodic(kPi, 1).value - (kPi + 6.0 * std::sqrt(3.0))) < 1e-12);
  CHECK(std::abs(gamma1n_antiperiodic(kPi, 2).value -
                 (9 * kPi + 30.0 * cot(3 * kPi / 10))) < 1e-12);

  CHECK(std::abs(gamma_inf_periodic(kPi, 0).value - 4.0) < 1e-12);
  CHECK(std::abs(gamma_inf_periodic(kPi, 1).value - 16.0) < 1e-12);
  CHECK(std::abs(gamma_inf_periodic(2 * kPi, 1).value - 4.0) < 1e-12);

  CHECK_FALSE(gamma1n_periodic(kPi, 1).attained);
  CHECK_FALSE(gamma1n_antiperiodic(kPi, 2).attained);
  CHECK(gamma_inf_periodic(kPi, 1).attained);
}

TEST_CASE("M_p limits and value") {
  const double T = 1.3;
  // p -> 1+: 4/T; p -> inf: pi^2/T^2 (within 1% at the probe exponents)
  // the limit is approached logarithmically ((p-1)^(1-1/p) = 1 + (p-1)ln(p-1) + ...),
  // so the probe must sit closer to 1 than the 1e-2 that a first guess suggests
  CHECK(std::abs(mp_antiperiodic(T, 1.001).value - 4.0 / T) / (4.0 / T) < 0.01);
  CHECK(std::abs(mp_antiperiodic(T, 1e3).value - sqr(kPi / T)) / sqr(kPi / T) < 0.01);
  // p = 2, T = 1: 8 I^2 / sqrt(3)
  double I = mp_singular_integral(2.0);
  CHECK(mp_antiperiodic(1.0, 2.0).value ==
        doctest::Approx(8.0 * I * I / std::sqrt(3.0)).epsilon(1e-12));
  CHECK_THROWS_AS(mp_antiperiodic(1.0, 1.0), InputError);
  CHECK(beta_ant(2.0, 1.0) == doctest::Approx(2.0));
  CHECK(beta_ant(2.0, kInf) == doctest::Approx(sqr(kPi) / 4.0));
}

TEST_CASE("non-attainment margin: a = lambda_{2q} lies strictly above gamma_1n") {
  // lambda_{2m-1} = lambda_{2m} = (2m)^2 pi^2/T^2, so the index-2q eigenvalue
  // of the free problem is (2q)^2 pi^2/T^2. For even q >= 2(n+1) the constant
  // coefficient at that level belongs to Lambda_n and its L1 norm must exceed
  // the unattained constant strictly.
  const double T = kPi;
  for (int n : {1, 2}) {
    double gamma = gamma1n_periodic(T, n).value;
    for (int q = 2 * (n + 1); q <= 2 * (n + 1) + 4; q += 2) {
      double a = sqr(2.0 * q * kPi / T);
      CHECK(a > sqr(2.0 * n * kPi / T)); // strict majorant of lambda_{2n-1}
      CHECK(T * a > gamma + 1e-9);
    }
  }
}

TEST_CASE("classical Lyapunov certificate") {
  const double T = 2.0;
  auto good = classical_lyapunov_check(ScalarCoefficient::constant(T, 1.0 / (T * T)));
  CHECK(good.certified);
  CHECK(good.oracle_agrees);
  CHECK(good.conclusion == "stable");

  auto zero = classical_lyapunov_check(ScalarCoefficient::constant(T, 0.0));
  CHECK_FALSE(zero.certified);

  auto big = classical_lyapunov_check(ScalarCoefficient::constant(1.0, 5.0));
  CHECK_FALSE(big.certified);
}

TEST_CASE("periodic zone certificate") {
  const double T = kPi;
  auto a5 = certify_periodic_zone(ScalarCoefficient::constant(T, 5.0), 1);
  CHECK(a5.certified);
  CHECK(a5.oracle_agrees);

  auto a4 = certify_periodic_zone(ScalarCoefficient::constant(T, 4.0), 1);
  CHECK_FALSE(a4.certified); // nowhere strict

  auto a10 = certify_periodic_zone(ScalarCoefficient::constant(T, 10.0), 1);
  CHECK_FALSE(a10.certified); // 10 pi > 4 pi + 16
}

TEST_CASE("antiperiodic zone certificate") {
  const double T = kPi;
  auto a2 = certify_antiperiodic_zone(ScalarCoefficient::constant(T, 2.0), 1);
  CHECK(a2.certified);
  CHECK(a2.oracle_agrees);

  CHECK_FALSE(certify_antiperiodic_zone(ScalarCoefficient::constant(T, 1.0), 1).certified);
  CHECK_FALSE(certify_antiperiodic_zone(ScalarCoefficient::constant(T, 6.0), 1).certified);
}

TEST_CASE("hill stability certificate (period pi)") {
  auto a5 = certify_hill_stability(ScalarCoefficient::constant(kPi, 5.0));
  CHECK(a5.certified);
  CHECK(a5.oracle_agrees);

  // a(t) = 1.1 + 0.1 sin(2t) has period pi
  auto osc = certify_hill_stability(ScalarCoefficient::fourier(kPi, 1.1, {{0.0, 0.1}}));
  CHECK(osc.certified);
  CHECK(osc.oracle_agrees);

  // inf a < 1: no admissible p
  CHECK_FALSE(certify_hill_stability(ScalarCoefficient::constant(kPi, 0.5)).certified);

  // large norm concentrated on a short spike: every admissible bound fails
  auto spike = certify_hill_stability(
      ScalarCoefficient::piecewise(kPi, {0.0, 0.1, kPi}, {60.0, 1.2}));
  CHECK_FALSE(spike.certified);

  // constants a = 20 (sqrt not an integer) satisfy the k = inf a bound
  auto c20 = certify_hill_stability(ScalarCoefficient::constant(kPi, 20.0));
  CHECK(c20.certified);
  CHECK(c20.oracle_agrees);

  CHECK_THROWS_AS(certify_hill_stability(ScalarCoefficient::constant(1.0, 5.0)),
                  InputError);
}

TEST_CASE("borg bound is increasing in k on [p^2, (p+1)^2]") {
  for (int p : {1, 2, 3}) {
    double lo = sqr((double)p), hi = sqr((double)p + 1);
    double prev = hill_stability_bound(lo, p);
    for (int i = 1; i <= 16; ++i) {
      double k = lo + (hi - lo) * i / 16.0;
      double b = hill_stability_bound(k, p);
      CHECK(b > prev);
      prev = b;
    }
  }
}

TEST_CASE("krein system certificate") {
  const double T = kPi;
  auto cc = [T](double v) { return ScalarCoefficient::constant(T, v); };
  SUBCASE("decoupled constants within the bounds") {
    auto P = MatrixCoefficient::diagonal({cc(0.3), cc(0.6)});
    auto rep = certify_krein_system(P, P, {kInf, kInf});
    CHECK(rep.certified);
    CHECK(rep.oracle_agrees);
  }
  SUBCASE("indefinite integral rejected") {
    auto P = MatrixCoefficient::diagonal({cc(-1.0), cc(0.5)});
    auto rep = certify_krein_system(P, MatrixCoefficient::diagonal({cc(0.0), cc(0.5)}),
                                    {kInf, kInf});
    CHECK_FALSE(rep.certified);
  }
  SUBCASE("Linf bound violated") {
    auto P = MatrixCoefficient::diagonal({cc(2.0), cc(0.5)});
    auto rep = certify_krein_system(P, P, {kInf, kInf});
    CHECK_FALSE(rep.certified);
  }
  SUBCASE("p = 1 admits equality with the L1 constant") {
    // ||b^+||_1 = (4/pi^2) * pi = 4/pi, exactly beta_1^ant
    auto P = MatrixCoefficient::diagonal({cc(4.0 / (kPi * kPi)), cc(0.3)});
    auto rep = certify_krein_system(P, P, {1.0, kInf});
    CHECK(rep.certified);
    CHECK(rep.oracle_agrees);
    // strict inequality required away from p = 1
    auto strict = certify_krein_system(P, P, {1.0000001, kInf});
    (void)strict; // value sits below M_p for p slightly above 1; just ensure no throw
  }
}

TEST_CASE("2x2 coupling certificate") {
  const double T = kPi;
  auto cc = [T](double v) { return ScalarCoefficient::constant(T, v); };
  SUBCASE("small coupling certified") {
    MatrixCoefficient P(2, {cc(0.3), cc(0.1), cc(0.0), cc(0.3)});
    auto rep = certify_2x2_coupling(P, kInf, kInf);
    CHECK(rep.certified);
    CHECK(rep.oracle_agrees);
    // second norm = 0.3 + 0.01/0.7
    bool found = false;
    for (const auto& h : rep.hypotheses)
      if (h.name.find("p22 + p12^2") != std::string::npos) {
        CHECK(h.measured == doctest::Approx(0.3 + 0.01 / 0.7).epsilon(1e-6));
        found = true;
      }
    CHECK(found);
  }
  SUBCASE("[H1] violated when det P < 0 somewhere") {
    MatrixCoefficient P(2, {cc(0.3), cc(0.4), cc(0.0), cc(0.3)});
    CHECK_FALSE(certify_2x2_coupling(P, kInf, kInf).certified);
  }
  SUBCASE("large coupling breaks the second bound") {
    MatrixCoefficient P(2, {cc(1.2), cc(0.9), cc(0.0), cc(1.1)});
    auto rep = certify_2x2_coupling(P, kInf, kInf);
    CHECK_FALSE(rep.certified);
  }
}

TEST_CASE("elliptic system certificate") {
  auto grid = Grid2D::square(1.0, 48);
  double lam1 = neumann_lambda1(grid);
  SUBCASE("decoupled constants below lambda1") {
    auto f1 = SpatialCoefficient2D::constant(grid, 0.4 * lam1);
    auto f2 = SpatialCoefficient2D::constant(grid, 0.7 * lam1);
    auto A = MatrixField::diagonal({f1, f2});
    auto rep = certify_elliptic_system(A, A, {kInf, kInf}, {lam1, lam1});
    CHECK(rep.certified);
    CHECK(rep.oracle_agrees);
  }
  SUBCASE("indefinite integral rejected") {
    auto f1 = SpatialCoefficient2D::constant(grid, -1.0);
    auto f2 = SpatialCoefficient2D::constant(grid, 0.5 * lam1);
    auto A = MatrixField::diagonal({f1, f2});
    auto B = MatrixField::diagonal({SpatialCoefficient2D::constant(grid, 0.0), f2});
    CHECK_FALSE(certify_elliptic_system(A, B, {kInf, kInf}, {lam1, lam1}).certified);
  }
  SUBCASE("coupled field with the explicit majorant split") {
    // A = [[2, 1], [1, 3]]; B = diag(2 + g, 3 + 1/g) with g = 1.
    MatrixField A(grid, 2), B(grid, 2);
    for (int node = 0; node < grid.node_count(); ++node) {
      A.at(node, 0, 0) = 2.0;
      A.at(node, 0, 1) = A.at(node, 1, 0) = 1.0;
      A.at(node, 1, 1) = 3.0;
      B.at(node, 0, 0) = 3.0;
      B.at(node, 1, 1) = 4.0;
    }
    auto rep = certify_elliptic_system(A, B, {kInf, kInf}, {lam1, lam1});
    CHECK(rep.certified);
    CHECK(rep.oracle_agrees);
  }
}

TEST_CASE("two-step disfocality certificate") {
  SUBCASE("constant 9 on the unit interval") {
    auto rep = two_step_disfocality(ScalarCoefficient::constant(1.0, 9.0), 0.5);
    CHECK(rep.certified);
    CHECK(rep.oracle_agrees);
  }
  SUBCASE("both pieces critical rejected") {
    auto rep = two_step_disfocality(ScalarCoefficient::constant(1.0, sqr(kPi)), 0.5);
    CHECK_FALSE(rep.certified);
    CHECK(rep.reason == "not both pieces critical");
  }
  SUBCASE("negative mean rejected") {
    auto rep = two_step_disfocality(ScalarCoefficient::constant(1.0, -0.5), 0.5);
    CHECK_FALSE(rep.certified);
  }
  SUBCASE("asymmetric split allows a large first piece") {
    // t0 = 0.25: first piece may reach pi^2/4/t0^2 * margins beyond pi^2/T^2
    auto a = ScalarCoefficient::piecewise(1.0, {0.0, 0.25, 1.0}, {30.0, 2.0});
    auto rep = two_step_disfocality(a, 0.25);
    // 0.25^2 * 30 = 1.875 <= pi^2/4 ~ 2.47; 0.75^2*2 = 1.125 <= 2.47
    CHECK(rep.certified);
    CHECK(rep.oracle_agrees);
  }
}
