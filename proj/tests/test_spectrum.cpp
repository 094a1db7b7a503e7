#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lyap/common.hpp"
#include "lyap/spectrum.hpp"

using namespace lyap;

namespace {

double pisq(int k, double T) { return sqr(k * kPi / T); }

}

TEST_CASE("free coefficient: periodic spectrum (2n pi/T)^2 with doubles") {
  for (double T : {1.0, 2.0}) {
    auto a = ScalarCoefficient::constant(T, 0.0);
    auto table = scalar_eigenvalues(a, BoundaryCondition::Periodic, 5, 4096);
    std::vector<double> expected{0.0, pisq(2, T), pisq(2, T), pisq(4, T), pisq(4, T)};
    for (int i = 0; i < 5; ++i)
      CHECK(table.value(i) == doctest::Approx(expected[(size_t)i]).epsilon(1e-9).scale(1.0));
    CHECK(table.eigenvalues[0].multiplicity == 1);
    CHECK(table.eigenvalues[1].multiplicity == 2);
    CHECK(table.eigenvalues[2].multiplicity == 2);
  }
}

TEST_CASE("free coefficient: antiperiodic spectrum ((2n-1) pi/T)^2") {
  for (double T : {1.0, 3.0}) {
    auto a = ScalarCoefficient::constant(T, 0.0);
    auto table = scalar_eigenvalues(a, BoundaryCondition::Antiperiodic, 4, 4096);
    std::vector<double> expected{pisq(1, T), pisq(1, T), pisq(3, T), pisq(3, T)};
    for (int i = 0; i < 4; ++i)
      CHECK(table.value(i + 1) == doctest::Approx(expected[(size_t)i]).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("constant shift identity") {
  const double T = 1.0, c = 3.7;
  auto a0 = ScalarCoefficient::constant(T, 0.0);
  auto ac = ScalarCoefficient::constant(T, c);
  for (auto bc : {BoundaryCondition::Periodic, BoundaryCondition::Antiperiodic}) {
    auto t0 = scalar_eigenvalues(a0, bc, 4, 2048);
    auto tc = scalar_eigenvalues(ac, bc, 4, 2048);
    int base = t0.first_index();
    for (int i = 0; i < 4; ++i)
      CHECK(tc.value(base + i) == doctest::Approx(t0.value(base + i) - c).epsilon(1e-8));
  }
}

TEST_CASE("discretized oracle") {
  const double T = 1.0;
  auto a0 = ScalarCoefficient::constant(T, 0.0);
  SUBCASE("free periodic eigenvalue at mesh 512") {
    auto t = discretized_scalar_eigenvalues(a0, BoundaryCondition::Periodic, 512, 3);
    CHECK(std::abs(t.value(1) - 4 * kPi * kPi) / (4 * kPi * kPi) < 0.005);
  }
  SUBCASE("shift identity") {
    auto t0 = discretized_scalar_eigenvalues(a0, BoundaryCondition::Periodic, 256, 5);
    auto t5 = discretized_scalar_eigenvalues(ScalarCoefficient::constant(T, 5.0),
                                             BoundaryCondition::Periodic, 256, 5);
    for (int i = 0; i < 5; ++i)
      CHECK(t5.value(i) == doctest::Approx(t0.value(i) - 5.0).epsilon(1e-10));
  }
  SUBCASE("cross-method agreement on a Mathieu coefficient") {
    auto a = ScalarCoefficient::fourier(2 * kPi, 0.2, {{1.0, 0.0}});
    auto disc = scalar_eigenvalues(a, BoundaryCondition::Periodic, 5, 4096);
    auto fd = discretized_scalar_eigenvalues(a, BoundaryCondition::Periodic, 1024, 5);
    for (int i = 0; i < 5; ++i) {
      double scale = std::max(1.0, std::abs(disc.value(i)));
      CHECK(std::abs(disc.value(i) - fd.value(i)) / scale < 1e-4);
    }
  }
}

TEST_CASE("interlacing chain") {
  SUBCASE("free coefficient (equalities at paired indices)") {
    auto rep = verify_interlacing(ScalarCoefficient::constant(1.0, 0.0), 2, 2048);
    CHECK(rep.holds);
  }
  SUBCASE("smooth sine perturbation") {
    auto a = ScalarCoefficient::fourier(1.0, 1.0, {{0.0, 0.3}});
    auto rep = verify_interlacing(a, 2, 2048);
    CHECK(rep.holds);
    CHECK(rep.violation.empty());
  }
  SUBCASE("seeded piecewise coefficients") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    for (int trial = 0; trial < 3; ++trial) {
      auto a = ScalarCoefficient::piecewise(1.0, {0.0, 0.3, 0.7, 1.0},
                                            {uni(rng), uni(rng), uni(rng)});
      CHECK(verify_interlacing(a, 2, 2048).holds);
    }
  }
}

TEST_CASE("large-amplitude coefficient: scan still resolves the spectrum") {
  // strongly unstable Mathieu-type coefficient with wide tongues
  auto a = ScalarCoefficient::fourier(2 * kPi, 0.3, {{2.0, 0.0}});
  auto rep = verify_interlacing(a, 3, 4096);
  CHECK(rep.holds);
  auto d = scalar_eigenvalues(a, BoundaryCondition::Periodic, 6, 4096);
  auto f = discretized_scalar_eigenvalues(a, BoundaryCondition::Periodic, 1024, 6);
  for (int i = 0; i < 6; ++i) {
    double scale = std::max(1.0, std::abs(d.value(i)));
    CHECK(std::abs(d.value(i) - f.value(i)) / scale < 1e-3);
  }
}

TEST_CASE("krein lambda1") {
  const double T = kPi;
  auto cc = [T](double v) { return ScalarCoefficient::constant(T, v); };
  SUBCASE("decoupled diagonal") {
    auto P = MatrixCoefficient::diagonal({cc(0.3), cc(0.6)});
    auto r = krein_lambda1(P, 192);
    REQUIRE(r.lambda1.has_value());
    // lambda1 = pi^2 / (T^2 max c) = 1/0.6
    CHECK(*r.lambda1 == doctest::Approx(1.0 / 0.6).epsilon(1e-3));
  }
  SUBCASE("scaling lambda1(sP) = lambda1(P)/s") {
    auto P = MatrixCoefficient::diagonal({cc(0.4), cc(1.1)});
    auto Ps = MatrixCoefficient::diagonal({cc(0.8), cc(2.2)});
    auto r1 = krein_lambda1(P, 128);
    auto r2 = krein_lambda1(Ps, 128);
    REQUIRE(r1.lambda1.has_value());
    REQUIRE(r2.lambda1.has_value());
    CHECK(*r2.lambda1 == doctest::Approx(*r1.lambda1 / 2.0).epsilon(1e-10));
  }
  SUBCASE("constant symmetric 2x2 via diagonalization") {
    auto z = cc(0.0);
    MatrixCoefficient P(2, {cc(0.5), cc(0.2), z, cc(0.8)});
    // eigenvalues of [[0.5, 0.2], [0.2, 0.8]]
    double tr = 1.3, det = 0.5 * 0.8 - 0.04;
    double mu1 = 0.5 * (tr + std::sqrt(tr * tr - 4 * det));
    auto r = krein_lambda1(P, 192);
    REQUIRE(r.lambda1.has_value());
    CHECK(*r.lambda1 == doctest::Approx(sqr(kPi / T) / mu1).epsilon(1e-3));
  }
  SUBCASE("no positive eigenvalue for negative definite P") {
    auto P = MatrixCoefficient::diagonal({cc(-1.0), cc(-0.5)});
    auto r = krein_lambda1(P, 128);
    CHECK(!r.lambda1.has_value());
  }
}

TEST_CASE("zero structure") {
  const double T = 1.0;
  SUBCASE("periodic eigenfunction sin(4 pi t / T): m = 4") {
    auto a = ScalarCoefficient::constant(T, sqr(4 * kPi / T));
    auto zs = zero_structure(a, BoundaryCondition::Periodic, 8192);
    CHECK(zs.m == 4);
    CHECK(zs.interlaced);
  }
  SUBCASE("antiperiodic first eigenfunction: m = 1") {
    auto a = ScalarCoefficient::constant(T, sqr(kPi / T));
    auto zs = zero_structure(a, BoundaryCondition::Antiperiodic, 8192);
    CHECK(zs.m == 1);
    CHECK(zs.interlaced);
  }
  SUBCASE("lambda_6 level: m = 6 with equal gaps") {
    auto a = ScalarCoefficient::constant(T, sqr(6 * kPi / T));
    auto zs = zero_structure(a, BoundaryCondition::Periodic, 8192);
    CHECK(zs.m == 6);
    REQUIRE(zs.zeros_of_u.size() == 7);
    for (int i = 0; i < 6; ++i)
      CHECK(zs.zeros_of_u[(size_t)i + 1] - zs.zeros_of_u[(size_t)i] ==
            doctest::Approx(T / 6.0).epsilon(1e-6));
  }
  SUBCASE("rejects a coefficient without the zero eigenvalue") {
    auto a = ScalarCoefficient::constant(T, 1.0);
    CHECK_THROWS_AS(zero_structure(a, BoundaryCondition::Periodic), InputError);
  }
}
