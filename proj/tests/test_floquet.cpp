#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "lyap/common.hpp"
#include "lyap/floquet.hpp"

using namespace lyap;

TEST_CASE("monodromy closed forms") {
  SUBCASE("a = 0: shear matrix") {
    for (double T : {1.0, 2.5}) {
      auto m = monodromy(ScalarCoefficient::constant(T, 0.0), 256);
      CHECK(m.matrix(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(m.matrix(0, 1) == doctest::Approx(T).epsilon(1e-12));
      CHECK(m.matrix(1, 0) == doctest::Approx(0.0));
      CHECK(m.discriminant == doctest::Approx(2.0).epsilon(1e-12));
    }
  }
  SUBCASE("constant coefficient discriminant") {
    for (double c : {0.5, 2.0, 9.0}) {
      for (double T : {1.0, kPi}) {
        auto m = monodromy(ScalarCoefficient::constant(T, c), 1024);
        CHECK(m.discriminant ==
              doctest::Approx(2.0 * std::cos(std::sqrt(c) * T)).epsilon(1e-10));
      }
    }
  }
  SUBCASE("Mathieu agrees with a half-step reference") {
    auto a = ScalarCoefficient::fourier(2 * kPi, 0.2, {{1.0, 0.0}});
    auto coarse = monodromy(a, 1024);
    auto fine = monodromy(a, 2048);
    CHECK(std::abs(coarse.discriminant - fine.discriminant) < 1e-8);
    CHECK(coarse.estimated_error < 1e-8);
  }
}

TEST_CASE("classify") {
  auto verdict = [](double c, double T) {
    return classify(monodromy(ScalarCoefficient::constant(T, c), 512)).cls;
  };
  CHECK(verdict(1.0, 1.0) == StabilityClass::Stable);     // 2cos(1) ~ 1.08
  CHECK(verdict(-1.0, 1.0) == StabilityClass::Unstable);  // 2cosh(1) ~ 3.09
  CHECK(verdict(4 * kPi * kPi, 1.0) == StabilityClass::Boundary);
  CHECK_THROWS_AS(classify(monodromy(ScalarCoefficient::constant(1.0, 1.0), 256), 0.0),
                  InputError);
}

TEST_CASE("scalar consistency against the closed-form rule") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> uc(-5.0, 50.0);
  const double T = 1.3;
  for (int i = 0; i < 100; ++i) {
    double c = uc(rng);
    double delta = c >= 0 ? 2.0 * std::cos(std::sqrt(c) * T) : 2.0 * std::cosh(std::sqrt(-c) * T);
    if (std::abs(std::abs(delta) - 2.0) < 1e-4) continue; // skip boundary-grazing draws
    auto v = classify(monodromy(ScalarCoefficient::constant(T, c), 512));
    CHECK(v.cls == (std::abs(delta) < 2.0 ? StabilityClass::Stable : StabilityClass::Unstable));
  }
}

TEST_CASE("determinant and reciprocity invariants") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int trial = 0; trial < 6; ++trial) {
    double T = 1.0 + trial * 0.4;
    auto a = ScalarCoefficient::fourier(
        T, uni(rng), {{uni(rng), uni(rng)}, {0.5 * uni(rng), 0.5 * uni(rng)}});
    auto m = monodromy(a, 4096);
    CHECK(std::abs(m.matrix.determinant() - 1.0) < 1e-8);
    for (auto mu : m.multipliers) {
      double best = 1e9;
      for (auto nu : m.multipliers) best = std::min(best, std::abs(mu * nu - 1.0));
      CHECK(best < 1e-7);
    }
  }
  // 2x2 system: det(M) = 1 and reciprocal multiplier pairing
  auto z = ScalarCoefficient::constant(kPi, 0.0);
  auto p11 = ScalarCoefficient::fourier(kPi, 0.4, {{0.1, 0.0}});
  auto p22 = ScalarCoefficient::fourier(kPi, 0.7, {{0.0, 0.2}});
  auto p12 = ScalarCoefficient::constant(kPi, 0.15);
  MatrixCoefficient P(2, {p11, p12, z, p22});
  auto m = monodromy(P, 2048);
  CHECK(std::abs(m.matrix.determinant() - 1.0) < 1e-8);
  for (auto mu : m.multipliers) {
    double best = 1e9;
    for (auto nu : m.multipliers) best = std::min(best, std::abs(mu * nu - 1.0));
    CHECK(best < 1e-7);
  }
}

TEST_CASE("fourth-order convergence") {
  auto a = ScalarCoefficient::fourier(2 * kPi, 0.3, {{0.8, 0.3}});
  auto ref = monodromy(a, 8192).matrix;
  double e1 = (monodromy(a, 128).matrix - ref).cwiseAbs().maxCoeff();
  double e2 = (monodromy(a, 256).matrix - ref).cwiseAbs().maxCoeff();
  double order = std::log2(e1 / e2);
  CHECK(order > 3.5);
  CHECK(order < 4.5);
}

TEST_CASE("piecewise coefficients: steps aligned to breakpoints") {
  // Meissner-type square wave has an exact product-of-exponentials monodromy.
  double T = 2.0, c1 = 4.0, c2 = 1.0;
  auto a = ScalarCoefficient::piecewise(T, {0.0, 1.0, 2.0}, {c1, c2});
  auto m = monodromy(a, 512);
  auto block = [](double c, double len) {
    Eigen::Matrix2d M;
    double w = std::sqrt(std::abs(c));
    if (c > 0) {
      M << std::cos(w * len), std::sin(w * len) / w, -w * std::sin(w * len),
          std::cos(w * len);
    } else {
      M << std::cosh(w * len), std::sinh(w * len) / w, w * std::sinh(w * len),
          std::cosh(w * len);
    }
    return M;
  };
  Eigen::Matrix2d exact = block(c2, 1.0) * block(c1, 1.0);
  CHECK((m.matrix - exact).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("sweep") {
  const double T = 1.0;
  CoeffTemplate tmpl = [T](double alpha, double beta) {
    return ScalarCoefficient::fourier(T, alpha, {{beta, 0.0}});
  };
  SUBCASE("beta = 0 row matches the constant-coefficient rule") {
    std::vector<double> alphas;
    for (int i = 0; i <= 8; ++i) alphas.push_back(0.5 * i);
    auto res = sweep(tmpl, alphas, {0.0}, 256);
    for (size_t ia = 0; ia < alphas.size(); ++ia) {
      const auto& cell = res.at(ia, 0);
      REQUIRE(cell.error.empty());
      double alpha = alphas[ia];
      bool expect_stable = alpha > 0 &&
                           std::abs(std::cos(std::sqrt(alpha) * T)) < 1.0 - 1e-9;
      CHECK((cell.verdict->cls == StabilityClass::Stable) == expect_stable);
    }
  }
  SUBCASE("single cell equals monodromy + classify") {
    auto res = sweep(tmpl, {0.2}, {1.0}, 256);
    auto direct = classify(monodromy(tmpl(0.2, 1.0), 256));
    CHECK(res.at(0, 0).verdict->cls == direct.cls);
    CHECK(res.at(0, 0).discriminant ==
          doctest::Approx(monodromy(tmpl(0.2, 1.0), 256).discriminant));
  }
  SUBCASE("threaded sweep is bit-identical to sequential") {
    std::vector<double> alphas{0.1, 0.7, 1.9}, betas{0.0, 0.4, 1.1, 2.0};
    auto seq = sweep(tmpl, alphas, betas, 128, 1);
    auto par = sweep(tmpl, alphas, betas, 128, 4);
    for (size_t i = 0; i < seq.cells.size(); ++i) {
      REQUIRE(seq.cells[i].error.empty());
      CHECK(seq.cells[i].discriminant == par.cells[i].discriminant);
      CHECK(seq.cells[i].verdict->cls == par.cells[i].verdict->cls);
    }
  }
  SUBCASE("per-cell errors do not abort the sweep") {
    CoeffTemplate bad = [T](double alpha, double beta) {
      if (alpha > 0.5) return ScalarCoefficient::constant(T, std::nan(""));
      return ScalarCoefficient::fourier(T, alpha, {{beta, 0.0}});
    };
    auto res = sweep(bad, {0.0, 1.0}, {0.0}, 128);
    CHECK(res.at(0, 0).error.empty());
    CHECK(!res.at(1, 0).error.empty());
  }
}
