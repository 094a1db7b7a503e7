#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "lyap/coeffs.hpp"
#include "lyap/common.hpp"

using namespace lyap;

namespace {
const double kInf = std::numeric_limits<double>::infinity();

ScalarCoefficient sine_coeff(double T) {
  return ScalarCoefficient::fourier(T, 0.0, {{0.0, 1.0}});
}
} // namespace

TEST_CASE("eval across representations") {
  auto f = ScalarCoefficient::fourier(2 * kPi, 1.0, {{0.5, 0.0}});
  CHECK(f.eval(0.0) == doctest::Approx(1.5).epsilon(1e-14));

  auto pw = ScalarCoefficient::piecewise(2.0, {0.0, 1.0, 2.0}, {3.0, -1.0});
  CHECK(pw.eval(2.5) == doctest::Approx(3.0));
  CHECK(pw.eval(0.999) == doctest::Approx(3.0));
  CHECK(pw.eval(1.0) == doctest::Approx(-1.0));

  auto sg = ScalarCoefficient::samples(1.0, {0.0, 2.0});
  CHECK(sg.eval(0.25) == doctest::Approx(1.0));
  CHECK(sg.eval(0.75) == doctest::Approx(1.0)); // back down toward v_2 = v_0
}

TEST_CASE("periodicity of the extension") {
  std::mt19937 rng(7);
  std::vector<ScalarCoefficient> cs = {
      ScalarCoefficient::constant(1.7, -0.4),
      ScalarCoefficient::fourier(2.3, 0.2, {{1.0, -0.5}, {0.0, 0.25}}),
      ScalarCoefficient::piecewise(2.0, {0.0, 0.5, 1.2, 2.0}, {1.0, -2.0, 0.5}),
      ScalarCoefficient::samples(1.1, {0.0, 1.0, -1.0, 0.5}),
  };
  for (const auto& c : cs) {
    std::uniform_real_distribution<double> uni(-3.0 * c.period(), 3.0 * c.period());
    for (int i = 0; i < 100; ++i) {
      double t = uni(rng);
      CHECK(c.eval(t) == doctest::Approx(c.eval(t + c.period())).epsilon(1e-10));
    }
  }
}

TEST_CASE("lp norms") {
  auto c2 = ScalarCoefficient::constant(1.0, 2.0);
  CHECK(lp_norm(c2, 1.0, true) == doctest::Approx(2.0));

  auto s = sine_coeff(2 * kPi);
  CHECK(lp_norm(s, kInf, true) == doctest::Approx(1.0).epsilon(1e-10));
  // analytic integral of sin over its positive half-period
  CHECK(lp_norm(s, 1.0, true) == doctest::Approx(2.0).epsilon(1e-10));
  // |sin| over the full period
  CHECK(lp_norm(s, 1.0, false) == doctest::Approx(4.0).epsilon(1e-10));

  CHECK_THROWS_AS(lp_norm(s, 0.5, true), InputError);

  auto pw = ScalarCoefficient::piecewise(2.0, {0.0, 1.0, 2.0}, {3.0, -1.0});
  CHECK(lp_norm(pw, 2.0, false) == doctest::Approx(std::sqrt(10.0)));
  CHECK(lp_norm(pw, 2.0, true) == doctest::Approx(3.0));
  CHECK(lp_norm(pw, kInf, false) == doctest::Approx(3.0));
}

TEST_CASE("restricted-interval norms") {
  auto pw = ScalarCoefficient::piecewise(2.0, {0.0, 1.0, 2.0}, {3.0, -1.0});
  CHECK(lp_norm_on(pw, kInf, true, 1.0, 2.0) == doctest::Approx(0.0));
  CHECK(lp_norm_on(pw, kInf, true, 0.0, 1.0) == doctest::Approx(3.0));
  CHECK(lp_norm_on(pw, 1.0, false, 0.5, 1.5) == doctest::Approx(2.0));
}

TEST_CASE("norm monotonicity: positive part <= absolute") {
  std::vector<ScalarCoefficient> cs = {
      sine_coeff(1.0),
      ScalarCoefficient::piecewise(1.0, {0.0, 0.3, 1.0}, {-2.0, 1.5}),
      ScalarCoefficient::samples(2.0, {1.0, -3.0, 0.5, 2.0}),
  };
  for (const auto& c : cs)
    for (double p : {1.0, 2.0, 3.5, kInf})
      CHECK(lp_norm(c, p, true) <= lp_norm(c, p, false) + 1e-12);
}

TEST_CASE("Holder consistency: T^(-1/p) ||a||_p nondecreasing in p") {
  auto c = ScalarCoefficient::fourier(2.0, 0.3, {{1.0, 0.2}});
  const double T = c.period();
  double prev = 0.0;
  for (double p : {1.0, 1.5, 2.0, 3.0, 6.0, 12.0}) {
    double v = std::pow(T, -1.0 / p) * lp_norm(c, p, false);
    CHECK(v >= prev - 1e-9);
    prev = v;
  }
  CHECK(lp_norm(c, kInf, false) >= prev - 1e-9);
}

TEST_CASE("check_prec verdicts") {
  CHECK(check_prec(ScalarCoefficient::constant(1.0, 5.0), 4.0).result == PrecResult::Holds);
  CHECK(check_prec(ScalarCoefficient::constant(1.0, 4.0), 4.0).result ==
        PrecResult::NowhereStrict);
  auto f = ScalarCoefficient::fourier(1.0, 4.0, {{1.0, 0.0}});
  CHECK(check_prec(f, 4.0).result == PrecResult::FailsSomewhere);
  CHECK_THROWS_AS(check_prec(f, 0.0, 8), InputError);
}

TEST_CASE("mean") {
  CHECK(mean(ScalarCoefficient::constant(3.0, 2.0)) == doctest::Approx(6.0));
  CHECK(mean(ScalarCoefficient::fourier(2 * kPi, 0.0, {{1.0, 0.0}})) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(mean(ScalarCoefficient::piecewise(2.0, {0.0, 1.0, 2.0}, {3.0, -1.0})) ==
        doctest::Approx(2.0));
}

TEST_CASE("matrix coefficient symmetry and shared period") {
  auto z = ScalarCoefficient::constant(1.0, 0.0);
  auto a = ScalarCoefficient::constant(1.0, 2.0);
  auto b = ScalarCoefficient::constant(1.0, 0.3);
  auto c = ScalarCoefficient::constant(1.0, -1.0);
  MatrixCoefficient M(2, {a, b, z, c}); // lower triangle mirrored from upper
  CHECK(M.entry(1, 0).eval(0.0) == doctest::Approx(0.3));
  auto vals = M.eval_all(0.4);
  CHECK(vals[1] == doctest::Approx(vals[2]));
  CHECK_THROWS_AS(MatrixCoefficient(2, {a, b, z}), InputError);

  auto diag = MatrixCoefficient::diagonal({a, c});
  CHECK(diag.entry(0, 1).eval(0.2) == doctest::Approx(0.0));
}

TEST_CASE("grid invariants") {
  auto g = Grid2D::square(1.0, 16);
  CHECK(g.node_count() == 17 * 17);
  auto w = g.weights();
  double area = 0;
  for (double v : w) area += v;
  CHECK(area == doctest::Approx(1.0).epsilon(1e-12));

  auto d = Grid2D::disc(1.0, 16, 32);
  auto wd = d.weights();
  double darea = 0;
  for (double v : wd) darea += v;
  CHECK(darea == doctest::Approx(kPi).epsilon(1e-12));

  auto field = SpatialCoefficient2D::sample(g, [](double x, double y) { return x + y; });
  CHECK(field.integral() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(SpatialCoefficient2D(g, std::vector<double>(5, 1.0)), InputError);
}
