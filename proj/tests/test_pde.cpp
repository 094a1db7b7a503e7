#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lyap/common.hpp"
#include "lyap/pde.hpp"

using namespace lyap;

namespace {

// First positive root of J1' (Bessel), for the disc eigenvalue oracle.
double bessel_j1p_root() {
  auto j1p = [](double x) {
    return 0.5 * (std::cyl_bessel_j(0, x) - std::cyl_bessel_j(2, x));
  };
  double lo = 1.5, hi = 2.2, flo = j1p(lo);
  for (int i = 0; i < 80; ++i) {
    double mid = 0.5 * (lo + hi);
    if ((j1p(mid) > 0) == (flo > 0)) {
      lo = mid;
      flo = j1p(mid);
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("neumann lambda1") {
  SUBCASE("rectangle 1 x 2") {
    double lam = neumann_lambda1(Grid2D::rectangle(1.0, 2.0, 64, 128));
    CHECK(std::abs(lam - sqr(kPi) / 4.0) / (sqr(kPi) / 4.0) < 0.005);
  }
  SUBCASE("unit square") {
    double lam = neumann_lambda1(Grid2D::square(1.0, 64));
    CHECK(std::abs(lam - sqr(kPi)) / sqr(kPi) < 0.005);
  }
  SUBCASE("unit disc vs Bessel-root oracle") {
    double expected = sqr(bessel_j1p_root()); // ~ 3.390
    CHECK(expected == doctest::Approx(3.39).epsilon(2e-3));
    double lam = neumann_lambda1(Grid2D::disc(1.0, 64, 128));
    CHECK(std::abs(lam - expected) / expected < 0.01);
  }
  SUBCASE("interval") {
    double lam = neumann_lambda1_interval(1.0, 256);
    CHECK(std::abs(lam - sqr(kPi)) / sqr(kPi) < 1e-4);
  }
}

TEST_CASE("second-order eigenvalue convergence on the square") {
  double e1 = std::abs(neumann_lambda1(Grid2D::square(1.0, 16)) - sqr(kPi));
  double e2 = std::abs(neumann_lambda1(Grid2D::square(1.0, 32)) - sqr(kPi));
  double order = std::log2(e1 / e2);
  CHECK(order > 1.7);
  CHECK(order < 2.3);
}

TEST_CASE("kernel of the Neumann operator is exactly the constants") {
  auto g = Grid2D::square(1.0, 32);
  auto zero = SpatialCoefficient2D::constant(g, 0.0);
  auto det = detect_nontrivial(zero);
  CHECK(det.verdict == NontrivialVerdict::Nontrivial); // constants
  CHECK(det.sigma_min <= 1e-12 * det.scale);
}

TEST_CASE("detect_nontrivial three-way verdict") {
  auto g = Grid2D::square(1.0, 64);
  double lam = neumann_lambda1(g);
  SUBCASE("eigenvalue coefficient -> nontrivial") {
    auto a = SpatialCoefficient2D::constant(g, lam);
    CHECK(detect_nontrivial(a).verdict == NontrivialVerdict::Nontrivial);
  }
  SUBCASE("half the gap -> only trivial") {
    auto a = SpatialCoefficient2D::constant(g, 0.5 * lam);
    CHECK(detect_nontrivial(a).verdict == NontrivialVerdict::OnlyTrivial);
  }
  SUBCASE("verdict flips once per crossing on a c-grid") {
    int clusters = 0;
    bool inside = false;
    for (int i = 0; i <= 40; ++i) {
      double c = lam * (0.5 + i * 0.025); // sweep [0.5, 1.5] lambda1
      auto det = detect_nontrivial(SpatialCoefficient2D::constant(g, c));
      bool hit = det.verdict != NontrivialVerdict::OnlyTrivial;
      if (hit && !inside) ++clusters;
      inside = hit;
    }
    CHECK(clusters == 1);
  }
}

TEST_CASE("solve_linear_neumann") {
  auto g = Grid2D::square(1.0, 48);
  auto op = NeumannOperator::on_grid(g);
  const int N = op.nodes();
  SUBCASE("constants: Lap u - u = 1 gives u = -1") {
    Eigen::VectorXd a = Eigen::VectorXd::Constant(N, -1.0);
    Eigen::VectorXd rhs = Eigen::VectorXd::Constant(N, 1.0);
    Eigen::VectorXd u = solve_linear_neumann(op, a, rhs);
    CHECK((u.array() + 1.0).abs().maxCoeff() < 1e-9);
  }
  SUBCASE("eigenfunction forcing") {
    // cos(pi x) is an exact eigenvector of the discrete operator with
    // eigenvalue 2(1 - cos(pi h))/h^2.
    const double h = g.h();
    const double lam = 2.0 * (1.0 - std::cos(kPi * h)) / (h * h);
    Eigen::VectorXd phi(N);
    for (int i = 0; i < N; ++i) phi[i] = std::cos(kPi * g.node(i).first);
    Eigen::VectorXd a = Eigen::VectorXd::Constant(N, 0.5 * lam);
    Eigen::VectorXd u = solve_linear_neumann(op, a, phi);
    Eigen::VectorXd expect = -2.0 / lam * phi;
    CHECK((u - expect).cwiseAbs().maxCoeff() < 1e-8 * expect.cwiseAbs().maxCoeff() + 1e-10);
  }
  SUBCASE("random coefficient below the spectral gap: residual check") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> uni(0.0, 0.4 * sqr(kPi));
    Eigen::VectorXd a(N), rhs(N);
    for (int i = 0; i < N; ++i) {
      a[i] = uni(rng);
      rhs[i] = uni(rng) - 1.0;
    }
    Eigen::VectorXd u = solve_linear_neumann(op, a, rhs);
    Eigen::VectorXd res = -op.neg_laplacian(u) + a.cwiseProduct(u) - rhs;
    CHECK(res.norm() <= 1e-9 * std::max(1.0, rhs.norm()));
  }
  SUBCASE("near-singular coefficient with resonant forcing rejected") {
    const double h = g.h();
    const double lam = 2.0 * (1.0 - std::cos(kPi * h)) / (h * h);
    Eigen::VectorXd phi(N);
    for (int i = 0; i < N; ++i) phi[i] = std::cos(kPi * g.node(i).first);
    Eigen::VectorXd a = Eigen::VectorXd::Constant(N, lam);
    CHECK_THROWS_AS(solve_linear_neumann(op, a, phi), NumericalError);
  }
}

TEST_CASE("mean nonnegativity counterexample") {
  auto g = Grid2D::square(1.0, 64);
  auto u0 = SpatialCoefficient2D::sample(
      g, [](double x, double) { return std::cos(kPi * x); });
  SUBCASE("negative mean, vanishing norms, exact construction") {
    std::vector<double> prev_norms;
    for (double n : {2.0, 4.0, 8.0, 16.0}) {
      auto out = mean_nonnegativity_counterexample(u0, n, {1.0, 2.0});
      CHECK(out.mean < 0.0);
      CHECK(out.residual < 1e-12);
      if (!prev_norms.empty())
        for (size_t i = 0; i < out.norms.size(); ++i)
          CHECK(out.norms[i].second < prev_norms[i]);
      prev_norms.clear();
      for (auto& [p, v] : out.norms) prev_norms.push_back(v);
    }
  }
  SUBCASE("n too small rejected") {
    CHECK_THROWS_AS(mean_nonnegativity_counterexample(u0, 0.5, {2.0}), InputError);
  }
}

TEST_CASE("system detector") {
  auto g = Grid2D::square(1.0, 48);
  auto op = NeumannOperator::on_grid(g);
  double lam = neumann_eigenpair(op).value;
  SUBCASE("decoupled below the gap: only trivial") {
    auto f1 = SpatialCoefficient2D::constant(g, 0.4 * lam);
    auto f2 = SpatialCoefficient2D::constant(g, 0.7 * lam);
    auto A = MatrixField::diagonal({f1, f2});
    CHECK(detect_nontrivial_system(op, A).verdict == NontrivialVerdict::OnlyTrivial);
  }
  SUBCASE("one component resonant: nontrivial") {
    auto f1 = SpatialCoefficient2D::constant(g, lam);
    auto f2 = SpatialCoefficient2D::constant(g, 0.5 * lam);
    auto A = MatrixField::diagonal({f1, f2});
    CHECK(detect_nontrivial_system(op, A).verdict == NontrivialVerdict::Nontrivial);
  }
}
