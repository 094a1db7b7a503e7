#include "lyap/selftest.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "lyap/common.hpp"
#include "lyap/constants.hpp"
#include "lyap/pde.hpp"
#include "lyap/quadrature.hpp"
#include "lyap/resonant.hpp"
#include "lyap/varmin.hpp"

namespace lyap {

namespace {

const double kInf = std::numeric_limits<double>::infinity();

struct Checker {
  bool ok = true;
  std::ostringstream detail;
  int checks = 0;

  void expect(bool cond, const std::string& what) {
    ++checks;
    if (!cond) {
      ok = false;
      if (detail.tellp() > 0) detail << "; ";
      detail << what;
    }
  }
  void note(const std::string& s) {
    if (detail.tellp() > 0) detail << "; ";
    detail << s;
  }
};

// ---- criterion 1: closed-form constants ----
void criterion_constants(Checker& c) {
  auto near = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
  c.expect(near(gamma1n_periodic(kPi, 1).value, 4 * kPi + 16.0), "gamma_{1,1}(pi)");
  c.expect(near(gamma1n_antiperiodic(kPi, 1).value, kPi + 6.0 * std::sqrt(3.0)),
           "gamma~_{1,1}(pi)");
  for (double T : {0.5, 1.0, 2.0, kPi}) {
    c.expect(near(gamma1n_periodic(T, 0).value, 16.0 / T), "gamma_{1,0}");
    c.expect(near(gamma1n_antiperiodic(T, 0).value, 4.0 / T), "gamma~_{1,0}");
  }
}

// ---- criterion 2: M_p reproduction by direct minimization ----
void criterion_mp(Checker& c) {
  const double T = 1.0;
  for (double p : {1.5, 2.0, 4.0, 10.0}) {
    double target = mp_antiperiodic(T, p).value;
    auto r = minimize_antiperiodic_quotient(p, T, 512);
    double rel = std::abs(r.value - target) / target;
    std::ostringstream os;
    os << "p=" << p << " rel " << rel;
    c.expect(rel < 0.01, os.str());
  }
  c.expect(std::abs(mp_antiperiodic(T, 1.001).value - 4.0 / T) / (4.0 / T) < 0.01,
           "p->1+ limit");
  c.expect(std::abs(mp_antiperiodic(T, 1000.0).value - sqr(kPi / T)) / sqr(kPi / T) < 0.01,
           "p->inf limit");
}

std::vector<ScalarCoefficient> seeded_corpus(int count, double T, unsigned seed,
                                             double base_lo, double base_hi) {
  std::vector<ScalarCoefficient> out;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::uniform_real_distribution<double> ubase(base_lo, base_hi);
  for (int i = 0; i < count; ++i) {
    double base = ubase(rng);
    switch (i % 3) {
      case 0:
        out.push_back(ScalarCoefficient::fourier(
            T, base, {{uni(rng), uni(rng)}, {0.4 * uni(rng), 0.4 * uni(rng)}}));
        break;
      case 1: {
        double b1 = 0.3 + 0.3 * std::abs(uni(rng));
        out.push_back(ScalarCoefficient::piecewise(
            T, {0.0, b1 * T, T}, {base + uni(rng), base + uni(rng)}));
        break;
      }
      default: {
        std::vector<double> vals;
        for (int k = 0; k < 8; ++k) vals.push_back(base + uni(rng));
        out.push_back(ScalarCoefficient::samples(T, vals));
        break;
      }
    }
  }
  return out;
}

// ---- criterion 3: spectral ground truth ----
void criterion_spectra(Checker& c) {
  const double T = 1.0;
  auto zero = ScalarCoefficient::constant(T, 0.0);
  auto per = scalar_eigenvalues(zero, BoundaryCondition::Periodic, 6, 4096);
  auto ant = scalar_eigenvalues(zero, BoundaryCondition::Antiperiodic, 6, 4096);
  std::vector<double> pexp{0.0, sqr(2 * kPi), sqr(2 * kPi), sqr(4 * kPi), sqr(4 * kPi),
                           sqr(6 * kPi)};
  std::vector<double> aexp{sqr(kPi),     sqr(kPi),     sqr(3 * kPi),
                           sqr(3 * kPi), sqr(5 * kPi), sqr(5 * kPi)};
  for (int i = 0; i < 6; ++i) {
    c.expect(std::abs(per.value(i) - pexp[(size_t)i]) <=
                 1e-8 * std::max(1.0, pexp[(size_t)i]),
             "free periodic eigenvalue " + std::to_string(i));
    c.expect(std::abs(ant.value(i + 1) - aexp[(size_t)i]) <=
                 1e-8 * std::max(1.0, aexp[(size_t)i]),
             "free antiperiodic eigenvalue " + std::to_string(i + 1));
  }
  // discriminant vs discretized on 20 seeded coefficients
  auto corpus = seeded_corpus(20, T, 101, -1.0, 2.0);
  for (size_t k = 0; k < corpus.size(); ++k) {
    for (auto bc : {BoundaryCondition::Periodic, BoundaryCondition::Antiperiodic}) {
      auto d = scalar_eigenvalues(corpus[k], bc, 6, 4096);
      auto f = discretized_scalar_eigenvalues(corpus[k], bc, 1024, 6);
      int base = d.first_index();
      for (int i = 0; i < 6; ++i) {
        double scale = std::max(1.0, std::abs(d.value(base + i)));
        std::ostringstream os;
        os << "cross-method coefficient " << k << " index " << base + i;
        c.expect(std::abs(d.value(base + i) - f.value(base + i)) / scale < 1e-3,
                 os.str());
      }
    }
  }
}

// ---- criterion 4: interlacing over the corpus ----
void criterion_interlacing(Checker& c) {
  auto corpus = seeded_corpus(50, 1.0, 202, -2.0, 3.0);
  auto more = seeded_corpus(10, 2.0, 203, -1.0, 1.5);
  corpus.insert(corpus.end(), more.begin(), more.end());
  int violations = 0;
  for (const auto& a : corpus) {
    auto rep = verify_interlacing(a, 2, 2048);
    if (!rep.holds) {
      ++violations;
      c.note(rep.violation);
    }
  }
  std::ostringstream os;
  os << corpus.size() << " coefficients, " << violations << " violations";
  c.note(os.str());
  c.expect(violations == 0, "interlacing violated");
}

// ---- criterion 5: certificate soundness corpus ----
void criterion_soundness(Checker& c) {
  CertifyOptions opt;
  opt.oracle_steps = 2048;
  opt.oracle_mesh = 128;
  int certified = 0, disagreed = 0;
  auto tally = [&](const CertificateReport& rep, const char* who) {
    if (!rep.certified) return;
    ++certified;
    if (!rep.oracle_agrees) {
      ++disagreed;
      c.note(std::string(who) + " oracle disagreement: " + rep.oracle_crosscheck);
    }
  };

  {
    std::mt19937 rng(301);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int i = 0; i < 40; ++i) {
      double T = (i % 2) ? 1.0 : 2.0;
      double mean_frac = 0.2 + 0.7 * std::abs(uni(rng));
      double c0 = mean_frac * 4.0 / (T * T);
      double amp = 0.8 * c0 * std::abs(uni(rng));
      auto a = ScalarCoefficient::fourier(T, c0, {{amp * uni(rng), amp * uni(rng)}});
      tally(classical_lyapunov_check(a, opt), "classical");
    }
  }
  {
    std::mt19937 rng(302);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < 30; ++i) {
      int n = 1 + (i % 2);
      double T = (i % 3 == 0) ? 1.0 : kPi;
      double lam = sqr(2.0 * n * kPi / T);
      double H = gamma1n_periodic(T, n).value / T - lam;
      double delta = (0.15 + 0.7 * uni(rng)) * H;
      double amp = 0.45 * delta;
      auto a = ScalarCoefficient::fourier(
          T, lam + delta, {{amp * (2 * uni(rng) - 1), amp * (2 * uni(rng) - 1)}});
      tally(certify_periodic_zone(a, n, opt), "periodic-zone");
    }
    for (int i = 0; i < 30; ++i) {
      int n = 1 + (i % 2);
      double T = (i % 3 == 0) ? 2.0 : kPi;
      double lam = sqr((2.0 * n - 1) * kPi / T);
      double H = gamma1n_antiperiodic(T, n).value / T - lam;
      double delta = (0.15 + 0.7 * uni(rng)) * H;
      double amp = 0.45 * delta;
      auto a = ScalarCoefficient::fourier(
          T, lam + delta, {{amp * (2 * uni(rng) - 1), amp * (2 * uni(rng) - 1)}});
      tally(certify_antiperiodic_zone(a, n, opt), "antiperiodic-zone");
    }
  }
  {
    std::mt19937 rng(303);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    int got = 0;
    for (int i = 0; i < 120 && got < 40; ++i) {
      int p = 1 + (i % 3);
      double k = sqr((double)p) + uni(rng) * (2.0 * p + 1.0);
      double bound = hill_stability_bound(std::min(k, sqr((double)p + 1)), p);
      double headroom = bound / kPi - k;
      double delta = 0.6 * uni(rng) * headroom;
      double amp = 0.8 * delta;
      auto a = ScalarCoefficient::fourier(
          kPi, k + delta, {{amp * (2 * uni(rng) - 1), amp * (2 * uni(rng) - 1)}});
      auto rep = certify_hill_stability(a, opt);
      if (rep.certified) ++got;
      tally(rep, "hill");
    }
  }
  {
    std::mt19937 rng(304);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double T = kPi;
    int got = 0;
    for (int i = 0; i < 80 && got < 25; ++i) {
      double c1 = 0.15 + 0.5 * uni(rng), c2 = 0.15 + 0.5 * uni(rng);
      double a1 = 0.25 * c1 * uni(rng), a2 = 0.25 * c2 * uni(rng);
      double eps = 0.08 * std::min(c1, c2) * uni(rng);
      auto p11 = ScalarCoefficient::fourier(T, c1, {{a1, 0.0}});
      auto p22 = ScalarCoefficient::fourier(T, c2, {{0.0, a2}});
      auto p12 = ScalarCoefficient::constant(T, eps);
      auto z = ScalarCoefficient::constant(T, 0.0);
      MatrixCoefficient P(2, {p11, p12, z, p22});
      auto b11 = ScalarCoefficient::fourier(T, c1 + eps, {{a1, 0.0}});
      auto b22 = ScalarCoefficient::fourier(T, c2 + eps, {{0.0, a2}});
      MatrixCoefficient B = MatrixCoefficient::diagonal({b11, b22});
      double p_first = (i % 2) ? kInf : 4.0;
      auto rep = certify_krein_system(P, B, {p_first, kInf}, opt);
      if (rep.certified) ++got;
      tally(rep, "krein");
    }
  }
  {
    std::mt19937 rng(305);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double T = kPi;
    int got = 0;
    for (int i = 0; i < 80 && got < 25; ++i) {
      double c1 = 0.1 + 0.4 * uni(rng), c2 = 0.1 + 0.4 * uni(rng);
      double a1 = 0.3 * c1 * uni(rng);
      double eps = 0.5 * std::sqrt((c1 - a1) * c2) * uni(rng);
      auto p11 = ScalarCoefficient::fourier(T, c1, {{a1, 0.0}});
      auto p22 = ScalarCoefficient::constant(T, c2);
      auto p12 = ScalarCoefficient::constant(T, eps);
      auto z = ScalarCoefficient::constant(T, 0.0);
      MatrixCoefficient P(2, {p11, p12, z, p22});
      double p2 = (i % 2) ? kInf : 6.0;
      auto rep = certify_2x2_coupling(P, kInf, p2, opt);
      if (rep.certified) ++got;
      tally(rep, "coupling2x2");
    }
  }
  {
    std::mt19937 rng(306);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    auto grid = Grid2D::square(1.0, 48);
    double lam1 = neumann_lambda1(grid);
    double beta3 = minimize_neumann_grid(3.0, grid).value;
    int got = 0;
    for (int i = 0; i < 40 && got < 15; ++i) {
      bool use_p3 = (i % 3 == 0);
      double beta = use_p3 ? beta3 : lam1;
      double c1 = (0.15 + 0.45 * uni(rng)) * lam1;
      double c2 = (0.15 + 0.45 * uni(rng)) * lam1;
      double w1 = 0.3 * uni(rng), w2 = 0.3 * uni(rng);
      double eps = 0.2 * std::sqrt(c1 * c2) * uni(rng);
      MatrixField A(grid, 2), B(grid, 2);
      double gamma = 0.3 * lam1;
      for (int node = 0; node < grid.node_count(); ++node) {
        auto [x, y] = grid.node(node);
        double a11 = c1 * (1.0 + w1 * std::cos(kPi * x));
        double a22 = c2 * (1.0 + w2 * std::cos(kPi * y));
        A.at(node, 0, 0) = a11;
        A.at(node, 1, 1) = a22;
        A.at(node, 0, 1) = A.at(node, 1, 0) = eps;
        B.at(node, 0, 0) = a11 + gamma;
        B.at(node, 1, 1) = a22 + eps * eps / gamma;
      }
      std::vector<double> ps{use_p3 ? 3.0 : kInf, kInf};
      std::vector<double> betas{beta, lam1};
      auto rep = certify_elliptic_system(A, B, ps, betas, opt);
      if (rep.certified) ++got;
      tally(rep, "elliptic");
    }
  }
  {
    std::mt19937 rng(307);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double T = 1.0;
    for (int i = 0; i < 30; ++i) {
      double t0 = 0.25 + 0.5 * uni(rng);
      double v1 = (0.2 + 0.6 * uni(rng)) * sqr(kPi) / (4 * sqr(t0));
      double v2 = (0.2 + 0.6 * uni(rng)) * sqr(kPi) / (4 * sqr(T - t0));
      auto a = ScalarCoefficient::piecewise(T, {0.0, t0, T}, {v1, v2});
      tally(two_step_disfocality(a, t0, opt), "two-step");
    }
  }

  std::ostringstream os;
  os << certified << " certified, " << disagreed << " oracle disagreements";
  c.note(os.str());
  c.expect(certified >= 200, "need >= 200 certified instances");
  c.expect(disagreed == 0, "oracle must agree on every certified instance");
}

// ---- criterion 6: Mathieu sweep geometry ----
void criterion_sweep(Checker& c) {
  const double T = 2 * kPi;
  CoeffTemplate tmpl = [T](double alpha, double beta) {
    return ScalarCoefficient::fourier(T, alpha, {{beta, 0.0}});
  };
  std::vector<double> alphas, betas;
  for (int i = 0; i < 64; ++i) alphas.push_back(4.0 * i / 63.0);
  for (int i = 0; i < 64; ++i) betas.push_back(2.0 * i / 63.0);
  auto res = sweep(tmpl, alphas, betas, 512, 4);

  CertifyOptions opt;
  opt.run_oracle = false;
  // A cell counts as stability-certified when 0 is pinned inside a stability
  // zone: the classical test; the period-pi cotangent certificate applied to
  // the time-rescaled coefficient b(s) = 4 a(2s); or a periodic-zone
  // certificate combined with an antiperiodic one
  // (lambda_{2n} < 0 < ~lambda_{2n+1}, or ~lambda_{2n+2} < 0 < lambda_{2n+1}).
  // A single zone certificate only signs eigenvalues of one boundary
  // condition and is not a stability claim.
  int certified_cells = 0, exceptions = 0;
  for (size_t ia = 0; ia < alphas.size(); ++ia) {
    for (size_t ib = 0; ib < betas.size(); ++ib) {
      auto a = tmpl(alphas[ia], betas[ib]);
      bool certified = classical_lyapunov_check(a, opt).certified;
      if (!certified) {
        auto rescaled = ScalarCoefficient::fourier(kPi, 4.0 * alphas[ia],
                                                   {{4.0 * betas[ib], 0.0}});
        certified = certify_hill_stability(rescaled, opt).certified;
      }
      for (int n = 1; n <= 2 && !certified; ++n) {
        if (!certify_periodic_zone(a, n, opt).certified) continue;
        certified = certify_antiperiodic_zone(a, n, opt).certified ||
                    certify_antiperiodic_zone(a, n + 1, opt).certified;
      }
      if (!certified) continue;
      ++certified_cells;
      const auto& cell = res.at(ia, ib);
      // oracle-stable: all multipliers on the unit circle and semisimple
      // (Boundary with coexistence is the bounded equality case)
      bool oracle_stable =
          cell.error.empty() &&
          (cell.verdict->cls == StabilityClass::Stable ||
           (cell.verdict->cls == StabilityClass::Boundary && cell.verdict->semisimple));
      if (!oracle_stable) ++exceptions;
    }
  }
  std::ostringstream os;
  os << certified_cells << " certified cells, " << exceptions << " not oracle-stable";
  c.note(os.str());
  c.expect(certified_cells > 100, "certified region unexpectedly small");
  c.expect(exceptions == 0, "certified cell not oracle-stable");

  const double da = alphas[1] - alphas[0];
  int bad_roots = 0;
  for (size_t ia = 0; ia < alphas.size(); ++ia) {
    const auto& cell = res.at(ia, 1); // smallest nonzero beta row
    if (cell.error.empty() && cell.verdict->cls == StabilityClass::Unstable) {
      double best = kInf;
      for (int k = 0; k <= 4; ++k) best = std::min(best, std::abs(alphas[ia] - sqr(k / 2.0)));
      if (best > da) ++bad_roots;
    }
  }
  c.expect(bad_roots == 0, "unstable tongue away from (k/2)^2 at small beta");
}

// ---- criterion 7: PDE eigenvalues ----
void criterion_pde(Checker& c) {
  double lam_sq = neumann_lambda1(Grid2D::square(1.0, 128));
  c.expect(std::abs(lam_sq - sqr(kPi)) / sqr(kPi) < 0.005, "unit square lambda1");
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
  double bessel = sqr(0.5 * (lo + hi));
  double lam_disc = neumann_lambda1(Grid2D::disc(1.0, 128, 256));
  c.expect(std::abs(lam_disc - bessel) / bessel < 0.01, "unit disc lambda1 vs Bessel");
}

// ---- criterion 8: beta_p structure ----
void criterion_beta_structure(Checker& c) {
  auto grid = Grid2D::square(1.0, 48);
  double prev = 0.0;
  for (double p : {1.5, 2.0, 3.0, 6.0}) {
    double v = minimize_neumann_grid(p, grid).value;
    std::ostringstream os;
    os << "beta_p not increasing at p=" << p;
    c.expect(v > prev, os.str());
    prev = v;
  }
  c.expect(minimize_neumann_grid(kInf, grid).value > prev, "beta_inf not the largest");

  auto disc = Grid2D::disc(1.0, 1024, 64);
  std::vector<double> masses;
  bool residuals_ok = true, means_ok = true;
  for (int k = 1; k <= 6; ++k) {
    auto fam = beta1_vanishing_family(disc, k);
    masses.push_back(fam.positive_l1);
    residuals_ok = residuals_ok && fam.residual <= 1e-6;
    means_ok = means_ok && fam.mean >= 0.0;
  }
  bool decreasing = true;
  for (size_t i = 0; i + 1 < masses.size(); ++i)
    decreasing = decreasing && masses[i + 1] < masses[i];
  std::ostringstream os;
  os << "family mass ratio " << masses[0] / masses[5];
  c.note(os.str());
  c.expect(decreasing, "vanishing-family masses not decreasing");
  c.expect(masses[0] / masses[5] >= 5.0, "vanishing-family decrease < 5x");
  c.expect(residuals_ok, "construction residual > 1e-6");
  c.expect(means_ok, "family mean negative");

  auto sq = Grid2D::square(1.0, 64);
  auto u0 = SpatialCoefficient2D::sample(sq, [](double x, double) { return std::cos(kPi * x); });
  double prev_inf = kInf;
  bool mean_neg = true, inf_decreasing = true;
  for (double n : {2.0, 4.0, 8.0, 16.0, 32.0}) {
    auto out = mean_nonnegativity_counterexample(u0, n, {kInf});
    mean_neg = mean_neg && out.mean < 0.0;
    inf_decreasing = inf_decreasing && out.norms[0].second < prev_inf;
    prev_inf = out.norms[0].second;
  }
  c.expect(mean_neg, "counterexample mean not negative");
  c.expect(inf_decreasing, "counterexample sup norm not vanishing");
}

// ---- criterion 9: resonant solver ----
void criterion_resonant(Checker& c) {
  Interval1D dom{1.0, 256};
  NonlinearitySpec spec;
  ComponentSpec comp;
  comp.kind = ComponentSpec::Kind::SaturatedBlend;
  comp.b = Field::of1d([](double x) { return 2.0 * (1.0 + 0.5 * std::sin(2 * kPi * x)); });
  comp.s0 = 1.0;
  comp.forcing = Field::of1d([](double x) { return 0.05 * std::cos(kPi * x); });
  spec.components = {comp};
  spec.bound_lower = {Field::of1d(
      [](double x) { return 1.0 * (1.0 + 0.5 * std::sin(2 * kPi * x)); })};
  spec.bound_upper = {Field::of1d(
      [](double x) { return 2.0 * (1.0 + 0.5 * std::sin(2 * kPi * x)); })};
  spec.p_list = {kInf};

  auto sol = solve(spec, dom);
  c.expect(sol.converged, "fixed point did not converge");
  c.expect(sol.residual <= 1e-8, "residual > 1e-8");

  // independent damped-Newton oracle on the same grid
  auto op = NeumannOperator::interval(dom.length, dom.cells);
  const int N = op.nodes();
  Eigen::VectorXd u = Eigen::VectorXd::Zero(N);
  for (int it = 0; it < 100; ++it) {
    Eigen::VectorXd F(N), fu(N);
    for (int k = 0; k < N; ++k) {
      double x = op.coords_1d()[(size_t)k];
      F[k] = comp.f(x, 0.0, u[k]);
      fu[k] = comp.fu(x, 0.0, u[k]);
    }
    Eigen::VectorXd res = -op.neg_laplacian(u) + F;
    if (res.cwiseAbs().maxCoeff() < 1e-12) break;
    Eigen::VectorXd du = solve_linear_neumann(op, fu, -res);
    double lambda = 1.0, r0 = res.cwiseAbs().maxCoeff();
    for (int ls = 0; ls < 30; ++ls) {
      Eigen::VectorXd cand = u + lambda * du;
      Eigen::VectorXd Fc(N);
      for (int k = 0; k < N; ++k) Fc[k] = comp.f(op.coords_1d()[(size_t)k], 0.0, cand[k]);
      if ((-op.neg_laplacian(cand) + Fc).cwiseAbs().maxCoeff() < r0) {
        u = cand;
        break;
      }
      lambda *= 0.5;
    }
  }
  double dist = 0;
  for (int k = 0; k < N; ++k) dist = std::max(dist, std::abs(u[k] - sol.u[0][(size_t)k]));
  std::ostringstream os;
  os << "Newton distance " << dist;
  c.note(os.str());
  c.expect(dist <= 1e-6, "Newton oracle disagreement > 1e-6");

  auto probe = uniqueness_probe(spec, dom, 5);
  c.expect(probe.all_converged, "probe start did not converge");
  c.expect(probe.max_spread <= 1e-7, "probe spread > 1e-7");
}

// ---- criterion 10: numerical hygiene ----
void criterion_hygiene(Checker& c, double total_seconds_so_far) {
  std::mt19937 rng(401);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int i = 0; i < 5; ++i) {
    auto a = ScalarCoefficient::fourier(1.0 + i * 0.5, uni(rng), {{uni(rng), uni(rng)}});
    auto m = monodromy(a, 4096);
    c.expect(std::abs(m.matrix.determinant() - 1.0) < 1e-8, "monodromy determinant");
  }
  auto a = ScalarCoefficient::fourier(2 * kPi, 0.3, {{0.8, 0.3}});
  auto ref = monodromy(a, 8192).matrix;
  double e1 = (monodromy(a, 128).matrix - ref).cwiseAbs().maxCoeff();
  double e2 = (monodromy(a, 256).matrix - ref).cwiseAbs().maxCoeff();
  double order = std::log2(e1 / e2);
  std::ostringstream os;
  os << "measured order " << order;
  c.note(os.str());
  c.expect(order > 3.5 && order < 4.5, "integrator order outside [3.5, 4.5]");

  c.expect(minimize_neumann_1d(2.0, 1.0, 256).constraint_residual <= 1e-10,
           "1D constraint residual");
  c.expect(minimize_neumann_grid(2.0, Grid2D::square(1.0, 32)).constraint_residual <= 1e-10,
           "2D constraint residual");
  c.expect(total_seconds_so_far < 1200.0, "suite exceeded 20 minutes");
}

} // namespace

std::vector<CriterionResult> run_selftest(bool verbose) {
  struct Entry {
    int id;
    const char* name;
    std::function<void(Checker&)> fn;
  };
  double elapsed_total = 0.0;
  std::vector<Entry> entries{
      {1, "closed-form constants", criterion_constants},
      {2, "M_p variational reproduction", criterion_mp},
      {3, "spectral ground truth", criterion_spectra},
      {4, "eigenvalue interlacing corpus", criterion_interlacing},
      {5, "certificate soundness corpus", criterion_soundness},
      {6, "Mathieu sweep geometry", criterion_sweep},
      {7, "Neumann eigenvalues (square, disc)", criterion_pde},
      {8, "beta_p structure and vanishing family", criterion_beta_structure},
      {9, "resonant fixed-point solver", criterion_resonant},
  };
  std::vector<CriterionResult> results;
  auto report = [&](const CriterionResult& r) {
    if (verbose) {
      std::printf("[%s] criterion %2d: %-40s (%.1fs)%s%s\n", r.passed ? "PASS" : "FAIL",
                  r.id, r.name.c_str(), r.seconds, r.detail.empty() ? "" : " - ",
                  r.detail.c_str());
      std::fflush(stdout);
    }
  };
  for (const auto& e : entries) {
    Checker c;
    auto t0 = std::chrono::steady_clock::now();
    try {
      e.fn(c);
    } catch (const std::exception& ex) {
      c.expect(false, std::string("exception: ") + ex.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    elapsed_total += secs;
    results.push_back(CriterionResult{e.id, e.name, c.ok, secs, c.detail.str()});
    report(results.back());
  }
  {
    Checker c;
    auto t0 = std::chrono::steady_clock::now();
    try {
      criterion_hygiene(c, elapsed_total);
    } catch (const std::exception& ex) {
      c.expect(false, std::string("exception: ") + ex.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    results.push_back(CriterionResult{10, "numerical hygiene", c.ok, secs, c.detail.str()});
    report(results.back());
  }
  if (verbose) {
    int passed = 0;
    for (const auto& r : results) passed += r.passed ? 1 : 0;
    std::printf("%d/%zu criteria passed\n", passed, results.size());
  }
  return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results)
    if (!r.passed) return false;
  return true;
}

} // namespace lyap
