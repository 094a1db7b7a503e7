#include "lyap/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "lyap/common.hpp"

namespace lyap {

namespace {

// Step nodes over [0,T]: breakpoints are always nodes, each smooth piece is
// subdivided uniformly, and no step exceeds T/steps.
std::vector<double> step_nodes(double T, int steps, const std::vector<double>& brk) {
  std::vector<double> edges{0.0};
  for (double b : brk)
    if (b > 1e-14 * T && b < T * (1.0 - 1e-14)) edges.push_back(b);
  edges.push_back(T);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [&](double u, double v) { return std::abs(u - v) < 1e-14 * T; }),
              edges.end());
  std::vector<double> nodes;
  const double hmax = T / steps;
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    double lo = edges[i], hi = edges[i + 1];
    int k = std::max(1, (int)std::ceil((hi - lo) / hmax - 1e-12));
    for (int j = 0; j < k; ++j) nodes.push_back(lo + (hi - lo) * j / k);
  }
  nodes.push_back(T);
  return nodes;
}

// Scalar fundamental 2x2 matrix for u'' + q(t)u = 0, optionally with the
// derivative of the matrix in a parameter entering as q = a + lambda.
struct Mat2 {
  double a = 1, b = 0, c = 0, d = 1; // [[a,b],[c,d]]
};

void rk4_scalar(const std::function<double(double)>& q,
                const std::vector<double>& nodes, Mat2& Y, Mat2* S) {
  auto deriv = [&](double qq, const Mat2& y, const Mat2& s, Mat2& dy, Mat2& ds,
                   bool with_s) {
    dy.a = y.c;
    dy.b = y.d;
    dy.c = -qq * y.a;
    dy.d = -qq * y.b;
    if (with_s) {
      ds.a = s.c;
      ds.b = s.d;
      ds.c = -qq * s.a - y.a;
      ds.d = -qq * s.b - y.b;
    }
  };
  const bool with_s = (S != nullptr);
  Mat2 s{0, 0, 0, 0};
  if (with_s) s = *S;
  auto axpy = [](const Mat2& y, double h, const Mat2& k) {
    return Mat2{y.a + h * k.a, y.b + h * k.b, y.c + h * k.c, y.d + h * k.d};
  };
  for (size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double t = nodes[i], h = nodes[i + 1] - nodes[i];
    // endpoint stage evaluated just inside the step so jump coefficients
    // keep the current piece's value
    const double q1 = q(t), q2 = q(t + 0.5 * h), q4 = q(t + h * (1.0 - 1e-12));
    if (!std::isfinite(q1) || !std::isfinite(q2) || !std::isfinite(q4))
      throw NumericalError("monodromy: non-finite coefficient value");
    Mat2 k1y, k2y, k3y, k4y, k1s, k2s, k3s, k4s, ty, ts;
    deriv(q1, Y, s, k1y, k1s, with_s);
    ty = axpy(Y, 0.5 * h, k1y);
    ts = axpy(s, 0.5 * h, k1s);
    deriv(q2, ty, ts, k2y, k2s, with_s);
    ty = axpy(Y, 0.5 * h, k2y);
    ts = axpy(s, 0.5 * h, k2s);
    deriv(q2, ty, ts, k3y, k3s, with_s);
    ty = axpy(Y, h, k3y);
    ts = axpy(s, h, k3s);
    deriv(q4, ty, ts, k4y, k4s, with_s);
    Y = Mat2{Y.a + h / 6 * (k1y.a + 2 * k2y.a + 2 * k3y.a + k4y.a),
             Y.b + h / 6 * (k1y.b + 2 * k2y.b + 2 * k3y.b + k4y.b),
             Y.c + h / 6 * (k1y.c + 2 * k2y.c + 2 * k3y.c + k4y.c),
             Y.d + h / 6 * (k1y.d + 2 * k2y.d + 2 * k3y.d + k4y.d)};
    if (with_s)
      s = Mat2{s.a + h / 6 * (k1s.a + 2 * k2s.a + 2 * k3s.a + k4s.a),
               s.b + h / 6 * (k1s.b + 2 * k2s.b + 2 * k3s.b + k4s.b),
               s.c + h / 6 * (k1s.c + 2 * k2s.c + 2 * k3s.c + k4s.c),
               s.d + h / 6 * (k1s.d + 2 * k2s.d + 2 * k3s.d + k4s.d)};
  }
  if (with_s) *S = s;
}

Mat2 scalar_fundamental(const ScalarCoefficient& a, double lambda, int steps,
                        Mat2* S) {
  auto nodes = step_nodes(a.period(), steps, a.interior_breakpoints());
  Mat2 Y;
  if (S) *S = Mat2{0, 0, 0, 0};
  rk4_scalar([&](double t) { return a.eval(t) + lambda; }, nodes, Y, S);
  return Y;
}

// General system integrator on 2n x 2n matrices.
Eigen::MatrixXd system_fundamental(const MatrixCoefficient& A, int steps) {
  const int n = A.dim();
  auto nodes = step_nodes(A.period(), steps, A.interior_breakpoints());
  Eigen::MatrixXd Y = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  auto apply_C = [&](double t, const Eigen::MatrixXd& y) {
    auto vals = A.eval_all(t);
    for (double v : vals)
      if (!std::isfinite(v)) throw NumericalError("monodromy: non-finite coefficient value");
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        At(vals.data(), n, n);
    Eigen::MatrixXd dy(2 * n, 2 * n);
    dy.topRows(n) = y.bottomRows(n);
    dy.bottomRows(n) = -At * y.topRows(n);
    return dy;
  };
  for (size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double t = nodes[i], h = nodes[i + 1] - nodes[i];
    Eigen::MatrixXd k1 = apply_C(t, Y);
    Eigen::MatrixXd k2 = apply_C(t + 0.5 * h, Y + 0.5 * h * k1);
    Eigen::MatrixXd k3 = apply_C(t + 0.5 * h, Y + 0.5 * h * k2);
    Eigen::MatrixXd k4 = apply_C(t + h * (1.0 - 1e-12), Y + h * k3);
    Y += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return Y;
}

std::vector<std::complex<double>> eigenvalues_sorted(const Eigen::MatrixXd& M) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, /*computeEigenvectors=*/false);
  std::vector<std::complex<double>> mu(es.eigenvalues().data(),
                                       es.eigenvalues().data() + M.rows());
  std::sort(mu.begin(), mu.end(), [](auto u, auto v) {
    if (std::abs(std::abs(u) - std::abs(v)) > 1e-14) return std::abs(u) < std::abs(v);
    if (u.real() != v.real()) return u.real() < v.real();
    return u.imag() < v.imag();
  });
  return mu;
}

} // namespace

const char* to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::Stable: return "stable";
    case StabilityClass::Unstable: return "unstable";
    default: return "boundary";
  }
}

MonodromyResult monodromy(const ScalarCoefficient& a, int steps) {
  if (steps < 64) throw InputError("monodromy: steps must be >= 64");
  Mat2 Yh = scalar_fundamental(a, 0.0, steps, nullptr);
  Mat2 Y = scalar_fundamental(a, 0.0, 2 * steps, nullptr);
  MonodromyResult r;
  r.n = 1;
  r.matrix.resize(2, 2);
  r.matrix << Y.a, Y.b, Y.c, Y.d;
  r.discriminant = Y.a + Y.d;
  r.step_count = 2 * steps;
  double diff = std::max(std::max(std::abs(Y.a - Yh.a), std::abs(Y.b - Yh.b)),
                         std::max(std::abs(Y.c - Yh.c), std::abs(Y.d - Yh.d)));
  r.estimated_error = diff / 15.0;
  r.multipliers = eigenvalues_sorted(r.matrix);
  return r;
}

MonodromyResult monodromy(const MatrixCoefficient& A, int steps) {
  if (steps < 64) throw InputError("monodromy: steps must be >= 64");
  Eigen::MatrixXd Yh = system_fundamental(A, steps);
  Eigen::MatrixXd Y = system_fundamental(A, 2 * steps);
  MonodromyResult r;
  r.n = A.dim();
  r.matrix = Y;
  r.discriminant = Y.trace();
  r.step_count = 2 * steps;
  r.estimated_error = (Y - Yh).cwiseAbs().maxCoeff() / 15.0;
  r.multipliers = eigenvalues_sorted(Y);
  return r;
}

StabilityVerdict classify(const MonodromyResult& m, double tol) {
  if (!(tol > 0)) throw InputError("classify: tol must be positive");
  if (m.n == 1) {
    const double d = m.discriminant;
    const double band = tol * std::max(2.0, std::abs(d));
    StabilityClass cls = std::abs(d) < 2.0 - band   ? StabilityClass::Stable
                         : std::abs(d) > 2.0 + band ? StabilityClass::Unstable
                                                    : StabilityClass::Boundary;
    // At Boundary, coexistence (two independent periodic solutions) shows up
    // as M = +-I; a Jordan block there means unbounded solutions.
    bool semisimple = true;
    if (cls == StabilityClass::Boundary) {
      const double sgn = d >= 0 ? 1.0 : -1.0;
      Eigen::Matrix2d J = m.matrix - sgn * Eigen::Matrix2d::Identity();
      double scale = std::max(1.0, m.matrix.cwiseAbs().maxCoeff());
      semisimple = J.cwiseAbs().maxCoeff() <= tol * scale;
    }
    return StabilityVerdict{cls, d, semisimple, tol};
  }
  double max_dev = 0.0;
  for (auto mu : m.multipliers) max_dev = std::max(max_dev, std::abs(std::abs(mu) - 1.0));
  bool off_circle_out = false;
  for (auto mu : m.multipliers)
    if (std::abs(mu) > 1.0 + tol) off_circle_out = true;
  if (off_circle_out)
    return StabilityVerdict{StabilityClass::Unstable, max_dev, false, tol};

  // All within the band; decide semisimplicity by clustered rank tests.
  const double scale = m.matrix.cwiseAbs().maxCoeff();
  const double ceps = std::max(1e3 * tol, 1e-9) * std::max(1.0, scale);
  std::vector<bool> used(m.multipliers.size(), false);
  bool semisimple = true;
  const int N = (int)m.multipliers.size();
  for (int i = 0; i < N; ++i) {
    if (used[i]) continue;
    std::complex<double> mu = m.multipliers[i];
    int alg = 0;
    std::complex<double> centroid = 0.0;
    for (int j = 0; j < N; ++j) {
      if (!used[j] && std::abs(m.multipliers[j] - mu) <= ceps) {
        used[j] = true;
        centroid += m.multipliers[j];
        ++alg;
      }
    }
    centroid /= (double)alg;
    if (alg == 1) continue;
    Eigen::MatrixXcd B = m.matrix.cast<std::complex<double>>();
    B -= centroid * Eigen::MatrixXcd::Identity(N, N);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(B);
    int rank = 0;
    for (int k = 0; k < svd.singularValues().size(); ++k)
      if (svd.singularValues()[k] > tol * std::max(1.0, scale)) ++rank;
    int geom = N - rank;
    if (geom != alg) semisimple = false;
  }
  StabilityClass cls = (max_dev <= tol && semisimple) ? StabilityClass::Stable
                                                      : StabilityClass::Boundary;
  return StabilityVerdict{cls, max_dev, semisimple, tol};
}

Discriminant scalar_discriminant(const ScalarCoefficient& a, double lambda, int steps) {
  Mat2 S;
  Mat2 Y = scalar_fundamental(a, lambda, steps, &S);
  return Discriminant{Y.a + Y.d, S.a + S.d};
}

ScalarTrajectory integrate_hill(const std::function<double(double)>& q,
                                const std::vector<double>& breakpoints, double T,
                                double u0, double du0, int steps) {
  auto nodes = step_nodes(T, steps, breakpoints);
  ScalarTrajectory out;
  out.t.reserve(nodes.size());
  out.u.reserve(nodes.size());
  out.du.reserve(nodes.size());
  double u = u0, du = du0;
  out.t.push_back(nodes[0]);
  out.u.push_back(u);
  out.du.push_back(du);
  for (size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double t = nodes[i], h = nodes[i + 1] - nodes[i];
    const double q1 = q(t), q2 = q(t + 0.5 * h), q4 = q(t + h * (1.0 - 1e-12));
    if (!std::isfinite(q1) || !std::isfinite(q2) || !std::isfinite(q4))
      throw NumericalError("integrate_hill: non-finite coefficient value");
    double k1u = du, k1v = -q1 * u;
    double k2u = du + 0.5 * h * k1v, k2v = -q2 * (u + 0.5 * h * k1u);
    double k3u = du + 0.5 * h * k2v, k3v = -q2 * (u + 0.5 * h * k2u);
    double k4u = du + h * k3v, k4v = -q4 * (u + h * k3u);
    u += h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
    du += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
    out.t.push_back(nodes[i + 1]);
    out.u.push_back(u);
    out.du.push_back(du);
  }
  return out;
}

SweepResult sweep(const CoeffTemplate& tmpl, const std::vector<double>& alpha_grid,
                  const std::vector<double>& beta_grid, int steps, int threads) {
  if (alpha_grid.empty() || beta_grid.empty())
    throw InputError("sweep: grids must be nonempty");
  SweepResult res;
  res.alpha = alpha_grid;
  res.beta = beta_grid;
  res.cells.resize(alpha_grid.size() * beta_grid.size());
  auto run_cell = [&](size_t idx) {
    const size_t ia = idx / beta_grid.size(), ib = idx % beta_grid.size();
    SweepCell& cell = res.cells[idx];
    try {
      auto a = tmpl(alpha_grid[ia], beta_grid[ib]);
      auto m = monodromy(a, steps);
      cell.discriminant = m.discriminant;
      cell.verdict = classify(m);
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  };
  const size_t total = res.cells.size();
  if (threads <= 1) {
    for (size_t i = 0; i < total; ++i) run_cell(i);
  } else {
    const size_t nt = std::min<size_t>(threads, total);
    std::vector<std::thread> pool;
    for (size_t t = 0; t < nt; ++t)
      pool.emplace_back([&, t] {
        for (size_t i = t; i < total; i += nt) run_cell(i);
      });
    for (auto& th : pool) th.join();
  }
  return res;
}

} // namespace lyap
