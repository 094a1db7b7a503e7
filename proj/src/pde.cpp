#include "lyap/pde.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

#include "lyap/common.hpp"

namespace lyap {

MatrixField::MatrixField(Grid2D g, int dim)
    : grid(std::move(g)), n(dim),
      entries((size_t)grid.node_count() * dim * dim, 0.0) {
  if (dim < 1) throw InputError("MatrixField: dimension must be >= 1");
}

MatrixField MatrixField::diagonal(const std::vector<SpatialCoefficient2D>& diag) {
  if (diag.empty()) throw InputError("MatrixField::diagonal: empty");
  MatrixField F(diag[0].grid, (int)diag.size());
  for (size_t i = 1; i < diag.size(); ++i)
    if (!diag[i].grid.same_layout(F.grid))
      throw InputError("MatrixField::diagonal: grids differ");
  for (int node = 0; node < F.grid.node_count(); ++node)
    for (int i = 0; i < F.n; ++i) F.at(node, i, i) = diag[(size_t)i].samples[(size_t)node];
  return F;
}

void MatrixField::symmetrize() {
  for (int node = 0; node < grid.node_count(); ++node)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) {
        double v = 0.5 * (at(node, i, j) + at(node, j, i));
        at(node, i, j) = v;
        at(node, j, i) = v;
      }
}

namespace {

using Trip = Eigen::Triplet<double>;

void add_edge(std::vector<Trip>& tr, int a, int b, double w) {
  tr.emplace_back(a, a, w);
  tr.emplace_back(b, b, w);
  tr.emplace_back(a, b, -w);
  tr.emplace_back(b, a, -w);
}

} // namespace

NeumannOperator NeumannOperator::interval(double length, int cells) {
  if (!(length > 0) || cells < 4) throw InputError("NeumannOperator::interval: bad size");
  NeumannOperator op;
  const int n = cells + 1;
  const double h = length / cells;
  op.h_ = h;
  std::vector<Trip> tr;
  for (int i = 0; i < cells; ++i) add_edge(tr, i, i + 1, 1.0 / h);
  op.K_.resize(n, n);
  op.K_.setFromTriplets(tr.begin(), tr.end());
  op.W_.resize(n);
  for (int i = 0; i < n; ++i) op.W_[i] = (i == 0 || i == cells) ? 0.5 * h : h;
  op.coords1d_.resize(n);
  for (int i = 0; i < n; ++i) op.coords1d_[i] = i * h;
  return op;
}

NeumannOperator NeumannOperator::on_grid(const Grid2D& grid) {
  NeumannOperator op;
  op.h_ = grid.h();
  const int N = grid.node_count();
  std::vector<Trip> tr;
  if (!grid.is_disc()) {
    const int nx = grid.n1(), ny = grid.n2();
    const double hx = grid.rect().a_len / nx, hy = grid.rect().b_len / ny;
    auto id = [&](int i, int j) { return j * (nx + 1) + i; };
    // Edge weight = transverse extent / edge length (P1 tensor stiffness
    // with lumped transverse coupling keeps row sums exactly zero).
    for (int j = 0; j <= ny; ++j) {
      double wy = (j == 0 || j == ny) ? 0.5 * hy : hy;
      for (int i = 0; i < nx; ++i) add_edge(tr, id(i, j), id(i + 1, j), wy / hx);
    }
    for (int i = 0; i <= nx; ++i) {
      double wx = (i == 0 || i == nx) ? 0.5 * hx : hx;
      for (int j = 0; j < ny; ++j) add_edge(tr, id(i, j), id(i, j + 1), wx / hy);
    }
  } else {
    const int nr = grid.n1(), nth = grid.n2();
    const double R = grid.disc_domain().radius;
    const double hr = R / nr, hth = 2.0 * kPi / nth;
    auto id = [&](int j, int k) { return 1 + (j - 1) * nth + ((k % nth) + nth) % nth; };
    // Radial edges: weight r_{j+1/2} * hth / hr; center fans out to ring 1.
    for (int k = 0; k < nth; ++k) add_edge(tr, 0, id(1, k), (0.5 * hr) * hth / hr);
    for (int j = 1; j < nr; ++j) {
      double w = ((j + 0.5) * hr) * hth / hr;
      for (int k = 0; k < nth; ++k) add_edge(tr, id(j, k), id(j + 1, k), w);
    }
    // Angular edges: weight (radial extent) / (r_j * hth).
    for (int j = 1; j <= nr; ++j) {
      double ext = (j == nr) ? 0.5 * hr : hr;
      double w = ext / ((j * hr) * hth);
      for (int k = 0; k < nth; ++k) add_edge(tr, id(j, k), id(j, k + 1), w);
    }
  }
  op.K_.resize(N, N);
  op.K_.setFromTriplets(tr.begin(), tr.end());
  auto w = grid.weights();
  op.W_ = Eigen::Map<const Eigen::VectorXd>(w.data(), (Eigen::Index)w.size());
  return op;
}

Eigen::VectorXd NeumannOperator::neg_laplacian(const Eigen::VectorXd& v) const {
  return (K_ * v).cwiseQuotient(W_);
}

EigenPair neumann_eigenpair(const NeumannOperator& op, int max_iter, double tol) {
  const int N = op.nodes();
  const Eigen::VectorXd& W = op.weights();
  const double wtot = W.sum();
  auto deflate = [&](Eigen::VectorXd& v) {
    double mean = W.dot(v) / wtot;
    v.array() -= mean;
  };
  // (K + W) is SPD; inverse iteration on it converges to the smallest
  // nonzero Neumann eigenvalue once constants are projected out.
  Eigen::SparseMatrix<double> A = op.stiffness();
  Eigen::VectorXd Wv = W;
  for (int i = 0; i < N; ++i) A.coeffRef(i, i) += Wv[i];
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
  if (solver.info() != Eigen::Success)
    throw NumericalError("neumann_eigenpair: factorization failed");

  Eigen::VectorXd v(N);
  for (int i = 0; i < N; ++i) v[i] = std::sin(0.7 * (i + 1)) + 1e-3 * i; // deterministic
  deflate(v);
  v /= std::sqrt(v.dot(W.cwiseProduct(v)));
  double lam = 0.0, lam_prev = -1.0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd rhs = W.cwiseProduct(v);
    Eigen::VectorXd u = solver.solve(rhs);
    deflate(u);
    double nrm = std::sqrt(u.dot(W.cwiseProduct(u)));
    if (!(nrm > 0)) throw NumericalError("neumann_eigenpair: iteration collapsed");
    v = u / nrm;
    lam = v.dot(op.stiffness() * v) / v.dot(W.cwiseProduct(v));
    if (it > 4 && std::abs(lam - lam_prev) <= tol * std::max(1.0, std::abs(lam))) break;
    lam_prev = lam;
  }
  return EigenPair{lam, v};
}

double neumann_lambda1(const Grid2D& grid) {
  return neumann_eigenpair(NeumannOperator::on_grid(grid)).value;
}

double neumann_lambda1_interval(double length, int cells) {
  return neumann_eigenpair(NeumannOperator::interval(length, cells)).value;
}

const char* to_string(NontrivialVerdict v) {
  switch (v) {
    case NontrivialVerdict::Nontrivial: return "nontrivial";
    case NontrivialVerdict::OnlyTrivial: return "only_trivial";
    default: return "inconclusive";
  }
}

namespace {

// Scaled symmetric operator W^-1/2 K W^-1/2 - diag(a) (blockwise for
// systems): its eigenvalue of smallest magnitude is the reported singular
// value. Shift-invert power iteration at 0 via sparse LU.
struct SigmaMin {
  double sigma;
  double scale;
};

SigmaMin sigma_min_scaled(const Eigen::SparseMatrix<double>& H) {
  const int N = (int)H.rows();
  double scale = 0.0;
  for (int k = 0; k < H.outerSize(); ++k) {
    double row = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(H, k); it; ++it)
      row += std::abs(it.value());
    scale = std::max(scale, row);
  }
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(H);
  lu.factorize(H);
  if (lu.info() != Eigen::Success) return SigmaMin{0.0, scale}; // exactly singular
  Eigen::VectorXd v(N);
  for (int i = 0; i < N; ++i) v[i] = std::cos(1.3 * i) + 0.5;
  v.normalize();
  double theta = 0.0;
  for (int it = 0; it < 80; ++it) {
    Eigen::VectorXd u = lu.solve(v);
    double nrm = u.norm();
    if (!(nrm > 0) || !std::isfinite(nrm)) return SigmaMin{0.0, scale};
    u /= nrm;
    double theta_new = u.dot(H * u);
    if (it > 6 && std::abs(theta_new - theta) <= 1e-13 * std::max(1.0, std::abs(theta_new))) {
      theta = theta_new;
      break;
    }
    theta = theta_new;
    v = u;
  }
  return SigmaMin{std::abs(theta), scale};
}

Eigen::SparseMatrix<double> scaled_operator(const NeumannOperator& op,
                                            const Eigen::VectorXd& a) {
  Eigen::VectorXd s = op.weights().cwiseSqrt().cwiseInverse();
  Eigen::SparseMatrix<double> H = s.asDiagonal() * op.stiffness() * s.asDiagonal();
  for (int i = 0; i < H.rows(); ++i) H.coeffRef(i, i) -= a[i];
  H.makeCompressed();
  return H;
}

DetectResult classify_sigma(SigmaMin sm, double tol) {
  NontrivialVerdict v;
  if (sm.sigma < tol * sm.scale) v = NontrivialVerdict::Nontrivial;
  else if (sm.sigma > 10.0 * tol * sm.scale) v = NontrivialVerdict::OnlyTrivial;
  else v = NontrivialVerdict::Inconclusive;
  return DetectResult{v, sm.sigma, sm.scale, tol};
}

} // namespace

DetectResult detect_nontrivial_op(const NeumannOperator& op, const Eigen::VectorXd& a,
                                  double tol) {
  return classify_sigma(sigma_min_scaled(scaled_operator(op, a)), tol);
}

DetectResult detect_nontrivial(const SpatialCoefficient2D& a, double tol) {
  auto op = NeumannOperator::on_grid(a.grid);
  Eigen::Map<const Eigen::VectorXd> av(a.samples.data(), (Eigen::Index)a.samples.size());
  return detect_nontrivial_op(op, av, tol);
}

DetectResult detect_nontrivial_system(const NeumannOperator& op, const MatrixField& A,
                                      double tol) {
  const int N = op.nodes(), n = A.n;
  if (A.grid.node_count() != N) throw InputError("detect_nontrivial_system: grid mismatch");
  Eigen::VectorXd s = op.weights().cwiseSqrt().cwiseInverse();
  Eigen::SparseMatrix<double> Ks = s.asDiagonal() * op.stiffness() * s.asDiagonal();
  std::vector<Trip> tr;
  tr.reserve((size_t)Ks.nonZeros() * n + (size_t)N * n * n);
  for (int k = 0; k < Ks.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(Ks, k); it; ++it)
      for (int al = 0; al < n; ++al)
        tr.emplace_back((int)it.row() * n + al, (int)it.col() * n + al, it.value());
  for (int node = 0; node < N; ++node)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        tr.emplace_back(node * n + i, node * n + j, -A.at(node, i, j));
  Eigen::SparseMatrix<double> H(N * n, N * n);
  H.setFromTriplets(tr.begin(), tr.end());
  return classify_sigma(sigma_min_scaled(H), tol);
}

namespace {

Eigen::VectorXd solve_scaled(const Eigen::SparseMatrix<double>& H,
                             const Eigen::VectorXd& rhs, double rel_tol,
                             const char* who) {
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(H);
  lu.factorize(H);
  if (lu.info() != Eigen::Success)
    throw NumericalError(std::string(who) + ": NearSingular (factorization failed)");
  Eigen::VectorXd x = lu.solve(rhs);
  // Iterative refinement down to the requested relative residual.
  double rhs_n = rhs.norm();
  for (int it = 0; it < 4; ++it) {
    Eigen::VectorXd r = rhs - H * x;
    if (r.norm() <= rel_tol * std::max(rhs_n, 1e-300)) return x;
    x += lu.solve(r);
  }
  Eigen::VectorXd r = rhs - H * x;
  if (r.norm() > rel_tol * std::max(rhs_n, 1e-300)) {
    SigmaMin sm = sigma_min_scaled(H);
    if (sm.sigma < 1e-10 * sm.scale)
      throw NumericalError(std::string(who) + ": NearSingular (sigma_min " +
                           std::to_string(sm.sigma) + ")");
    throw NumericalError(std::string(who) + ": residual stalled at " +
                         std::to_string(r.norm() / std::max(rhs_n, 1e-300)));
  }
  return x;
}

} // namespace

Eigen::VectorXd solve_linear_neumann(const NeumannOperator& op, const Eigen::VectorXd& a,
                                     const Eigen::VectorXd& g, double rel_tol) {
  // Lap(u) + a u = g  <=>  (W^-1 K - a) u = -g; scaled symmetric form
  // H (W^1/2 u) = -W^1/2 g with H = W^-1/2 K W^-1/2 - diag(a).
  Eigen::SparseMatrix<double> H = scaled_operator(op, a);
  Eigen::VectorXd ws = op.weights().cwiseSqrt();
  Eigen::VectorXd rhs = -ws.cwiseProduct(g);
  Eigen::VectorXd xs = solve_scaled(H, rhs, rel_tol, "solve_linear_neumann");
  return xs.cwiseQuotient(ws);
}

Eigen::VectorXd solve_linear_neumann_system(const NeumannOperator& op,
                                            const MatrixField& D,
                                            const Eigen::VectorXd& g, double rel_tol) {
  const int N = op.nodes(), n = D.n;
  Eigen::VectorXd s = op.weights().cwiseSqrt().cwiseInverse();
  Eigen::SparseMatrix<double> Ks = s.asDiagonal() * op.stiffness() * s.asDiagonal();
  std::vector<Trip> tr;
  for (int k = 0; k < Ks.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(Ks, k); it; ++it)
      for (int al = 0; al < n; ++al)
        tr.emplace_back((int)it.row() * n + al, (int)it.col() * n + al, it.value());
  for (int node = 0; node < N; ++node)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        tr.emplace_back(node * n + i, node * n + j, -D.at(node, i, j));
  Eigen::SparseMatrix<double> H(N * n, N * n);
  H.setFromTriplets(tr.begin(), tr.end());
  Eigen::VectorXd rhs(N * n);
  Eigen::VectorXd ws = op.weights().cwiseSqrt();
  for (int node = 0; node < N; ++node)
    for (int i = 0; i < n; ++i) rhs[node * n + i] = -ws[node] * g[node * n + i];
  Eigen::VectorXd xs = solve_scaled(H, rhs, rel_tol, "solve_linear_neumann_system");
  Eigen::VectorXd u(N * n);
  for (int node = 0; node < N; ++node)
    for (int i = 0; i < n; ++i) u[node * n + i] = xs[node * n + i] / ws[node];
  return u;
}

MeanCounterexample mean_nonnegativity_counterexample(const SpatialCoefficient2D& u0,
                                                     double n,
                                                     const std::vector<double>& p_grid) {
  auto op = NeumannOperator::on_grid(u0.grid);
  Eigen::Map<const Eigen::VectorXd> u0v(u0.samples.data(), (Eigen::Index)u0.samples.size());
  double min_u = u0v.minCoeff(), max_u = u0v.maxCoeff();
  if (!(min_u + n > 0))
    throw InputError("mean_nonnegativity_counterexample: u0 + n must be positive");
  if (max_u - min_u < 1e-12)
    throw InputError("mean_nonnegativity_counterexample: u0 must be nonconstant");
  Eigen::VectorXd lap = -op.neg_laplacian(u0v); // Lap(u0)
  Eigen::VectorXd denom = u0v.array() + n;
  Eigen::VectorXd a = -lap.cwiseQuotient(denom);
  SpatialCoefficient2D an(u0.grid, std::vector<double>(a.data(), a.data() + a.size()));
  MeanCounterexample out{an, an.integral(), {}, 0.0};
  for (double p : p_grid) out.norms.emplace_back(p, an.lp_norm(p, false));
  // Residual of Lap(u) + a u = 0 for u = u0 + n (zero by construction).
  Eigen::VectorXd res = lap + a.cwiseProduct(denom);
  out.residual = std::sqrt(res.cwiseProduct(op.weights().cwiseProduct(res)).sum()) /
                 std::sqrt(denom.cwiseProduct(op.weights().cwiseProduct(denom)).sum());
  return out;
}

} // namespace lyap
