#include "lyap/resonant.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>
#include <sstream>

#include "lyap/common.hpp"
#include "lyap/pde.hpp"
#include "lyap/quadrature.hpp"
#include "lyap/varmin.hpp"

namespace lyap {

namespace {
const double kInf = std::numeric_limits<double>::infinity();

double interp_1d(const std::vector<double>& grid, const std::vector<double>& row_base,
                 size_t stride, size_t offset, double x) {
  // linear interpolation with edge clamping on an ascending grid
  if (x <= grid.front()) return row_base[offset];
  if (x >= grid.back()) return row_base[offset + stride * (grid.size() - 1)];
  auto it = std::upper_bound(grid.begin(), grid.end(), x);
  size_t i = (size_t)std::distance(grid.begin(), it) - 1;
  double t = (x - grid[i]) / (grid[i + 1] - grid[i]);
  return (1 - t) * row_base[offset + stride * i] + t * row_base[offset + stride * (i + 1)];
}

double bilinear(const CustomTable& tb, const std::vector<double>& vals, double x,
                double u) {
  const size_t nu = tb.u_grid.size();
  // interpolate in u along the two bracketing x rows, then in x
  double xc = std::min(std::max(x, tb.x_grid.front()), tb.x_grid.back());
  auto it = std::upper_bound(tb.x_grid.begin(), tb.x_grid.end(), xc);
  size_t i = it == tb.x_grid.begin()
                 ? 0
                 : std::min((size_t)std::distance(tb.x_grid.begin(), it) - 1,
                            tb.x_grid.size() - 2);
  double t = (xc - tb.x_grid[i]) / (tb.x_grid[i + 1] - tb.x_grid[i]);
  double lo = interp_1d(tb.u_grid, vals, 1, i * nu, u);
  double hi = interp_1d(tb.u_grid, vals, 1, (i + 1) * nu, u);
  return (1 - t) * lo + t * hi;
}

} // namespace

double CustomTable::eval_f(double x, double u) const { return bilinear(*this, f_vals, x, u); }
double CustomTable::eval_fu(double x, double u) const { return bilinear(*this, fu_vals, x, u); }

double ComponentSpec::f(double x, double y, double u) const {
  switch (kind) {
    case Kind::LinearInU:
      return b(x, y) * u;
    case Kind::SaturatedBlend:
      return 0.5 * b(x, y) * (u + s0 * std::tanh(u / s0)) + forcing(x, y);
    default:
      return table.eval_f(x, u);
  }
}

double ComponentSpec::fu(double x, double y, double u) const {
  switch (kind) {
    case Kind::LinearInU:
      return b(x, y);
    case Kind::SaturatedBlend: {
      double c = std::cosh(u / s0);
      return 0.5 * b(x, y) * (1.0 + 1.0 / (c * c));
    }
    default:
      return table.eval_fu(x, u);
  }
}

namespace {

struct Discretization {
  NeumannOperator op;
  std::vector<std::pair<double, double>> xy; // node coordinates
  double length = 0.0;                       // 1D only
  bool is_1d = false;
};

Discretization discretize(const ResonantDomain& domain) {
  if (const auto* iv = std::get_if<Interval1D>(&domain)) {
    Discretization d{NeumannOperator::interval(iv->length, iv->cells), {}, iv->length, true};
    d.xy.reserve(d.op.nodes());
    for (double x : d.op.coords_1d()) d.xy.emplace_back(x, 0.0);
    return d;
  }
  const Grid2D& g = std::get<Grid2D>(domain);
  Discretization d{NeumannOperator::on_grid(g), {}, 0.0, false};
  d.xy.reserve(d.op.nodes());
  for (int i = 0; i < g.node_count(); ++i) d.xy.push_back(g.node(i));
  return d;
}

double beta_for(const ResonantDomain& domain, double p) {
  if (const auto* iv = std::get_if<Interval1D>(&domain)) return beta_ant(iv->length, p);
  const Grid2D& g = std::get<Grid2D>(domain);
  if (p == kInf) return neumann_lambda1(g);
  return minimize_neumann_grid(p, g).value;
}

} // namespace

CertificateReport check_hypotheses(const NonlinearitySpec& spec,
                                   const ResonantDomain& domain,
                                   const HypothesesOptions& opt) {
  const int n = spec.dim();
  if (n < 1) throw InputError("check_hypotheses: empty spec");
  if ((int)spec.bound_lower.size() != n || (int)spec.bound_upper.size() != n ||
      (int)spec.p_list.size() != n)
    throw InputError("check_hypotheses: bounds/exponents must match dimension");
  const bool is_1d = std::holds_alternative<Interval1D>(domain);
  for (const auto& c : spec.components)
    if (c.kind == ComponentSpec::Kind::Custom && !is_1d)
      throw InputError("check_hypotheses: Custom tables are supported on 1D domains");

  CertificateReport rep;
  rep.theorem = "resonant-unique-solution";
  Discretization d = discretize(domain);
  const Eigen::VectorXd& W = d.op.weights();

  // Lp bounds of the declared upper fields against beta_p(Omega).
  for (int i = 0; i < n; ++i) {
    double p = spec.p_list[(size_t)i];
    if (is_1d) {
      if (p < 1.0) throw InputError("check_hypotheses: p must be >= 1 (1D)");
    } else if (!(p > 1.0)) {
      throw InputError("check_hypotheses: p must exceed N/2 = 1 (2D)");
    }
    double beta = beta_for(domain, p);
    double norm;
    if (p == kInf) {
      double mx = 0;
      for (int k = 0; k < d.op.nodes(); ++k)
        mx = std::max(mx, std::max(0.0, spec.bound_upper[(size_t)i](d.xy[(size_t)k].first,
                                                                    d.xy[(size_t)k].second)));
      norm = mx;
    } else {
      double s = 0;
      for (int k = 0; k < d.op.nodes(); ++k) {
        double v = std::max(0.0, spec.bound_upper[(size_t)i](d.xy[(size_t)k].first,
                                                             d.xy[(size_t)k].second));
        s += W[k] * std::pow(v, p);
      }
      norm = std::pow(s, 1.0 / p);
    }
    std::ostringstream nm;
    nm << "||b_" << i + 1 << i + 1 << "^+||_{p=" << p << "} < beta_p(Omega)";
    rep.add(HypothesisCheck{nm.str(), norm, beta, norm < beta, ""});
  }

  // int A positive definite (diagonal bounds: every component integral > 0).
  for (int i = 0; i < n; ++i) {
    double s = 0;
    for (int k = 0; k < d.op.nodes(); ++k)
      s += W[k] * spec.bound_lower[(size_t)i](d.xy[(size_t)k].first, d.xy[(size_t)k].second);
    std::ostringstream nm;
    nm << "int A_" << i + 1 << i + 1 << " > 0";
    rep.add(HypothesisCheck{nm.str(), s, 0.0, s > 0.0, ""});
  }

  // Sampled sandwich A <= G_uu <= B on the (x, u) box.
  {
    double worst_lo = kInf, worst_hi = kInf;
    for (int i = 0; i < n; ++i) {
      const auto& comp = spec.components[(size_t)i];
      for (int k = 0; k < d.op.nodes(); k += std::max(1, d.op.nodes() / opt.x_samples)) {
        auto [x, y] = d.xy[(size_t)k];
        double lo = spec.bound_lower[(size_t)i](x, y);
        double hi = spec.bound_upper[(size_t)i](x, y);
        for (int j = 0; j < opt.u_samples; ++j) {
          double u = -opt.u_box + 2.0 * opt.u_box * j / (opt.u_samples - 1);
          double g = comp.fu(x, y, u);
          worst_lo = std::min(worst_lo, g - lo);
          worst_hi = std::min(worst_hi, hi - g);
        }
      }
    }
    rep.add(HypothesisCheck{"A(x) <= G_uu(x,u) sampled", worst_lo, 0.0,
                            worst_lo >= -1e-9, "min over the sampled box"});
    rep.add(HypothesisCheck{"G_uu(x,u) <= B(x) sampled", worst_hi, 0.0,
                            worst_hi >= -1e-9, "min over the sampled box"});
  }

  // Custom tables: finite-difference consistency of G_uu against G_u.
  for (int i = 0; i < n; ++i) {
    const auto& comp = spec.components[(size_t)i];
    if (comp.kind != ComponentSpec::Kind::Custom) continue;
    const auto& tb = comp.table;
    double worst = 0.0;
    for (size_t ix = 0; ix < tb.x_grid.size(); ++ix)
      for (size_t iu = 0; iu + 1 < tb.u_grid.size(); ++iu) {
        double du = tb.u_grid[iu + 1] - tb.u_grid[iu];
        double fd = (tb.f_vals[ix * tb.u_grid.size() + iu + 1] -
                     tb.f_vals[ix * tb.u_grid.size() + iu]) /
                    du;
        double mid = 0.5 * (tb.fu_vals[ix * tb.u_grid.size() + iu + 1] +
                            tb.fu_vals[ix * tb.u_grid.size() + iu]);
        worst = std::max(worst, std::abs(fd - mid));
      }
    std::ostringstream nm;
    nm << "custom table " << i + 1 << ": G_uu consistent with dG_u/du";
    rep.add(HypothesisCheck{nm.str(), worst, 1e-4, worst <= 1e-4, ""});
  }

  // Scalar case: existence of s0 with int f(x, s0) dx = 0 (monotone in s0).
  if (n == 1) {
    const auto& comp = spec.components[0];
    auto phi = [&](double s) {
      double v = 0;
      for (int k = 0; k < d.op.nodes(); ++k)
        v += W[k] * comp.f(d.xy[(size_t)k].first, d.xy[(size_t)k].second, s);
      return v;
    };
    double lo = -opt.s0_window, hi = opt.s0_window;
    double flo = phi(lo), fhi = phi(hi);
    bool found = false;
    double s0 = 0.0;
    if (flo == 0.0) { found = true; s0 = lo; }
    else if (fhi == 0.0) { found = true; s0 = hi; }
    else if ((flo < 0) != (fhi < 0)) {
      found = true;
      for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = phi(mid);
        if (fm == 0.0) { lo = hi = mid; break; }
        if ((fm < 0) == (flo < 0)) { lo = mid; flo = fm; } else { hi = mid; }
      }
      s0 = 0.5 * (lo + hi);
    }
    std::ostringstream note;
    if (found) note << "s0 = " << s0;
    rep.add(HypothesisCheck{"exists s0 with int f(x, s0) dx = 0",
                            found ? phi(s0) : std::min(std::abs(flo), std::abs(fhi)), 0.0,
                            found, note.str()});
  }

  rep.finalize("unique solution");
  return rep;
}

namespace {

std::vector<Eigen::VectorXd> to_eigen(const std::vector<std::vector<double>>& v) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(v.size());
  for (const auto& c : v)
    out.push_back(Eigen::Map<const Eigen::VectorXd>(c.data(), (Eigen::Index)c.size()));
  return out;
}

} // namespace

SolveResult solve_from(const NonlinearitySpec& spec, const ResonantDomain& domain,
                       const std::vector<std::vector<double>>& y0,
                       const SolveOptions& opt) {
  const int n = spec.dim();
  if (opt.require_hypotheses) {
    auto rep = check_hypotheses(spec, domain);
    if (!rep.certified)
      throw InputError("resonant solve: hypotheses not certified (" + rep.reason + ")");
  }
  Discretization d = discretize(domain);
  const int N = d.op.nodes();
  std::vector<Eigen::VectorXd> y;
  if (y0.empty()) {
    y.assign((size_t)n, Eigen::VectorXd::Zero(N));
  } else {
    if ((int)y0.size() != n || (int)y0[0].size() != N)
      throw InputError("resonant solve: initial field size mismatch");
    y = to_eigen(y0);
  }

  const UnitRule& rule = gl16_unit();
  auto frozen_D = [&](const ComponentSpec& comp, double x, double yy, double z) {
    double s = 0;
    if (comp.kind == ComponentSpec::Kind::Custom) {
      // tabulated curvature is only piecewise smooth: doubled rule
      for (int j = 0; j < 16; ++j) {
        s += 0.5 * rule.weight[j] * comp.fu(x, yy, 0.5 * rule.node[j] * z);
        s += 0.5 * rule.weight[j] * comp.fu(x, yy, (0.5 + 0.5 * rule.node[j]) * z);
      }
      return s;
    }
    for (int j = 0; j < 16; ++j) s += rule.weight[j] * comp.fu(x, yy, rule.node[j] * z);
    return s;
  };

  SolveResult out;
  std::vector<Eigen::VectorXd> u((size_t)n, Eigen::VectorXd::Zero(N));
  double prev_delta = kInf;
  bool damped = false;
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    for (int i = 0; i < n; ++i) {
      const auto& comp = spec.components[(size_t)i];
      Eigen::VectorXd D(N), g(N);
      for (int k = 0; k < N; ++k) {
        auto [x, yy] = d.xy[(size_t)k];
        D[k] = frozen_D(comp, x, yy, y[(size_t)i][k]);
        g[k] = -comp.f(x, yy, 0.0);
      }
      u[(size_t)i] = solve_linear_neumann(d.op, D, g, opt.linear_tol);
    }
    double delta = 0;
    for (int i = 0; i < n; ++i)
      delta = std::max(delta, (u[(size_t)i] - y[(size_t)i]).cwiseAbs().maxCoeff());
    if (delta > prev_delta && !damped) damped = true; // non-monotone step
    for (int i = 0; i < n; ++i)
      y[(size_t)i] = damped ? (0.5 * (y[(size_t)i] + u[(size_t)i])).eval() : u[(size_t)i];
    prev_delta = delta;
    if (delta <= opt.tol) {
      ++it;
      break;
    }
  }
  out.iterations = it;
  out.damped = damped;
  out.converged = prev_delta <= opt.tol;
  if (!out.converged) out.warning = "MaxIterExceeded: best iterate reported";

  // Residual of the nonlinear equation at the final iterate.
  double res = 0, scale = 1.0;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd lap = -d.op.neg_laplacian(y[(size_t)i]);
    for (int k = 0; k < N; ++k) {
      auto [x, yy] = d.xy[(size_t)k];
      double fv = spec.components[(size_t)i].f(x, yy, y[(size_t)i][k]);
      res = std::max(res, std::abs(lap[k] + fv));
      scale = std::max({scale, std::abs(lap[k]), std::abs(fv)});
    }
  }
  out.residual = res;
  out.residual_rel = res / scale;
  out.u.resize((size_t)n);
  for (int i = 0; i < n; ++i)
    out.u[(size_t)i].assign(y[(size_t)i].data(), y[(size_t)i].data() + N);
  return out;
}

SolveResult solve(const NonlinearitySpec& spec, const ResonantDomain& domain,
                  const SolveOptions& opt) {
  return solve_from(spec, domain, {}, opt);
}

UniquenessReport uniqueness_probe(const NonlinearitySpec& spec,
                                  const ResonantDomain& domain, int starts,
                                  const SolveOptions& opt, unsigned seed) {
  if (starts < 1) throw InputError("uniqueness_probe: starts must be >= 1");
  SolveResult base = solve(spec, domain, opt);
  if (!base.converged)
    throw NumericalError("uniqueness_probe: default start did not converge");
  UniquenessReport rep;
  rep.starts = starts;
  rep.residuals.push_back(base.residual);
  std::vector<std::vector<std::vector<double>>> sols{base.u};
  const int n = spec.dim();
  const int N = (int)base.u[0].size();
  double amp = 1.0;
  for (const auto& comp : base.u)
    for (double v : comp) amp = std::max(amp, 2.0 * std::abs(v));
  SolveOptions o2 = opt;
  o2.require_hypotheses = false; // already verified by the base solve
  // Starts are independent; run them on a small pool and merge by index.
  std::vector<SolveResult> runs((size_t)starts);
  {
    const int pool = std::min(starts, 4);
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors((size_t)pool);
    for (int w = 0; w < pool; ++w)
      workers.emplace_back([&, w] {
        try {
          for (int s = w; s < starts; s += pool) {
            std::mt19937 rng(seed + (unsigned)s);
            std::uniform_real_distribution<double> uni(-amp, amp);
            std::vector<std::vector<double>> y0((size_t)n,
                                                std::vector<double>((size_t)N));
            for (auto& c : y0)
              for (auto& v : c) v = uni(rng);
            runs[(size_t)s] = solve_from(spec, domain, y0, o2);
          }
        } catch (...) {
          errors[(size_t)w] = std::current_exception();
        }
      });
    for (auto& t : workers) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  for (const auto& r : runs) {
    rep.all_converged = rep.all_converged && r.converged;
    rep.residuals.push_back(r.residual);
    sols.push_back(r.u);
  }
  for (size_t a = 0; a < sols.size(); ++a)
    for (size_t b = a + 1; b < sols.size(); ++b)
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < N; ++k)
          rep.max_spread = std::max(
              rep.max_spread, std::abs(sols[a][(size_t)i][(size_t)k] -
                                       sols[b][(size_t)i][(size_t)k]));
  return rep;
}

} // namespace lyap
