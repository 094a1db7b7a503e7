#include "lyap/spectrum.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lyap/common.hpp"
#include "lyap/quadrature.hpp"

namespace lyap {

const char* to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::Periodic ? "periodic" : "antiperiodic";
}
const char* to_string(SpectrumMethod m) {
  return m == SpectrumMethod::Discriminant ? "discriminant" : "discretized";
}

double SpectrumTable::value(int index) const {
  for (const auto& e : eigenvalues)
    if (e.index == index) return e.value;
  throw InputError("SpectrumTable: index not present");
}

namespace {

struct ScanPoint {
  double lambda, f, df; // f = Delta - target
};

// Safeguarded Newton for f = 0 inside a sign-change bracket.
double polish_root(const std::function<Discriminant(double)>& D, double target,
                   double lo, double hi, double flo) {
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 80; ++it) {
    Discriminant d = D(x);
    double f = d.value - target;
    if (f == 0.0) return x;
    if ((f > 0) == (flo > 0)) lo = x; else hi = x;
    double nx = x - f / d.dvalue;
    if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
    if (hi - lo < 1e-12 * std::max(1.0, std::abs(x))) return nx;
    x = nx;
  }
  return x;
}

// Critical point of Delta inside [lo,hi] given a sign change of Delta'.
double polish_critical(const std::function<Discriminant(double)>& D, double lo,
                       double hi, double dflo) {
  for (int it = 0; it < 90 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++it) {
    double mid = 0.5 * (lo + hi);
    double dm = D(mid).dvalue;
    if (dm == 0.0) return mid;
    if ((dm > 0) == (dflo > 0)) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace

SpectrumTable scalar_eigenvalues(const ScalarCoefficient& a, BoundaryCondition bc,
                                 int count, int steps) {
  if (count < 1) throw InputError("scalar_eigenvalues: count must be >= 1");
  const double T = a.period();
  const double target = (bc == BoundaryCondition::Periodic) ? 2.0 : -2.0;
  const double sup_abs = lp_norm(a, std::numeric_limits<double>::infinity(), false);
  const double lambda_start = -sup_abs - 1.0;
  const double dlam = sqr(kPi / T) / 8.0;
  // Conservative upper end of the scan window for the requested count.
  const double lambda_max =
      sqr((count + 3) * kPi / T) + sup_abs + 10.0 * dlam;

  auto D = [&](double lam) { return scalar_discriminant(a, lam, steps); };

  SpectrumTable table;
  table.boundary = bc;
  table.method = SpectrumMethod::Discriminant;
  table.steps = steps;
  table.scan_start = lambda_start;
  table.scan_step = dlam;

  const int base_index = table.first_index();
  int next_index = base_index;
  auto push = [&](double value, int mult) {
    for (int k = 0; k < mult && (int)table.eigenvalues.size() < count; ++k)
      table.eigenvalues.push_back(EigEntry{next_index++, value, mult});
  };

  // Tangency threshold: base 1e-8, widened by the estimated integration
  // error of the discriminant at this step count.
  auto tangency_tol = [&](double lam) {
    Discriminant coarse = scalar_discriminant(a, lam, steps / 2);
    Discriminant fine = D(lam);
    double est = std::abs(fine.value - coarse.value) / 15.0;
    return std::max(1e-8, 30.0 * est);
  };

  ScanPoint prev{lambda_start, D(lambda_start).value - target, 0.0};
  prev.df = D(lambda_start).dvalue;
  for (double lam = lambda_start + dlam;
       (int)table.eigenvalues.size() < count && lam <= lambda_max + dlam;
       lam += dlam) {
    Discriminant d = D(lam);
    ScanPoint cur{lam, d.value - target, d.dvalue};

    // Split the cell at critical points of Delta, then handle each piece.
    bool has_crit = (prev.df == 0.0) ? false : (prev.df > 0) != (cur.df > 0);
    double crit = 0.0, f_crit = 0.0;
    bool tangency = false;
    if (has_crit) {
      crit = polish_critical(D, prev.lambda, cur.lambda, prev.df);
      f_crit = D(crit).value - target;
      // A critical value within tolerance of the target is a double
      // eigenvalue; the critical point locates it far more accurately than
      // the roundoff-level crossings it may create.
      bool is_max = prev.df > 0;
      bool right_kind = (bc == BoundaryCondition::Periodic) ? is_max : !is_max;
      bool ends_same_side = (prev.f > 0) == (cur.f > 0);
      tangency = right_kind && ends_same_side && std::abs(f_crit) <= tangency_tol(crit);
    }
    if (tangency) {
      push(crit, 2);
    } else {
      std::vector<double> pts{prev.lambda};
      if (has_crit) pts.push_back(crit);
      pts.push_back(cur.lambda);
      double f_lo = prev.f;
      for (size_t s = 0; s + 1 < pts.size(); ++s) {
        double hi = pts[s + 1];
        double f_hi = (s + 1 == pts.size() - 1) ? cur.f : f_crit;
        if (f_lo == 0.0 && s == 0 && !has_crit) {
          push(pts[s], 1);
        } else if (f_lo != 0.0 && f_hi != 0.0 && (f_lo > 0) != (f_hi > 0)) {
          push(polish_root(D, target, pts[s], hi, f_lo), 1);
        }
        f_lo = f_hi;
      }
    }
    prev = cur;
  }

  if ((int)table.eigenvalues.size() < count) {
    std::ostringstream os;
    os << "scalar_eigenvalues: found " << table.eigenvalues.size() << " of "
       << count << " eigenvalues in scan window [" << lambda_start << ", "
       << lambda_max << "]";
    throw NumericalError(os.str());
  }
  std::sort(table.eigenvalues.begin(), table.eigenvalues.end(),
            [](const EigEntry& u, const EigEntry& v) { return u.value < v.value; });
  for (size_t i = 0; i < table.eigenvalues.size(); ++i)
    table.eigenvalues[i].index = base_index + (int)i;
  return table;
}

SpectrumTable discretized_scalar_eigenvalues(const ScalarCoefficient& a,
                                             BoundaryCondition bc, int mesh_size,
                                             int count) {
  if (mesh_size < 32) throw InputError("discretized_scalar_eigenvalues: mesh >= 32");
  const double T = a.period();
  const double h = T / mesh_size;
  const double wrap_sign = (bc == BoundaryCondition::Periodic) ? 1.0 : -1.0;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(mesh_size, mesh_size);
  for (int i = 0; i < mesh_size; ++i) {
    A(i, i) = 2.0 / sqr(h) - a.eval(i * h);
    int ip = (i + 1) % mesh_size, im = (i + mesh_size - 1) % mesh_size;
    double sp = (i + 1 == mesh_size) ? -wrap_sign : -1.0;
    double sm = (i == 0) ? -wrap_sign : -1.0;
    A(i, ip) += sp / sqr(h);
    A(i, im) += sm / sqr(h);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);

  SpectrumTable table;
  table.boundary = bc;
  table.method = SpectrumMethod::Discretized;
  table.mesh = mesh_size;
  const int base = table.first_index();
  count = std::min(count, mesh_size);
  for (int i = 0; i < count; ++i)
    table.eigenvalues.push_back(EigEntry{base + i, es.eigenvalues()[i], 1});
  // Flag near-coincident pairs.
  for (size_t i = 0; i + 1 < table.eigenvalues.size(); ++i) {
    double u = table.eigenvalues[i].value, v = table.eigenvalues[i + 1].value;
    if (std::abs(v - u) <= 1e-6 * std::max(1.0, std::abs(u))) {
      table.eigenvalues[i].multiplicity = 2;
      table.eigenvalues[i + 1].multiplicity = 2;
    }
  }
  return table;
}

InterlacingReport verify_interlacing(const ScalarCoefficient& a, int depth,
                                     int steps) {
  if (depth < 1) throw InputError("verify_interlacing: depth must be >= 1");
  InterlacingReport rep;
  rep.periodic = scalar_eigenvalues(a, BoundaryCondition::Periodic, 2 * depth + 1, steps);
  rep.antiperiodic =
      scalar_eigenvalues(a, BoundaryCondition::Antiperiodic, 2 * depth, steps);
  auto lam = [&](int i) { return rep.periodic.value(i); };
  auto lat = [&](int i) { return rep.antiperiodic.value(i); };
  auto fail = [&](const std::string& what) {
    rep.holds = false;
    rep.violation = what;
  };
  auto tol = [](double x) { return 1e-7 * std::max(1.0, std::abs(x)); };
  for (int k = 1; k <= depth && rep.holds; ++k) {
    std::ostringstream os;
    if (!(lam(2 * k - 2) < lat(2 * k - 1) + tol(lat(2 * k - 1)))) {
      os << "lambda_" << 2 * k - 2 << " < ~lambda_" << 2 * k - 1 << " fails: "
         << lam(2 * k - 2) << " vs " << lat(2 * k - 1);
      fail(os.str());
    } else if (!(lat(2 * k) < lam(2 * k - 1) + tol(lam(2 * k - 1)))) {
      os << "~lambda_" << 2 * k << " < lambda_" << 2 * k - 1 << " fails: "
         << lat(2 * k) << " vs " << lam(2 * k - 1);
      fail(os.str());
    }
  }
  return rep;
}

KreinResult krein_lambda1(const MatrixCoefficient& P, int mesh_size) {
  if (mesh_size < 64) throw InputError("krein_lambda1: mesh must be >= 64");
  const int n = P.dim();
  const int N = n * mesh_size;
  const double T = P.period();
  const double h = T / mesh_size;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(N, N);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < mesh_size; ++i) {
    auto Pi = P.eval_all(i * h);
    for (int al = 0; al < n; ++al) {
      int row = i * n + al;
      K(row, row) = 2.0 / sqr(h);
      int ip = (i + 1) % mesh_size, im = (i + mesh_size - 1) % mesh_size;
      double sp = (i + 1 == mesh_size) ? 1.0 : -1.0; // antiperiodic wrap
      double sm = (i == 0) ? 1.0 : -1.0;
      K(row, ip * n + al) += sp / sqr(h);
      K(row, im * n + al) += sm / sqr(h);
      for (int be = 0; be < n; ++be) M(row, i * n + be) = Pi[(size_t)al * n + be];
    }
  }
  // K is SPD for the antiperiodic wrap. Solve M v = nu K v; positive
  // eigenvalues nu of the pencil give lambda = 1/nu.
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(M, K,
                                                               Eigen::Ax_lBx |
                                                                   Eigen::EigenvaluesOnly);
  double nu_max = es.eigenvalues().maxCoeff();
  KreinResult out;
  out.mesh = mesh_size;
  out.method = "generalized symmetric pencil (M v = nu K v), lambda1 = 1/max nu";
  if (nu_max > 1e-14) out.lambda1 = 1.0 / nu_max;
  return out;
}

namespace {

// Root of the cubic Hermite interpolant of (v0,d0)-(v1,d1) over [0,h],
// assuming a sign change of v across the interval.
double hermite_zero(double v0, double d0, double v1, double d1, double h) {
  auto H = [&](double th) {
    double t2 = th * th, t3 = t2 * th;
    return v0 * (2 * t3 - 3 * t2 + 1) + h * d0 * (t3 - 2 * t2 + th) +
           v1 * (-2 * t3 + 3 * t2) + h * d1 * (t3 - t2);
  };
  double lo = 0.0, hi = 1.0, flo = v0;
  for (int it = 0; it < 70; ++it) {
    double mid = 0.5 * (lo + hi), fm = H(mid);
    if (fm == 0.0) return mid * h;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi) * h;
}

} // namespace

ZeroStructure zero_structure(const ScalarCoefficient& a, BoundaryCondition bc,
                             int steps, double zero_tol) {
  const double T = a.period();
  const double target = (bc == BoundaryCondition::Periodic) ? 2.0 : -2.0;
  Discriminant d0 = scalar_discriminant(a, 0.0, steps);
  if (std::abs(d0.value - target) > std::max(zero_tol, 1e-10))
    throw InputError("zero_structure: 0 is not an eigenvalue within tolerance "
                     "(discriminant offset " +
                     std::to_string(d0.value - target) + ")");

  // Initial data of a nontrivial solution: eigenvector of the monodromy
  // matrix for the multiplier nearest the target/2 (i.e. +-1).
  auto m = monodromy(a, std::max(steps, 64));
  Eigen::EigenSolver<Eigen::Matrix2d> es(m.matrix);
  int pick = 0;
  double best = std::numeric_limits<double>::max();
  for (int i = 0; i < 2; ++i) {
    double dist = std::abs(es.eigenvalues()[i] - std::complex<double>(target / 2, 0));
    if (dist < best) {
      best = dist;
      pick = i;
    }
  }
  double u0 = es.eigenvectors().col(pick)[0].real();
  double du0 = es.eigenvectors().col(pick)[1].real();
  if (std::abs(u0) + std::abs(du0) < 1e-12) {
    u0 = 0.0;
    du0 = 1.0;
  }

  auto brk = a.interior_breakpoints();
  auto traj0 = integrate_hill([&](double t) { return a.eval(t); }, brk, T, u0, du0, steps);

  // Locate a zero of u to shift to the origin (u(0)=0 normalization).
  double shift = 0.0;
  bool found = std::abs(u0) <= 1e-10 * (std::abs(du0) + 1);
  if (!found) {
    for (size_t i = 0; i + 1 < traj0.u.size() && !found; ++i) {
      if (traj0.u[i] == 0.0) {
        shift = traj0.t[i];
        found = true;
      } else if ((traj0.u[i] > 0) != (traj0.u[i + 1] > 0)) {
        double h = traj0.t[i + 1] - traj0.t[i];
        shift = traj0.t[i] +
                hermite_zero(traj0.u[i], traj0.du[i], traj0.u[i + 1], traj0.du[i + 1], h);
        found = true;
      }
    }
  }
  if (!found)
    throw NumericalError("zero_structure: solution has no zeros (index-0 eigenfunction)");

  // Re-integrate from the shifted origin with u(0)=0, u'(0)=1.
  std::vector<double> brk_shifted;
  auto add_brk = [&](double b) {
    double s = b - shift;
    s -= T * std::floor(s / T);
    if (s > 1e-13 * T && s < T * (1 - 1e-13)) brk_shifted.push_back(s);
  };
  for (double b : brk) add_brk(b);
  add_brk(0.0); // the original seam becomes an interior point
  std::sort(brk_shifted.begin(), brk_shifted.end());
  auto q = [&](double t) { return a.eval(shift + t); };
  auto traj = integrate_hill(q, brk_shifted, T, 0.0, 1.0, steps);

  ZeroStructure zs;
  zs.shift = shift;
  zs.zeros_of_u.push_back(0.0);
  for (size_t i = 0; i + 1 < traj.u.size(); ++i) {
    double t0 = traj.t[i], h = traj.t[i + 1] - t0;
    if (traj.u[i] == 0.0) {
      if (i > 0) zs.zeros_of_u.push_back(t0);
    } else if (traj.u[i + 1] != 0.0 && (traj.u[i] > 0) != (traj.u[i + 1] > 0)) {
      zs.zeros_of_u.push_back(t0 + hermite_zero(traj.u[i], traj.du[i], traj.u[i + 1],
                                                traj.du[i + 1], h));
    }
    // zeros of u' via the Hermite of u' (u'' = -q u at the nodes)
    double dd0 = -q(t0) * traj.u[i], dd1 = -q(traj.t[i + 1]) * traj.u[i + 1];
    if ((traj.du[i] > 0) != (traj.du[i + 1] > 0))
      zs.zeros_of_du.push_back(t0 +
                               hermite_zero(traj.du[i], dd0, traj.du[i + 1], dd1, h));
  }
  // The endpoint is a zero up to integration error; avoid double-counting.
  if (zs.zeros_of_u.back() < T - 1e-7 * T) zs.zeros_of_u.push_back(T);
  else zs.zeros_of_u.back() = T;
  zs.m = (int)zs.zeros_of_u.size() - 1;

  zs.interlaced = zs.zeros_of_du.size() == (size_t)zs.m;
  if (zs.interlaced) {
    for (int i = 0; i < zs.m; ++i)
      if (!(zs.zeros_of_u[i] < zs.zeros_of_du[i] && zs.zeros_of_du[i] < zs.zeros_of_u[i + 1]))
        zs.interlaced = false;
  }
  return zs;
}

} // namespace lyap
