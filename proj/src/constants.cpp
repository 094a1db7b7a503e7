#include "lyap/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lyap/common.hpp"
#include "lyap/pde.hpp"
#include "lyap/quadrature.hpp"
#include "lyap/varmin.hpp"

namespace lyap {

namespace {
const double kInf = std::numeric_limits<double>::infinity();
double cot(double x) { return std::cos(x) / std::sin(x); }
} // namespace

const char* to_string(ConstantProblem p) {
  switch (p) {
    case ConstantProblem::PeriodicL1: return "periodic-l1";
    case ConstantProblem::AntiperiodicL1: return "antiperiodic-l1";
    case ConstantProblem::PeriodicLinf: return "periodic-linf";
    case ConstantProblem::AntiperiodicLp: return "antiperiodic-lp";
    case ConstantProblem::NeumannLp: return "neumann-lp";
    default: return "dirichlet-lp";
  }
}

LyapunovConstant gamma1n_periodic(double T, int n) {
  if (!(T > 0)) throw InputError("gamma1n_periodic: T must be positive");
  if (n < 0) throw InputError("gamma1n_periodic: n must be >= 0");
  double value;
  if (n == 0) {
    value = 16.0 / T;
  } else {
    double lam = sqr(2.0 * n * kPi / T); // lambda_{2n-1}
    value = T * lam + (8.0 * kPi * n * (n + 1) / T) * cot(n * kPi / (2.0 * (n + 1)));
  }
  return LyapunovConstant{ConstantProblem::PeriodicL1, T, n, 1.0, value, false};
}

LyapunovConstant gamma1n_antiperiodic(double T, int n) {
  if (!(T > 0)) throw InputError("gamma1n_antiperiodic: T must be positive");
  if (n < 0) throw InputError("gamma1n_antiperiodic: n must be >= 0");
  double value;
  if (n == 0) {
    value = 4.0 / T;
  } else {
    double lam = sqr((2.0 * n - 1) * kPi / T); // ~lambda_{2n-1}
    value = T * lam + (2.0 * kPi * (2 * n - 1) * (2 * n + 1) / T) *
                          cot((2.0 * n - 1) * kPi / (2.0 * (2 * n + 1)));
  }
  return LyapunovConstant{ConstantProblem::AntiperiodicL1, T, n, 1.0, value, false};
}

LyapunovConstant gamma_inf_periodic(double T, int n) {
  if (!(T > 0)) throw InputError("gamma_inf_periodic: T must be positive");
  if (n < 0) throw InputError("gamma_inf_periodic: n must be >= 0");
  double value = sqr(2.0 * (n + 1) * kPi / T); // lambda_{2n+1}
  return LyapunovConstant{ConstantProblem::PeriodicLinf, T, n, kInf, value, true};
}

double mp_singular_integral(double p) {
  const double e = 2.0 * p / (p - 1.0);
  // 1 - s^e = -expm1(e log1p(-d)) with d = 1 - s keeps full accuracy
  // against the endpoint singularity.
  return tanh_sinh_endpoints(
      [e](double, double d_right) {
        return 1.0 / std::sqrt(-std::expm1(e * std::log1p(-d_right)));
      },
      0.0, 1.0, 1e-12);
}

LyapunovConstant mp_antiperiodic(double T, double p, ConstantProblem label) {
  if (!(T > 0)) throw InputError("mp_antiperiodic: T must be positive");
  if (!(p > 1.0) || p == kInf)
    throw InputError("mp_antiperiodic: need finite p > 1 (p = 1: use gamma1n with n = 0)");
  const double I = mp_singular_integral(p);
  const double value = 4.0 * I * I * p /
                       (std::pow(T, 2.0 - 1.0 / p) * std::pow(p - 1.0, 1.0 - 1.0 / p) *
                        std::pow(2.0 * p - 1.0, 1.0 / p));
  return LyapunovConstant{label, T, 0, p, value, true};
}

double beta_ant(double T, double p) {
  if (p == 1.0) return 4.0 / T;
  if (p == kInf) return sqr(kPi / T);
  return mp_antiperiodic(T, p).value;
}

// ---- certificate plumbing ----

void CertificateReport::add(HypothesisCheck h) { hypotheses.push_back(std::move(h)); }

void CertificateReport::finalize(const std::string& conclusion_if_certified) {
  certified = true;
  for (const auto& h : hypotheses)
    if (!h.passed) {
      certified = false;
      reason = h.name;
      break;
    }
  if (certified) conclusion = conclusion_if_certified;
}

namespace {

HypothesisCheck make_check(std::string name, double measured, double bound, bool passed,
                           std::string note = "") {
  return HypothesisCheck{std::move(name), measured, bound, passed, std::move(note)};
}

std::string prec_note(const PrecReport& r) {
  std::ostringstream os;
  os << "sampled at " << r.sample_count << " points; strict fraction "
     << r.strict_fraction << " (sampled verdict, not a proof)";
  return os.str();
}

} // namespace

CertificateReport classical_lyapunov_check(const ScalarCoefficient& a,
                                           const CertifyOptions& opt) {
  const double T = a.period();
  CertificateReport rep;
  rep.theorem = "classical-lyapunov";
  auto prec = check_prec(a, 0.0, opt.prec_samples);
  rep.add(make_check("0 < a (sampled)", prec.min_value, 0.0,
                     prec.result == PrecResult::Holds, prec_note(prec)));
  double m = mean(a);
  rep.add(make_check("int a <= 4/T", m, 4.0 / T, m <= 4.0 / T));
  rep.finalize("stable");
  if (rep.certified && opt.run_oracle) {
    auto v = classify(monodromy(a, opt.oracle_steps));
    rep.oracle_crosscheck = std::string("floquet: ") + to_string(v.cls);
    rep.oracle_agrees = v.cls == StabilityClass::Stable;
  }
  return rep;
}

CertificateReport certify_periodic_zone(const ScalarCoefficient& a, int n,
                                        const CertifyOptions& opt) {
  if (n < 1) throw InputError("certify_periodic_zone: n must be >= 1");
  const double T = a.period();
  const double lam = sqr(2.0 * n * kPi / T);
  const double gamma = gamma1n_periodic(T, n).value;
  CertificateReport rep;
  rep.theorem = "periodic-zone";
  auto prec = check_prec(a, lam, opt.prec_samples);
  rep.add(make_check("lambda_{2n-1} < a (sampled)", prec.min_value, lam,
                     prec.result == PrecResult::Holds, prec_note(prec)));
  double norm1 = lp_norm(a, 1.0, false);
  rep.add(make_check("||a||_1 <= gamma_{1,n}", norm1, gamma, norm1 <= gamma));
  std::ostringstream os;
  os << "lambda_" << 2 * n << "(a) < 0 < lambda_" << 2 * n + 1 << "(a)";
  rep.finalize(os.str());
  if (rep.certified && opt.run_oracle) {
    auto table =
        scalar_eigenvalues(a, BoundaryCondition::Periodic, 2 * n + 2, opt.oracle_steps);
    double lo = table.value(2 * n), hi = table.value(2 * n + 1);
    std::ostringstream oc;
    oc << "spectrum: lambda_" << 2 * n << " = " << lo << ", lambda_" << 2 * n + 1
       << " = " << hi;
    rep.oracle_crosscheck = oc.str();
    rep.oracle_agrees = lo < 0.0 && hi > 0.0;
  }
  return rep;
}

CertificateReport certify_antiperiodic_zone(const ScalarCoefficient& a, int n,
                                            const CertifyOptions& opt) {
  if (n < 1) throw InputError("certify_antiperiodic_zone: n must be >= 1");
  const double T = a.period();
  const double lam = sqr((2.0 * n - 1) * kPi / T);
  const double gamma = gamma1n_antiperiodic(T, n).value;
  CertificateReport rep;
  rep.theorem = "antiperiodic-zone";
  auto prec = check_prec(a, lam, opt.prec_samples);
  rep.add(make_check("~lambda_{2n-1} < a (sampled)", prec.min_value, lam,
                     prec.result == PrecResult::Holds, prec_note(prec)));
  double norm1 = lp_norm(a, 1.0, false);
  rep.add(make_check("||a||_1 <= ~gamma_{1,n}", norm1, gamma, norm1 <= gamma));
  std::ostringstream os;
  os << "~lambda_" << 2 * n << "(a) < 0 < ~lambda_" << 2 * n + 1 << "(a)";
  rep.finalize(os.str());
  if (rep.certified && opt.run_oracle) {
    auto table = scalar_eigenvalues(a, BoundaryCondition::Antiperiodic, 2 * n + 1,
                                    opt.oracle_steps);
    double lo = table.value(2 * n), hi = table.value(2 * n + 1);
    std::ostringstream oc;
    oc << "spectrum: ~lambda_" << 2 * n << " = " << lo << ", ~lambda_" << 2 * n + 1
       << " = " << hi;
    rep.oracle_crosscheck = oc.str();
    rep.oracle_agrees = lo < 0.0 && hi > 0.0;
  }
  return rep;
}

double hill_stability_bound(double k, int p) {
  return k * kPi + std::sqrt(k) * 2.0 * (p + 1) * cot(std::sqrt(k) * kPi / (2.0 * (p + 1)));
}

CertificateReport certify_hill_stability(const ScalarCoefficient& a,
                                         const CertifyOptions& opt) {
  const double T = a.period();
  if (std::abs(T - kPi) > 1e-12 * kPi)
    throw InputError("certify_hill_stability: stated for period pi; rescale first "
                     "(b(s) = (T/pi)^2 a(T s / pi) has period pi)");
  CertificateReport rep;
  rep.theorem = "hill-stability-zone";
  // Sampled essential infimum of a.
  double inf_a = std::numeric_limits<double>::max();
  for (int i = 0; i < opt.prec_samples; ++i)
    inf_a = std::min(inf_a, a.eval(T * (i + 0.5) / opt.prec_samples));
  const double norm1 = lp_norm(a, 1.0, false);

  int best_p = 0;
  double best_k = 0.0, best_bound = -kInf;
  for (int p = 1; sqr((double)p) <= inf_a; ++p) {
    double k = std::min(inf_a, sqr((double)p + 1));
    double bound = hill_stability_bound(k, p);
    if (bound > best_bound) {
      best_bound = bound;
      best_p = p;
      best_k = k;
    }
  }
  rep.add(make_check("exists p in N with p^2 <= inf a", inf_a, 1.0, best_p >= 1,
                     best_p ? "chosen p = " + std::to_string(best_p) +
                                  ", k = " + std::to_string(best_k)
                            : "inf a < 1"));
  if (best_p >= 1) {
    rep.add(make_check("k <= a (sampled)", inf_a, best_k, inf_a >= best_k - 1e-12));
    rep.add(make_check("||a||_1 <= k pi + 2 sqrt(k)(p+1) cot(sqrt(k) pi / (2(p+1)))",
                       norm1, best_bound, norm1 <= best_bound));
  }
  std::ostringstream os;
  os << "mu = 0 in stability zone n = " << best_p / 2;
  rep.finalize(os.str());
  if (rep.certified && opt.run_oracle) {
    auto v = classify(monodromy(a, opt.oracle_steps));
    std::ostringstream oc;
    oc << "floquet: " << to_string(v.cls) << " (discriminant " << v.detail << ")";
    if (v.cls == StabilityClass::Boundary) oc << " [boundary case: consistent, not confirmed]";
    rep.oracle_crosscheck = oc.str();
    rep.oracle_agrees = v.cls != StabilityClass::Unstable;
  }
  return rep;
}

namespace {

// Minimum over samples of the smallest eigenvalue of the symmetric matrix
// field t -> M(t), and PSD witnesses.
double min_eig_over_samples(const MatrixCoefficient& M, int samples, double* scale_out) {
  const int n = M.dim();
  const double T = M.period();
  double min_eig = std::numeric_limits<double>::max();
  double scale = 0.0;
  for (int s = 0; s < samples; ++s) {
    auto vals = M.eval_all(T * (s + 0.5) / samples);
    Eigen::MatrixXd A =
        Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            vals.data(), n, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
    scale = std::max(scale, A.cwiseAbs().maxCoeff());
  }
  if (scale_out) *scale_out = scale;
  return min_eig;
}

} // namespace

CertificateReport certify_krein_system(const MatrixCoefficient& P,
                                       const MatrixCoefficient& B,
                                       const std::vector<double>& p_list,
                                       const CertifyOptions& opt) {
  const int n = P.dim();
  if (B.dim() != n || (int)p_list.size() != n)
    throw InputError("certify_krein_system: dimension mismatch");
  const double T = P.period();
  CertificateReport rep;
  rep.theorem = "krein-stably-bounded";

  // (i) symmetry holds by construction of MatrixCoefficient.
  rep.add(make_check("P symmetric", 0.0, 0.0, true, "by construction"));

  // (ii) no nontrivial constant solutions: sigma_min of the stacked samples.
  const int S = 128;
  double pscale = 0.0;
  {
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
    for (int s = 0; s < S; ++s) {
      auto vals = P.eval_all(T * (s + 0.5) / S);
      Eigen::MatrixXd A = Eigen::Map<
          Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          vals.data(), n, n);
      G += A.transpose() * A;
      pscale = std::max(pscale, A.cwiseAbs().maxCoeff());
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G / S, Eigen::EigenvaluesOnly);
    double sigma = std::sqrt(std::max(0.0, es.eigenvalues().minCoeff()));
    rep.add(make_check("no nontrivial constant solutions (stacked sigma_min)", sigma,
                       1e-8 * std::max(1.0, pscale), sigma > 1e-8 * std::max(1.0, pscale)));
  }

  // (iii) int P positive semidefinite.
  {
    Eigen::MatrixXd Pm(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) Pm(i, j) = mean(P.entry(i, j));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Pm, Eigen::EigenvaluesOnly);
    double floor = -1e-10 * std::max(1.0, Pm.cwiseAbs().maxCoeff());
    rep.add(make_check("int P positive semidefinite (min eig)",
                       es.eigenvalues().minCoeff(), floor,
                       es.eigenvalues().minCoeff() >= floor));
  }

  // (iv) B diagonal and B - P positive semidefinite at all samples.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && lp_norm(B.entry(i, j), kInf, false) > 1e-12)
        throw InputError("certify_krein_system: B must be diagonal");
  {
    std::vector<ScalarCoefficient> diff;
    diff.reserve((size_t)n * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        // (B - P)_{ij} sampled pointwise via a grid; build as samples.
        const int M = 256;
        std::vector<double> vals((size_t)M);
        for (int s = 0; s < M; ++s) {
          double t = T * s / M;
          vals[(size_t)s] = B.entry(i, j).eval(t) - P.entry(i, j).eval(t);
        }
        diff.push_back(ScalarCoefficient::samples(T, std::move(vals)));
      }
    MatrixCoefficient D(n, std::move(diff));
    double scale = 0.0;
    double min_eig = min_eig_over_samples(D, 256, &scale);
    double floor = -1e-10 * std::max(1.0, scale);
    rep.add(make_check("B(t) - P(t) positive semidefinite at samples", min_eig, floor,
                       min_eig >= floor));
  }

  // (v) diagonal Lp bounds against the antiperiodic constants.
  for (int i = 0; i < n; ++i) {
    double p = p_list[(size_t)i];
    if (p < 1.0) throw InputError("certify_krein_system: p must be >= 1");
    double beta = beta_ant(T, p);
    double norm = lp_norm(B.entry(i, i), p, true);
    bool ok = (p == 1.0) ? norm <= beta : norm < beta;
    std::ostringstream nm;
    nm << "||b_" << i + 1 << i + 1 << "^+||_{p=" << p << "} "
       << (p == 1.0 ? "<=" : "<") << " beta_p^ant";
    rep.add(make_check(nm.str(), norm, beta, ok));
  }
  rep.finalize("stably bounded");
  if (rep.certified && opt.run_oracle) {
    auto v = classify(monodromy(P, opt.oracle_steps));
    auto kr = krein_lambda1(P, std::max(64, opt.oracle_mesh));
    std::ostringstream oc;
    oc << "floquet: " << to_string(v.cls) << "; krein lambda1 = ";
    if (kr.lambda1) oc << *kr.lambda1;
    else oc << "none";
    rep.oracle_crosscheck = oc.str();
    rep.oracle_agrees =
        v.cls == StabilityClass::Stable && kr.lambda1 && *kr.lambda1 > 1.0;
  }
  return rep;
}

CertificateReport certify_2x2_coupling(const MatrixCoefficient& P, double p1, double p2,
                                       const CertifyOptions& opt) {
  if (P.dim() != 2) throw InputError("certify_2x2_coupling: dimension must be 2");
  if (!(p1 > 1.0) || !(p2 > 1.0))
    throw InputError("certify_2x2_coupling: exponents must lie in (1, inf]");
  const double T = P.period();
  CertificateReport rep;
  rep.theorem = "coupled-2x2-stably-bounded";
  const auto& p11 = P.entry(0, 0);
  const auto& p12 = P.entry(0, 1);
  const auto& p22 = P.entry(1, 1);

  // [H1] sampled: diagonal nonnegative, det >= 0 everywhere, det > 0 somewhere.
  const int S = opt.prec_samples;
  double min11 = kInf, min22 = kInf, min_det = kInf, max_det = -kInf, scale = 0.0;
  for (int s = 0; s < S; ++s) {
    double t = T * (s + 0.5) / S;
    double a = p11.eval(t), b = p12.eval(t), c = p22.eval(t);
    min11 = std::min(min11, a);
    min22 = std::min(min22, c);
    double det = a * c - b * b;
    min_det = std::min(min_det, det);
    max_det = std::max(max_det, det);
    scale = std::max({scale, std::abs(a), std::abs(b), std::abs(c)});
  }
  double floor = -1e-10 * std::max(1.0, sqr(scale));
  rep.add(make_check("p11 >= 0 (sampled)", min11, 0.0, min11 >= -1e-12 * std::max(1.0, scale)));
  rep.add(make_check("p22 >= 0 (sampled)", min22, 0.0, min22 >= -1e-12 * std::max(1.0, scale)));
  rep.add(make_check("det P >= 0 (sampled)", min_det, floor, min_det >= floor));
  rep.add(make_check("det P > 0 somewhere (sampled)", max_det, 0.0,
                     max_det > 1e-10 * std::max(1.0, sqr(scale))));

  const double beta1 = beta_ant(T, p1);
  const double beta2 = beta_ant(T, p2);
  const double n1 = lp_norm(p11, p1, false);
  rep.add(make_check("||p11||_{p1} < beta_{p1}^ant", n1, beta1, n1 < beta1));
  if (n1 < beta1) {
    const double margin = beta1 - n1;
    auto g = [&](double t) { return p22.eval(t) + sqr(p12.eval(t)) / margin; };
    std::vector<double> brk = p22.interior_breakpoints();
    auto b12 = p12.interior_breakpoints();
    brk.insert(brk.end(), b12.begin(), b12.end());
    double n2;
    if (p2 == kInf) {
      n2 = sup_norm(g, 0.0, T, false);
    } else {
      n2 = std::pow(integrate_power(g, 0.0, T, p2, false, 128, brk), 1.0 / p2);
    }
    rep.add(make_check("||p22 + p12^2/(beta_{p1}^ant - ||p11||_{p1})||_{p2} < beta_{p2}^ant",
                       n2, beta2, n2 < beta2));
  } else {
    rep.add(make_check("||p22 + p12^2/(beta_{p1}^ant - ||p11||_{p1})||_{p2} < beta_{p2}^ant",
                       kInf, beta2, false, "undefined: first bound already fails"));
  }
  rep.finalize("stably bounded");
  if (rep.certified && opt.run_oracle) {
    auto v = classify(monodromy(P, opt.oracle_steps));
    std::ostringstream oc;
    oc << "floquet 4x4: " << to_string(v.cls) << " (max ||mu|-1| = " << v.detail << ")";
    rep.oracle_crosscheck = oc.str();
    rep.oracle_agrees = v.cls == StabilityClass::Stable;
  }
  return rep;
}

CertificateReport certify_elliptic_system(const MatrixField& A, const MatrixField& B,
                                          const std::vector<double>& p_list,
                                          const std::vector<double>& beta_values,
                                          const CertifyOptions& opt) {
  const int n = A.n;
  if (B.n != n || (int)p_list.size() != n)
    throw InputError("certify_elliptic_system: dimension mismatch");
  if (!A.grid.same_layout(B.grid))
    throw InputError("certify_elliptic_system: grid mismatch");
  for (double p : p_list)
    if (!(p > 1.0)) throw InputError("certify_elliptic_system: need p > N/2 = 1");
  CertificateReport rep;
  rep.theorem = "elliptic-system-trivial-solution";
  const int N = A.grid.node_count();
  auto weights = A.grid.weights();

  // Sigma* membership: symmetry, nonnegative quadratic integral, no constant kernel.
  double asym = 0.0;
  for (int node = 0; node < N; ++node)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j)
        asym = std::max(asym, std::abs(A.at(node, i, j) - A.at(node, j, i)));
  rep.add(make_check("A symmetric", asym, 1e-12, asym <= 1e-12));

  {
    Eigen::MatrixXd Im = Eigen::MatrixXd::Zero(n, n);
    double scale = 0.0;
    for (int node = 0; node < N; ++node)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Im(i, j) += weights[(size_t)node] * A.at(node, i, j);
          scale = std::max(scale, std::abs(A.at(node, i, j)));
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Im, Eigen::EigenvaluesOnly);
    double floor = -1e-10 * std::max(1.0, Im.cwiseAbs().maxCoeff());
    rep.add(make_check("int <A k, k> >= 0 (min eig)", es.eigenvalues().minCoeff(), floor,
                       es.eigenvalues().minCoeff() >= floor));
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
    for (int node = 0; node < N; ++node) {
      Eigen::MatrixXd An(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) An(i, j) = A.at(node, i, j);
      G += weights[(size_t)node] * An.transpose() * An;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eg(G / A.grid.area(),
                                                      Eigen::EigenvaluesOnly);
    double sigma = std::sqrt(std::max(0.0, eg.eigenvalues().minCoeff()));
    rep.add(make_check("no nontrivial constant solutions (stacked sigma_min)", sigma,
                       1e-8 * std::max(1.0, scale), sigma > 1e-8 * std::max(1.0, scale)));
  }

  // A(x) <= B(x) pointwise; B diagonal.
  {
    double offdiag = 0.0;
    for (int node = 0; node < N; ++node)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j) offdiag = std::max(offdiag, std::abs(B.at(node, i, j)));
    if (offdiag > 1e-12) throw InputError("certify_elliptic_system: B must be diagonal");
    double min_eig = kInf, scale = 1.0;
    for (int node = 0; node < N; ++node) {
      Eigen::MatrixXd D(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) D(i, j) = B.at(node, i, j) - A.at(node, i, j);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D, Eigen::EigenvaluesOnly);
      min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
      scale = std::max(scale, D.cwiseAbs().maxCoeff());
    }
    double floor = -1e-10 * scale;
    rep.add(make_check("A(x) <= B(x) pointwise (min eig of B - A)", min_eig, floor,
                       min_eig >= floor));
  }

  // Diagonal Lp bounds against beta_p(Omega).
  std::vector<double> betas = beta_values;
  if (betas.empty()) {
    for (int i = 0; i < n; ++i) {
      double p = p_list[(size_t)i];
      if (p == kInf)
        betas.push_back(neumann_lambda1(A.grid));
      else
        betas.push_back(minimize_neumann_grid(p, A.grid).value);
    }
  }
  if ((int)betas.size() != n)
    throw InputError("certify_elliptic_system: beta_values size mismatch");
  for (int i = 0; i < n; ++i) {
    std::vector<double> bi((size_t)N);
    for (int node = 0; node < N; ++node) bi[(size_t)node] = B.at(node, i, i);
    SpatialCoefficient2D field(A.grid, std::move(bi));
    double norm = field.lp_norm(p_list[(size_t)i], true);
    std::ostringstream nm;
    nm << "||b_" << i + 1 << i + 1 << "^+||_{p=" << p_list[(size_t)i]
       << "} < beta_p(Omega)";
    rep.add(make_check(nm.str(), norm, betas[(size_t)i], norm < betas[(size_t)i]));
  }
  rep.finalize("only the trivial solution");
  if (rep.certified && opt.run_oracle) {
    auto op = NeumannOperator::on_grid(A.grid);
    auto sys = detect_nontrivial_system(op, A);
    std::ostringstream oc;
    oc << "discrete sigma_min oracle: system " << to_string(sys.verdict) << " (sigma "
       << sys.sigma_min << ")";
    rep.oracle_crosscheck = oc.str();
    rep.oracle_agrees = sys.verdict == NontrivialVerdict::OnlyTrivial;
  }
  return rep;
}

CertificateReport two_step_disfocality(const ScalarCoefficient& a, double t0,
                                       const CertifyOptions& opt) {
  const double T = a.period();
  if (!(t0 > 0.0 && t0 < T)) throw InputError("two_step_disfocality: need 0 < t0 < T");
  CertificateReport rep;
  rep.theorem = "two-step-disfocality";
  const double sup_all = lp_norm(a, kInf, false);
  rep.add(make_check("a not identically 0", sup_all, 0.0, sup_all > 1e-12));
  const double m = mean(a);
  rep.add(make_check("int a >= 0", m, 0.0, m >= -1e-12 * std::max(1.0, sup_all)));
  const double crit = sqr(kPi) / 4.0;
  const double s1 = lp_norm_on(a, kInf, true, 0.0, t0);
  const double s2 = lp_norm_on(a, kInf, true, t0, T);
  const double lhs = std::max(sqr(t0) * s1, sqr(T - t0) * s2);
  rep.add(make_check("max{t0^2 ||a+||_inf(0,t0), (T-t0)^2 ||a+||_inf(t0,T)} <= pi^2/4",
                     lhs, crit, lhs <= crit));
  // Not both pieces pinned at the critical constants.
  const double c1 = crit / sqr(t0), c2 = crit / sqr(T - t0);
  bool piece1_critical = true, piece2_critical = true;
  const int S = opt.prec_samples;
  for (int s = 0; s < S; ++s) {
    double t1 = t0 * (s + 0.5) / S;
    double t2 = t0 + (T - t0) * (s + 0.5) / S;
    if (std::abs(std::max(a.eval(t1), 0.0) - c1) > 1e-9 * c1) piece1_critical = false;
    if (std::abs(std::max(a.eval(t2), 0.0) - c2) > 1e-9 * c2) piece2_critical = false;
  }
  rep.add(make_check("not both pieces critical", (piece1_critical && piece2_critical) ? 1 : 0,
                     0.0, !(piece1_critical && piece2_critical)));
  rep.finalize("Neumann problem has only the trivial solution");
  if (rep.certified && opt.run_oracle) {
    auto op = NeumannOperator::interval(T, std::max(64, opt.oracle_mesh));
    Eigen::VectorXd av(op.nodes());
    for (int i = 0; i < op.nodes(); ++i) av[i] = a.eval(op.coords_1d()[(size_t)i]);
    auto det = detect_nontrivial_op(op, av);
    std::ostringstream oc;
    oc << "discrete Neumann sigma_min oracle: " << to_string(det.verdict) << " (sigma "
       << det.sigma_min << ")";
    rep.oracle_crosscheck = oc.str();
    rep.oracle_agrees = det.verdict == NontrivialVerdict::OnlyTrivial;
  }
  return rep;
}

} // namespace lyap
