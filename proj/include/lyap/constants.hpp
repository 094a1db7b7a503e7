#ifndef LYAP_CONSTANTS_HPP
#define LYAP_CONSTANTS_HPP

#include <optional>
#include <string>
#include <vector>

#include "lyap/coeffs.hpp"
#include "lyap/floquet.hpp"
#include "lyap/pde.hpp"
#include "lyap/spectrum.hpp"

namespace lyap {

enum class ConstantProblem {
  PeriodicL1,      // gamma_{1,n}
  AntiperiodicL1,  // gamma~_{1,n}
  PeriodicLinf,    // gamma_{inf,n} = lambda_{2n+1}
  AntiperiodicLp,  // M_p
  NeumannLp,       // same constant as AntiperiodicLp for finite p > 1
  DirichletLp,
};

const char* to_string(ConstantProblem p);

struct LyapunovConstant {
  ConstantProblem problem;
  double T;
  int n = 0;        // eigenvalue level for the L1/Linf families
  double p = 1.0;   // exponent for the Lp families
  double value;
  bool attained;
};

// Best L1 constant for the periodic problem at eigenvalue level n.
LyapunovConstant gamma1n_periodic(double T, int n);
// Antiperiodic counterpart.
LyapunovConstant gamma1n_antiperiodic(double T, int n);
// Best Linf-Linf constant: lambda_{2n+1}.
LyapunovConstant gamma_inf_periodic(double T, int n);
// Best Lp constant for the antiperiodic (and Neumann/Dirichlet) problem,
// 1 < p < infinity; the endpoint-singular integral I is computed by
// tanh-sinh quadrature.
LyapunovConstant mp_antiperiodic(double T, double p,
                                 ConstantProblem label = ConstantProblem::AntiperiodicLp);

// beta_p^ant for the full range p in [1, inf]: 4/T at p=1, M_p for finite
// p > 1, pi^2/T^2 at p = inf.
double beta_ant(double T, double p);

// The singular integral I(p) = int_0^1 (1 - s^(2p/(p-1)))^(-1/2) ds.
double mp_singular_integral(double p);

// ---- Certificates ----

struct HypothesisCheck {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool passed = false;
  std::string note;
};

struct CertificateReport {
  std::string theorem;
  std::vector<HypothesisCheck> hypotheses;
  bool certified = false;
  std::string reason;            // first failed hypothesis when not certified
  std::string conclusion;        // machine-readable claim when certified
  std::string oracle_crosscheck; // independent module's verdict, if run
  bool oracle_agrees = true;     // meaningful only when a crosscheck ran

  void add(HypothesisCheck h);
  void finalize(const std::string& conclusion_if_certified);
};

struct CertifyOptions {
  int prec_samples = 1024;
  int oracle_steps = 2048;  // floquet/spectrum oracle resolution
  int oracle_mesh = 128;    // discretized oracles
  bool run_oracle = true;
};

// Classical stability test: 0 < a and int a <= 4/T imply stability.
CertificateReport classical_lyapunov_check(const ScalarCoefficient& a,
                                           const CertifyOptions& opt = {});

// lambda_{2n-1} < a and ||a||_1 <= gamma_{1,n} imply
// lambda_{2n}(a) < 0 < lambda_{2n+1}(a).
CertificateReport certify_periodic_zone(const ScalarCoefficient& a, int n,
                                        const CertifyOptions& opt = {});
CertificateReport certify_antiperiodic_zone(const ScalarCoefficient& a, int n,
                                            const CertifyOptions& opt = {});

// Stability-zone certificate for period pi: searches p in N and a level
// k in [p^2, (p+1)^2] with k <= a and ||a||_1 within the cotangent bound.
CertificateReport certify_hill_stability(const ScalarCoefficient& a,
                                         const CertifyOptions& opt = {});

// The cotangent bound of the period-pi certificate, as a function of k.
double hill_stability_bound(double k, int p);

// Krein stable-boundedness via diagonal Lp majorants.
CertificateReport certify_krein_system(const MatrixCoefficient& P,
                                       const MatrixCoefficient& B,
                                       const std::vector<double>& p_list,
                                       const CertifyOptions& opt = {});

// 2x2 system with explicit coupling control.
CertificateReport certify_2x2_coupling(const MatrixCoefficient& P, double p1,
                                       double p2, const CertifyOptions& opt = {});

// Elliptic system on a 2D grid: A(x) <= B(x) diagonal with Lp bounds below
// beta_p(Omega) implies only the trivial solution. beta_values may be empty
// (then computed from varmin/pde) or supplied to share across a corpus.
CertificateReport certify_elliptic_system(const MatrixField& A, const MatrixField& B,
                                          const std::vector<double>& p_list,
                                          const std::vector<double>& beta_values = {},
                                          const CertifyOptions& opt = {});

// Two-step disfocality certificate for the 1D Neumann problem.
CertificateReport two_step_disfocality(const ScalarCoefficient& a, double t0,
                                       const CertifyOptions& opt = {});

} // namespace lyap

#endif
