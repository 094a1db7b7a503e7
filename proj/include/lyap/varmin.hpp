#ifndef LYAP_VARMIN_HPP
#define LYAP_VARMIN_HPP

#include <string>
#include <vector>

#include "lyap/grid.hpp"

namespace lyap {

struct MinimizationResult {
  double value = 0.0;
  std::vector<double> minimizer;      // node samples at the finest mesh
  double constraint_residual = 0.0;   // 0 when no constraint applies
  std::vector<int> mesh_sizes;
  std::vector<double> mesh_values;    // best value per refinement level
  std::vector<double> trace;          // accepted quotient values, finest mesh
  std::vector<double> start_values;   // per-start minima (multi-start agreement)
  bool converged = true;
  std::string warning;
};

struct VarminOptions {
  int max_iter = 3000;
  int restarts = 3;       // seeded random restarts besides the eigenfunction start
  unsigned seed = 12345;
  bool mesh_ladder = true; // 1D only: solve at mesh/4, mesh/2, mesh
};

// Antiperiodic Rayleigh-type quotient over piecewise-linear v with
// v(0) + v(T) = 0: recovers the best Lp constant M_p. p = 1 uses the
// sup-norm denominator (subgradient at the max sample), p = inf the L2 one.
MinimizationResult minimize_antiperiodic_quotient(double p, double T, int mesh,
                                                  const VarminOptions& opt = {});

// Constrained Neumann quotient on an interval (p > 1 finite or inf; the
// constraint int |v-c|^(2/(p-1))(v-c) = 0 is re-imposed by a scalar shift
// after every step).
MinimizationResult minimize_neumann_1d(double p, double T, int mesh,
                                       const VarminOptions& opt = {});

// Same on a 2D grid (rectangle or disc); approximates beta_p(Omega).
MinimizationResult minimize_neumann_grid(double p, const Grid2D& grid,
                                         const VarminOptions& opt = {});

// Mixed-boundary quotient (int u'^2 - M int u^2)/u(b)^2 over u(a)=0,
// u(b) != 0; reduces to a linear solve. The minimum is sqrt(M)cot(sqrt(M)(b-a)).
struct MixedQuotientResult {
  double value;
  std::vector<double> minimizer; // nodes on [a,b], u(b) normalized to 1
};
MixedQuotientResult mixed_quotient_min(double M, double a, double b, int mesh);

// Minimum of sum cot(z_i) over z in (0,pi/2]^r with sum z_i = S (requires
// r*pi > 2S): closed form r cot(S/r) at the equal split, brute-force
// checked on a grid for r <= 3.
struct CotSumResult {
  double value;
  std::vector<double> argmin;
  bool brute_checked = false;
  double brute_value = 0.0;
};
CotSumResult cot_sum_min(int r, double S, int grid_per_dim = 400);

// Radial log-profile family on the disc showing beta_1 = 0: coefficients
// a_k with nontrivial discrete Neumann solutions and vanishing positive mass.
struct VanishingFamily {
  SpatialCoefficient2D a_k;
  std::vector<double> u_k;
  double positive_l1;
  double mean;
  double residual; // || Lap u + a u || / || u ||, discrete
  double eps, rho, r0;
};
VanishingFamily beta1_vanishing_family(const Grid2D& disc_grid, int k);

struct ScalingLawReport {
  double beta_base = 0.0, beta_scaled = 0.0;
  double ratio = 0.0, expected = 0.0, rel_error = 0.0;
  bool within_tol = true;
  std::string note;
};
// beta_p(r Omega) = r^(N/p-2) beta_p(Omega), checked within 2%.
ScalingLawReport scaling_law_check_1d(double T, double p, double r, int mesh = 256);
ScalingLawReport scaling_law_check_2d(const Grid2D& base, double p, double r);

} // namespace lyap

#endif
