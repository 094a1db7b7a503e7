#ifndef LYAP_FLOQUET_HPP
#define LYAP_FLOQUET_HPP

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lyap/coeffs.hpp"

namespace lyap {

// Fundamental matrix of u'' + A(t)u = 0 over one period with identity
// initial data, written as the first-order system on (u, u').
struct MonodromyResult {
  int n = 1;
  Eigen::MatrixXd matrix;                     // 2n x 2n at t = T
  std::vector<std::complex<double>> multipliers;
  double discriminant = 0.0;                  // trace; scalar case only
  int step_count = 0;
  double estimated_error = 0.0;               // step-halving (Richardson)
};

enum class StabilityClass { Stable, Unstable, Boundary };

struct StabilityVerdict {
  StabilityClass cls;
  double detail;     // n=1: discriminant; n>1: max | |mu|-1 |
  bool semisimple;   // rank test at tolerance (meaningful at Boundary)
  double tol;
};

const char* to_string(StabilityClass c);

MonodromyResult monodromy(const ScalarCoefficient& a, int steps = 4096);
MonodromyResult monodromy(const MatrixCoefficient& A, int steps = 4096);

StabilityVerdict classify(const MonodromyResult& m, double tol = 1e-7);

// Discriminant of u'' + (lambda + a)u = 0 and its derivative in lambda,
// from the variational system integrated alongside.
struct Discriminant {
  double value;
  double dvalue;
};
Discriminant scalar_discriminant(const ScalarCoefficient& a, double lambda,
                                 int steps);

// Dense scalar IVP solve of u'' + q(t)u = 0 over [0,T]; returns the RK4
// trajectory at the step nodes (q must be smooth between breakpoints).
struct ScalarTrajectory {
  std::vector<double> t, u, du;
};
ScalarTrajectory integrate_hill(const std::function<double(double)>& q,
                                const std::vector<double>& breakpoints, double T,
                                double u0, double du0, int steps);

// Parameter-plane sweep. Cells are independent; rows are alpha, columns
// beta, and the output ordering is row-major regardless of thread count.
struct SweepCell {
  std::optional<StabilityVerdict> verdict;
  double discriminant = 0.0;
  std::string error; // nonempty if the cell's integration failed
};

struct SweepResult {
  std::vector<double> alpha, beta;
  std::vector<SweepCell> cells; // row-major: ia * beta.size() + ib
  const SweepCell& at(size_t ia, size_t ib) const { return cells[ia * beta.size() + ib]; }
};

using CoeffTemplate = std::function<ScalarCoefficient(double alpha, double beta)>;

SweepResult sweep(const CoeffTemplate& tmpl, const std::vector<double>& alpha_grid,
                  const std::vector<double>& beta_grid, int steps = 1024,
                  int threads = 1);

} // namespace lyap

#endif
