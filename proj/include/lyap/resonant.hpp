#ifndef LYAP_RESONANT_HPP
#define LYAP_RESONANT_HPP

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lyap/constants.hpp"
#include "lyap/grid.hpp"

namespace lyap {

// Scalar field over the domain; 1D domains pass y = 0.
struct Field {
  std::function<double(double, double)> fn;
  static Field constant(double c) {
    return Field{[c](double, double) { return c; }};
  }
  static Field of1d(std::function<double(double)> f) {
    return Field{[f = std::move(f)](double x, double) { return f(x); }};
  }
  double operator()(double x, double y) const { return fn(x, y); }
};

struct Interval1D {
  double length;
  int cells;
};
using ResonantDomain = std::variant<Interval1D, Grid2D>;

// Tabulated nonlinearity on an (x, u) box, bilinear interpolation, clamped
// at the edges. 1D domains only.
struct CustomTable {
  double length = 1.0;               // x in [0, length]
  std::vector<double> x_grid;        // ascending
  std::vector<double> u_grid;        // ascending
  std::vector<double> f_vals;        // row-major [ix][iu]: G_u
  std::vector<double> fu_vals;       // row-major [ix][iu]: G_uu
  double eval_f(double x, double u) const;
  double eval_fu(double x, double u) const;
};

// One component of the (component-diagonal) nonlinearity G_u.
struct ComponentSpec {
  enum class Kind { LinearInU, SaturatedBlend, Custom } kind;
  Field b = Field::constant(0.0);       // LinearInU / SaturatedBlend
  double s0 = 1.0;                      // SaturatedBlend saturation scale
  Field forcing = Field::constant(0.0); // additive h(x) (SaturatedBlend)
  CustomTable table;                    // Custom

  double f(double x, double y, double u) const;   // G_u component
  double fu(double x, double y, double u) const;  // G_uu diagonal entry
};

struct NonlinearitySpec {
  std::vector<ComponentSpec> components;
  std::vector<Field> bound_lower; // diagonal A(x)
  std::vector<Field> bound_upper; // diagonal B(x)
  std::vector<double> p_list;
  int dim() const { return (int)components.size(); }
};

struct HypothesesOptions {
  int x_samples = 256;
  int u_samples = 33;
  double u_box = 10.0;   // sandwich sampled on u in [-u_box, u_box]
  double s0_window = 1e6;
};

// Verifies the Lp bounds, positive-definite integral of A, the sampled
// sandwich A <= G_uu <= B, and (scalar case) the existence of s0 with
// int f(x, s0) dx = 0 by monotone bisection.
CertificateReport check_hypotheses(const NonlinearitySpec& spec,
                                   const ResonantDomain& domain,
                                   const HypothesesOptions& opt = {});

struct SolveResult {
  std::vector<std::vector<double>> u; // per component, node values
  int iterations = 0;
  double residual = 0.0;     // max_i |Lap u + G_u(x,u)|_i on the grid
  double residual_rel = 0.0; // residual / max(1, scale of the equation)
  bool converged = true;
  bool damped = false;
  std::string warning;
};

struct SolveOptions {
  int max_iter = 200;
  double tol = 1e-10;        // fixed-point increment tolerance (sup norm)
  double linear_tol = 1e-10; // linear solver relative residual
  bool require_hypotheses = true;
};

// Fixed-point iteration y -> u_y where u_y solves the frozen linear problem
// Lap u + D(x,y) u + G_u(x,0) = 0 with D(x,z) = int_0^1 G_uu(x, theta z)
// d theta (16-point Gauss-Legendre in theta).
SolveResult solve(const NonlinearitySpec& spec, const ResonantDomain& domain,
                  const SolveOptions& opt = {});
// Same, from a caller-supplied initial field.
SolveResult solve_from(const NonlinearitySpec& spec, const ResonantDomain& domain,
                       const std::vector<std::vector<double>>& y0,
                       const SolveOptions& opt = {});

struct UniquenessReport {
  int starts = 0;
  double max_spread = 0.0; // max pairwise sup-norm distance between solutions
  std::vector<double> residuals;
  bool all_converged = true;
};

UniquenessReport uniqueness_probe(const NonlinearitySpec& spec,
                                  const ResonantDomain& domain, int starts,
                                  const SolveOptions& opt = {}, unsigned seed = 2024);

} // namespace lyap

#endif
