#ifndef LYAP_QUADRATURE_HPP
#define LYAP_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace lyap {

using RealFn = std::function<double(double)>;

// 16-point Gauss-Legendre rule on [a,b].
double gauss_legendre(const RealFn& f, double a, double b);

// Composite Gauss-Legendre over [a,b] split into `panels` equal panels,
// with extra panel boundaries at the given breakpoints (clipped to [a,b]).
double composite_gl(const RealFn& f, double a, double b, int panels,
                    const std::vector<double>& breakpoints = {});

// Roots of f in [a,b] located by scanning `scan` subintervals for sign
// changes and bisecting each bracket to an interval of width `tol`.
std::vector<double> sign_change_roots(const RealFn& f, double a, double b,
                                      int scan, double tol = 1e-12);

// Composite Gauss-Legendre of g(f(t)) where g is |.|^p of the positive part
// or of the absolute value: panels are additionally split at sign changes of
// f so every panel sees a smooth integrand.
double integrate_power(const RealFn& f, double a, double b, double p,
                       bool positive_part, int panels,
                       const std::vector<double>& breakpoints = {});

// Essential sup of f+ (or |f|) over [a,b]: dense scan plus golden-section
// refinement around the best sample.
double sup_norm(const RealFn& f, double a, double b, bool positive_part,
                int samples = 8192);

// tanh-sinh (double-exponential) quadrature on (a,b); handles integrable
// endpoint singularities such as inverse square roots. Runs level doubling
// until the result changes by less than rel_tol.
double tanh_sinh(const RealFn& f, double a, double b, double rel_tol = 1e-12);

// Same, but the integrand receives stable distances to the endpoints
// (d_left = u - a, d_right = b - u) so it can evaluate near-singular
// expressions without cancellation. The abscissa is a + d_left = b - d_right.
using EndpointFn = std::function<double(double d_left, double d_right)>;
double tanh_sinh_endpoints(const EndpointFn& f, double a, double b,
                           double rel_tol = 1e-12);

// Bisection for f(x)=0 on a bracket [lo,hi] with f(lo)*f(hi)<=0.
double bisect(const RealFn& f, double lo, double hi, double xtol = 1e-13,
              int max_iter = 200);

// 16-point Gauss-Legendre nodes/weights mapped to [0,1].
struct UnitRule {
  double node[16];
  double weight[16];
};
const UnitRule& gl16_unit();

} // namespace lyap

#endif
