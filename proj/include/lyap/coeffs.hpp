#ifndef LYAP_COEFFS_HPP
#define LYAP_COEFFS_HPP

#include <utility>
#include <variant>
#include <vector>

#include "lyap/grid.hpp"

namespace lyap {

// T-periodic scalar coefficient in one of four representations.
class ScalarCoefficient {
public:
  struct Constant {
    double value;
  };
  struct Fourier {
    double a0;
    std::vector<std::pair<double, double>> terms; // (cos_k, sin_k), k = 1..K
  };
  struct Piecewise {
    std::vector<double> breakpoints; // 0 = b0 < b1 < ... < bm = T
    std::vector<double> values;      // value on [b_i, b_{i+1})
  };
  struct Samples {
    std::vector<double> values; // v_0..v_{M-1}; v_M identified with v_0
  };
  using Body = std::variant<Constant, Fourier, Piecewise, Samples>;

  static ScalarCoefficient constant(double T, double c);
  static ScalarCoefficient fourier(double T, double a0,
                                   std::vector<std::pair<double, double>> terms);
  static ScalarCoefficient piecewise(double T, std::vector<double> breakpoints,
                                     std::vector<double> values);
  static ScalarCoefficient samples(double T, std::vector<double> values);

  double period() const { return T_; }
  const Body& body() const { return body_; }
  double eval(double t) const;

  // Points inside (0,T) where the representation is non-smooth (jumps or
  // kinks); integrators align their steps and panels to these.
  std::vector<double> interior_breakpoints() const;

private:
  ScalarCoefficient(double T, Body body);
  double T_;
  Body body_;
};

double eval(const ScalarCoefficient& c, double t);
double mean(const ScalarCoefficient& c);

// (int_0^T |a+|^p)^(1/p), or ess sup a+ for p = inf (|a| when positive_part
// is off). Pass p = infinity via std::numeric_limits<double>::infinity().
double lp_norm(const ScalarCoefficient& c, double p, bool positive_part);

// Same norm restricted to a subinterval [lo,hi] of [0,T].
double lp_norm_on(const ScalarCoefficient& c, double p, bool positive_part,
                  double lo, double hi);

enum class PrecResult { Holds, FailsSomewhere, NowhereStrict };

struct PrecReport {
  PrecResult result;
  int sample_count;
  double min_value;      // min sampled a(t)
  double strict_fraction; // fraction of samples with a(t) > lambda strictly
};

// Sampled check of lambda < a: a(t_i) >= lambda at all samples with strict
// inequality somewhere. A sufficient sampled verdict, not a proof.
PrecReport check_prec(const ScalarCoefficient& c, double lambda,
                      int sample_count = 1024);

// Symmetric n x n matrix of scalar coefficients sharing one period. The
// constructor mirrors the upper triangle so symmetry holds by construction.
class MatrixCoefficient {
public:
  MatrixCoefficient(int n, std::vector<ScalarCoefficient> row_major_entries);
  static MatrixCoefficient diagonal(std::vector<ScalarCoefficient> diag);

  int dim() const { return n_; }
  double period() const;
  const ScalarCoefficient& entry(int i, int j) const;
  // Row-major n*n values at time t.
  std::vector<double> eval_all(double t) const;
  std::vector<double> interior_breakpoints() const;

private:
  int n_;
  std::vector<ScalarCoefficient> entries_;
};

} // namespace lyap

#endif
