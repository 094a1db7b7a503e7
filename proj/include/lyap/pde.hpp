#ifndef LYAP_PDE_HPP
#define LYAP_PDE_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <string>
#include <vector>

#include "lyap/grid.hpp"

namespace lyap {

// Symmetric n x n matrix field sampled on a grid.
struct MatrixField {
  Grid2D grid;
  int n;
  std::vector<double> entries; // node-major, n*n row-major per node

  MatrixField(Grid2D g, int dim);
  static MatrixField diagonal(const std::vector<SpatialCoefficient2D>& diag);
  double& at(int node, int i, int j) { return entries[((size_t)node * n + i) * n + j]; }
  double at(int node, int i, int j) const { return entries[((size_t)node * n + i) * n + j]; }
  void symmetrize();
};

// Discrete Neumann Laplacian in energy form: v'Kv approximates the Dirichlet
// energy and W holds nodal quadrature weights, so W^-1 K is -Laplacian with
// a second-order boundary closure and zero row sums. Covers 1D intervals,
// tensor rectangles, and polar disc grids (r-weighted, symmetric by the
// mass scaling).
class NeumannOperator {
public:
  static NeumannOperator interval(double length, int cells);
  static NeumannOperator on_grid(const Grid2D& grid);

  int nodes() const { return (int)W_.size(); }
  double h() const { return h_; }
  const Eigen::SparseMatrix<double>& stiffness() const { return K_; }
  const Eigen::VectorXd& weights() const { return W_; }
  // -Laplacian applied nodally: W^-1 K v.
  Eigen::VectorXd neg_laplacian(const Eigen::VectorXd& v) const;
  // Node coordinate along the interval (1D only).
  const std::vector<double>& coords_1d() const { return coords1d_; }

private:
  Eigen::SparseMatrix<double> K_;
  Eigen::VectorXd W_;
  std::vector<double> coords1d_;
  double h_ = 0.0;
};

// First nonzero Neumann eigenvalue by inverse iteration deflated against
// constants; also returns the eigenvector.
struct EigenPair {
  double value;
  Eigen::VectorXd vector;
};
EigenPair neumann_eigenpair(const NeumannOperator& op, int max_iter = 200,
                            double tol = 1e-12);
double neumann_lambda1(const Grid2D& grid);
double neumann_lambda1_interval(double length, int cells);

enum class NontrivialVerdict { Nontrivial, OnlyTrivial, Inconclusive };
const char* to_string(NontrivialVerdict v);

struct DetectResult {
  NontrivialVerdict verdict;
  double sigma_min; // smallest singular value of the scaled symmetric operator
  double scale;     // operator norm estimate the thresholds are relative to
  double tol;
};

// Smallest singular value of -Laplacian - a with Neumann closure; nontrivial
// solutions of the homogeneous problem show up as sigma_min ~ 0.
DetectResult detect_nontrivial(const SpatialCoefficient2D& a, double tol = 1e-6);
DetectResult detect_nontrivial_op(const NeumannOperator& op, const Eigen::VectorXd& a,
                                  double tol = 1e-6);
// Block version for elliptic systems (-Laplacian I - A).
DetectResult detect_nontrivial_system(const NeumannOperator& op, const MatrixField& A,
                                      double tol = 1e-6);

// Solves Laplacian(u) + a u = g with Neumann boundary (the sign convention
// matching the resonant iteration's frozen linear problem). Throws
// NumericalError{NearSingular} when the operator is numerically singular.
Eigen::VectorXd solve_linear_neumann(const NeumannOperator& op, const Eigen::VectorXd& a,
                                     const Eigen::VectorXd& g, double rel_tol = 1e-10);
Eigen::VectorXd solve_linear_neumann_system(const NeumannOperator& op,
                                            const MatrixField& D,
                                            const Eigen::VectorXd& g,
                                            double rel_tol = 1e-10);

struct MeanCounterexample {
  SpatialCoefficient2D a_n;
  double mean;                                // integral of a_n (negative)
  std::vector<std::pair<double, double>> norms; // (p, ||a_n||_p)
  double residual;                            // construction identity residual
};

// a_n = -Lap(u0)/(u0+n): a family with negative mean and vanishing norms,
// each admitting the nontrivial Neumann solution u0 + n.
MeanCounterexample mean_nonnegativity_counterexample(const SpatialCoefficient2D& u0,
                                                     double n,
                                                     const std::vector<double>& p_grid);

} // namespace lyap

#endif
