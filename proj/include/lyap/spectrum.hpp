#ifndef LYAP_SPECTRUM_HPP
#define LYAP_SPECTRUM_HPP

#include <optional>
#include <string>
#include <vector>

#include "lyap/coeffs.hpp"
#include "lyap/floquet.hpp"

namespace lyap {

enum class BoundaryCondition { Periodic, Antiperiodic };
enum class SpectrumMethod { Discriminant, Discretized };

const char* to_string(BoundaryCondition bc);
const char* to_string(SpectrumMethod m);

struct EigEntry {
  int index;        // periodic: 0,1,2,...; antiperiodic: 1,2,...
  double value;
  int multiplicity; // 1 or 2; double eigenvalues occupy two indices
};

struct SpectrumTable {
  BoundaryCondition boundary;
  SpectrumMethod method;
  std::vector<EigEntry> eigenvalues; // one entry per index, ascending
  int steps = 0;                     // discriminant metadata
  int mesh = 0;                      // discretized metadata
  double scan_start = 0.0;
  double scan_step = 0.0;

  double value(int index) const; // by table index (see EigEntry::index)
  int first_index() const { return boundary == BoundaryCondition::Periodic ? 0 : 1; }
};

// Eigenvalues of u'' + (lambda + a)u = 0 as roots of Delta(lambda) = +-2.
// Tangencies of the discriminant are double eigenvalues (multiplicity 2).
SpectrumTable scalar_eigenvalues(const ScalarCoefficient& a, BoundaryCondition bc,
                                 int count, int steps = 4096);

// Independent oracle: dense symmetric finite-difference eigenvalues of
// -u'' - a u with periodic or antiperiodic wrap.
SpectrumTable discretized_scalar_eigenvalues(const ScalarCoefficient& a,
                                             BoundaryCondition bc, int mesh_size,
                                             int count = 8);

struct InterlacingReport {
  bool holds = true;
  std::string violation; // description of the first broken link
  SpectrumTable periodic;
  SpectrumTable antiperiodic;
};

// Checks lambda_0 < lt_1 <= lt_2 < lambda_1 <= lambda_2 < lt_3 <= ... up to
// `depth` quadruples, both spectra from the discriminant method.
InterlacingReport verify_interlacing(const ScalarCoefficient& a, int depth,
                                     int steps = 4096);

struct KreinResult {
  std::optional<double> lambda1; // empty: no positive eigenvalue exists
  int mesh;
  std::string method;
};

// Smallest positive eigenvalue of the antiperiodic problem
// u'' + lambda P(t) u = 0 via the generalized matrix pencil.
KreinResult krein_lambda1(const MatrixCoefficient& P, int mesh_size = 256);

struct ZeroStructure {
  std::vector<double> zeros_of_u;  // includes both endpoints of the shifted period
  std::vector<double> zeros_of_du;
  int m = 0;                       // number of zero gaps of u over one period
  bool interlaced = false;
  double shift = 0.0;              // time shift placing a zero of u at t = 0
};

// Requires 0 to be (numerically) an eigenvalue of the chosen problem.
ZeroStructure zero_structure(const ScalarCoefficient& a, BoundaryCondition bc,
                             int steps = 8192, double zero_tol = 1e-6);

} // namespace lyap

#endif
