#ifndef LYAP_GRID_HPP
#define LYAP_GRID_HPP

#include <functional>
#include <utility>
#include <variant>
#include <vector>

namespace lyap {

struct RectangleDomain {
  double a_len = 1.0;
  double b_len = 1.0;
};

struct DiscDomain {
  double radius = 1.0;
};

using Domain2D = std::variant<RectangleDomain, DiscDomain>;

// Structured 2D grid: tensor nodes on a rectangle, or a polar grid on a disc
// (one center node, nr rings of ntheta sectors).
class Grid2D {
public:
  static Grid2D rectangle(double a_len, double b_len, int nx, int ny);
  static Grid2D square(double side, int n) { return rectangle(side, side, n, n); }
  static Grid2D disc(double radius, int nr, int ntheta);

  const Domain2D& domain() const { return domain_; }
  bool is_disc() const { return std::holds_alternative<DiscDomain>(domain_); }
  const RectangleDomain& rect() const { return std::get<RectangleDomain>(domain_); }
  const DiscDomain& disc_domain() const { return std::get<DiscDomain>(domain_); }

  // rectangle: cells per side; disc: rings / sectors
  int n1() const { return n1_; }
  int n2() const { return n2_; }

  double h() const;        // grid spacing (x-spacing or radial spacing)
  int node_count() const;
  std::pair<double, double> node(int idx) const; // cartesian coordinates
  std::vector<double> weights() const;           // nodal quadrature weights
  double area() const;

  bool same_layout(const Grid2D& other) const;

private:
  Domain2D domain_;
  int n1_ = 0, n2_ = 0;
};

// Grid-aligned scalar field samples.
struct SpatialCoefficient2D {
  Grid2D grid;
  std::vector<double> samples;

  SpatialCoefficient2D(Grid2D g, std::vector<double> s);
  static SpatialCoefficient2D sample(const Grid2D& g,
                                     const std::function<double(double, double)>& f);
  static SpatialCoefficient2D constant(const Grid2D& g, double c);

  double integral() const;
  double lp_norm(double p, bool positive_part) const;
};

} // namespace lyap

#endif
