#include "lyap/quadrature.hpp"
#include "lyap/common.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace lyap {

namespace {

struct GLRule {
  std::array<double, 16> x; // nodes on [-1,1]
  std::array<double, 16> w;
};

// Nodes/weights via Newton on the Legendre polynomial; computed once.
const GLRule& gl16() {
  static const GLRule rule = [] {
    GLRule r{};
    const int n = 16;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      r.x[i] = x;
      r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
  }();
  return rule;
}

} // namespace

const UnitRule& gl16_unit() {
  static const UnitRule r = [] {
    UnitRule u{};
    const GLRule& g = gl16();
    for (int i = 0; i < 16; ++i) {
      u.node[i] = 0.5 * (g.x[i] + 1.0);
      u.weight[i] = 0.5 * g.w[i];
    }
    return u;
  }();
  return r;
}

double gauss_legendre(const RealFn& f, double a, double b) {
  const GLRule& r = gl16();
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 16; ++i) s += r.w[i] * f(mid + half * r.x[i]);
  return s * half;
}

namespace {

std::vector<double> panel_edges(double a, double b, int panels,
                                const std::vector<double>& breakpoints) {
  std::vector<double> edges;
  edges.push_back(a);
  for (double t : breakpoints)
    if (t > a + 1e-15 && t < b - 1e-15) edges.push_back(t);
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [&](double u, double v) {
                            return std::abs(u - v) < 1e-14 * (b - a);
                          }),
              edges.end());
  // Subdivide so the total panel count reaches the request and no panel
  // exceeds (b-a)/panels.
  std::vector<double> out;
  const double hmax = (b - a) / panels;
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    double lo = edges[i], hi = edges[i + 1];
    int k = std::max(1, (int)std::ceil((hi - lo) / hmax - 1e-12));
    for (int j = 0; j < k; ++j) out.push_back(lo + (hi - lo) * j / k);
  }
  out.push_back(b);
  return out;
}

} // namespace

double composite_gl(const RealFn& f, double a, double b, int panels,
                    const std::vector<double>& breakpoints) {
  auto edges = panel_edges(a, b, panels, breakpoints);
  double s = 0.0;
  for (size_t i = 0; i + 1 < edges.size(); ++i)
    s += gauss_legendre(f, edges[i], edges[i + 1]);
  return s;
}

double bisect(const RealFn& f, double lo, double hi, double xtol, int max_iter) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) throw NumericalError("bisect: endpoints do not bracket a root");
  for (int it = 0; it < max_iter && hi - lo > xtol * std::max(1.0, std::abs(lo)); ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> sign_change_roots(const RealFn& f, double a, double b,
                                      int scan, double tol) {
  std::vector<double> roots;
  double prev_t = a, prev_f = f(a);
  for (int i = 1; i <= scan; ++i) {
    double t = a + (b - a) * i / scan;
    double ft = f(t);
    if (prev_f == 0.0) {
      roots.push_back(prev_t);
    } else if (prev_f * ft < 0.0) {
      roots.push_back(bisect(f, prev_t, t, tol));
    }
    prev_t = t;
    prev_f = ft;
  }
  if (prev_f == 0.0) roots.push_back(prev_t);
  return roots;
}

double integrate_power(const RealFn& f, double a, double b, double p,
                       bool positive_part, int panels,
                       const std::vector<double>& breakpoints) {
  // Kinks of |f|^p or (f+)^p sit at the zeros of f; add them as panel edges.
  std::vector<double> edges = breakpoints;
  auto zeros = sign_change_roots(f, a, b, std::max(4 * panels, 256), 1e-12);
  edges.insert(edges.end(), zeros.begin(), zeros.end());
  RealFn g;
  if (positive_part) {
    g = [&f, p](double t) {
      double v = f(t);
      return v > 0.0 ? std::pow(v, p) : 0.0;
    };
  } else {
    g = [&f, p](double t) { return std::pow(std::abs(f(t)), p); };
  }
  return composite_gl(g, a, b, panels, edges);
}

double sup_norm(const RealFn& f, double a, double b, bool positive_part,
                int samples) {
  auto g = [&](double t) {
    double v = f(t);
    return positive_part ? std::max(v, 0.0) : std::abs(v);
  };
  int best = 0;
  double best_v = g(a);
  for (int i = 1; i <= samples; ++i) {
    double v = g(a + (b - a) * i / samples);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  // Golden-section refinement in the bracketing cell pair.
  double lo = a + (b - a) * std::max(0, best - 1) / samples;
  double hi = a + (b - a) * std::min(samples, best + 1) / samples;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = g(c), fd = g(d);
  for (int it = 0; it < 80 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++it) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = g(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = g(d);
    }
  }
  return std::max(best_v, std::max(fc, fd));
}

double tanh_sinh_endpoints(const EndpointFn& f, double a, double b, double rel_tol) {
  // x = tanh(pi/2 sinh t) on (-1,1); endpoint distances computed in the
  // exp(-2 sigma) form so they stay accurate far below machine epsilon of
  // the abscissa itself.
  const double half = 0.5 * (b - a);
  auto eval = [&](double t) {
    const double sigma = 0.5 * kPi * std::sinh(t);
    const double q = std::exp(-2.0 * std::abs(sigma));
    const double dist_small = half * 2.0 * q / (1.0 + q); // to the near endpoint
    const double dist_large = (b - a) - dist_small;
    if (dist_small <= 0.0) return 0.0;
    const double w = 0.5 * kPi * std::cosh(t) / sqr(std::cosh(sigma));
    const double d_left = (t >= 0) ? dist_large : dist_small;
    const double d_right = (t >= 0) ? dist_small : dist_large;
    double fv = f(d_left, d_right);
    if (!std::isfinite(fv)) return 0.0;
    return fv * w;
  };
  const double tmax = 6.5;
  double h = 1.0;
  double sum = eval(0.0);
  for (int k = 1; k * h <= tmax; ++k) sum += eval(k * h) + eval(-k * h);
  double result = sum * h;
  for (int level = 1; level <= 12; ++level) {
    h *= 0.5;
    double add = 0.0;
    for (int k = 1; k * h <= tmax; k += 2) add += eval(k * h) + eval(-k * h);
    sum += add;
    double next = sum * h;
    if (level >= 3 && std::abs(next - result) <= rel_tol * std::abs(next) + 1e-300) {
      result = next;
      break;
    }
    result = next;
  }
  return result * half;
}

double tanh_sinh(const RealFn& f, double a, double b, double rel_tol) {
  return tanh_sinh_endpoints(
      [&](double dl, double dr) { return f(dl < dr ? a + dl : b - dr); }, a, b,
      rel_tol);
}

} // namespace lyap
