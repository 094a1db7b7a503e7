#include "lyap/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lyap/common.hpp"
#include "lyap/quadrature.hpp"

namespace lyap {

ScalarCoefficient::ScalarCoefficient(double T, Body body)
    : T_(T), body_(std::move(body)) {
  if (!(T > 0.0)) throw InputError("coefficient period must be positive");
}

ScalarCoefficient ScalarCoefficient::constant(double T, double c) {
  return ScalarCoefficient(T, Constant{c});
}

ScalarCoefficient ScalarCoefficient::fourier(
    double T, double a0, std::vector<std::pair<double, double>> terms) {
  return ScalarCoefficient(T, Fourier{a0, std::move(terms)});
}

ScalarCoefficient ScalarCoefficient::piecewise(double T,
                                               std::vector<double> breakpoints,
                                               std::vector<double> values) {
  if (breakpoints.size() < 2 || values.size() + 1 != breakpoints.size())
    throw InputError("piecewise: need m+1 breakpoints for m values");
  if (std::abs(breakpoints.front()) > 1e-14 * T ||
      std::abs(breakpoints.back() - T) > 1e-14 * T)
    throw InputError("piecewise: breakpoints must start at 0 and end at T");
  for (size_t i = 0; i + 1 < breakpoints.size(); ++i)
    if (!(breakpoints[i] < breakpoints[i + 1]))
      throw InputError("piecewise: breakpoints must be strictly increasing");
  breakpoints.front() = 0.0;
  breakpoints.back() = T;
  return ScalarCoefficient(T, Piecewise{std::move(breakpoints), std::move(values)});
}

ScalarCoefficient ScalarCoefficient::samples(double T, std::vector<double> values) {
  if (values.size() < 2) throw InputError("samples: need at least 2 samples");
  return ScalarCoefficient(T, Samples{std::move(values)});
}

namespace {

// Reduce t to [0,T).
double wrap(double t, double T) {
  double r = t - T * std::floor(t / T);
  if (r >= T) r -= T;
  if (r < 0.0) r = 0.0;
  return r;
}

} // namespace

double ScalarCoefficient::eval(double t) const {
  if (!std::isfinite(t)) throw InputError("eval: non-finite time");
  const double r = wrap(t, T_);
  struct Visitor {
    double r, T;
    double operator()(const Constant& c) const { return c.value; }
    double operator()(const Fourier& f) const {
      double s = f.a0;
      const double w = 2.0 * kPi / T;
      for (size_t k = 0; k < f.terms.size(); ++k) {
        double arg = w * (double)(k + 1) * r;
        s += f.terms[k].first * std::cos(arg) + f.terms[k].second * std::sin(arg);
      }
      return s;
    }
    double operator()(const Piecewise& p) const {
      auto it = std::upper_bound(p.breakpoints.begin(), p.breakpoints.end(), r);
      size_t i = (size_t)std::distance(p.breakpoints.begin(), it);
      if (i == 0) return p.values.front();
      if (i > p.values.size()) return p.values.back();
      return p.values[i - 1];
    }
    double operator()(const Samples& s) const {
      const size_t m = s.values.size();
      const double h = T / (double)m;
      double pos = r / h;
      size_t i = (size_t)std::floor(pos);
      if (i >= m) i = m - 1;
      double theta = pos - (double)i;
      double v0 = s.values[i];
      double v1 = (i + 1 < m) ? s.values[i + 1] : s.values[0];
      return v0 * (1.0 - theta) + v1 * theta;
    }
  };
  return std::visit(Visitor{r, T_}, body_);
}

std::vector<double> ScalarCoefficient::interior_breakpoints() const {
  std::vector<double> out;
  if (const auto* p = std::get_if<Piecewise>(&body_)) {
    out.assign(p->breakpoints.begin() + 1, p->breakpoints.end() - 1);
  } else if (const auto* s = std::get_if<Samples>(&body_)) {
    const size_t m = s->values.size();
    out.reserve(m - 1);
    for (size_t i = 1; i < m; ++i) out.push_back(T_ * (double)i / (double)m);
  }
  return out;
}

double eval(const ScalarCoefficient& c, double t) { return c.eval(t); }

namespace {

const double kInf = std::numeric_limits<double>::infinity();

int panels_for(const ScalarCoefficient& c) {
  if (const auto* f = std::get_if<ScalarCoefficient::Fourier>(&c.body()))
    return std::max<int>(64, 16 * (int)f->terms.size());
  return 64;
}

double lp_norm_impl(const ScalarCoefficient& c, double p, bool positive_part,
                    double lo, double hi) {
  if (p < 1.0) throw InputError("lp_norm: p must be >= 1");
  auto clip = [&](double t) { return std::min(hi, std::max(lo, t)); };

  if (p == kInf) {
    if (const auto* k = std::get_if<ScalarCoefficient::Constant>(&c.body()))
      return positive_part ? std::max(k->value, 0.0) : std::abs(k->value);
    if (const auto* pw = std::get_if<ScalarCoefficient::Piecewise>(&c.body())) {
      double best = 0.0;
      for (size_t i = 0; i < pw->values.size(); ++i) {
        if (pw->breakpoints[i + 1] <= lo || pw->breakpoints[i] >= hi) continue;
        double v = positive_part ? std::max(pw->values[i], 0.0) : std::abs(pw->values[i]);
        best = std::max(best, v);
      }
      return best;
    }
    return sup_norm([&](double t) { return c.eval(t); }, lo, hi, positive_part);
  }

  // finite p
  if (const auto* k = std::get_if<ScalarCoefficient::Constant>(&c.body())) {
    double v = positive_part ? std::max(k->value, 0.0) : std::abs(k->value);
    return v * std::pow(hi - lo, 1.0 / p);
  }
  if (const auto* pw = std::get_if<ScalarCoefficient::Piecewise>(&c.body())) {
    double s = 0.0;
    for (size_t i = 0; i < pw->values.size(); ++i) {
      double a = clip(pw->breakpoints[i]), b = clip(pw->breakpoints[i + 1]);
      if (b <= a) continue;
      double v = positive_part ? std::max(pw->values[i], 0.0) : std::abs(pw->values[i]);
      s += std::pow(v, p) * (b - a);
    }
    return std::pow(s, 1.0 / p);
  }
  std::vector<double> brk;
  for (double t : c.interior_breakpoints())
    if (t > lo && t < hi) brk.push_back(t);
  double integral = integrate_power([&](double t) { return c.eval(t); }, lo, hi, p,
                                    positive_part, panels_for(c), brk);
  return std::pow(integral, 1.0 / p);
}

} // namespace

double lp_norm(const ScalarCoefficient& c, double p, bool positive_part) {
  return lp_norm_impl(c, p, positive_part, 0.0, c.period());
}

double lp_norm_on(const ScalarCoefficient& c, double p, bool positive_part,
                  double lo, double hi) {
  if (!(lo >= 0.0 && hi <= c.period() && lo < hi))
    throw InputError("lp_norm_on: need 0 <= lo < hi <= T");
  return lp_norm_impl(c, p, positive_part, lo, hi);
}

double mean(const ScalarCoefficient& c) {
  if (const auto* k = std::get_if<ScalarCoefficient::Constant>(&c.body()))
    return k->value * c.period();
  if (const auto* pw = std::get_if<ScalarCoefficient::Piecewise>(&c.body())) {
    double s = 0.0;
    for (size_t i = 0; i < pw->values.size(); ++i)
      s += pw->values[i] * (pw->breakpoints[i + 1] - pw->breakpoints[i]);
    return s;
  }
  return composite_gl([&](double t) { return c.eval(t); }, 0.0, c.period(),
                      panels_for(c), c.interior_breakpoints());
}

PrecReport check_prec(const ScalarCoefficient& c, double lambda, int sample_count) {
  if (sample_count < 16) throw InputError("check_prec: sample_count must be >= 16");
  const double T = c.period();
  const double tol = 1e-12 * std::max(1.0, std::abs(lambda));
  int strict = 0;
  bool fails = false;
  double min_v = std::numeric_limits<double>::max();
  for (int i = 0; i < sample_count; ++i) {
    double t = T * (i + 0.5) / sample_count;
    double v = c.eval(t);
    min_v = std::min(min_v, v);
    if (v < lambda - tol) fails = true;
    if (v > lambda + tol) ++strict;
  }
  PrecResult r = fails             ? PrecResult::FailsSomewhere
                 : (strict == 0)   ? PrecResult::NowhereStrict
                                   : PrecResult::Holds;
  return PrecReport{r, sample_count, min_v, (double)strict / sample_count};
}

MatrixCoefficient::MatrixCoefficient(int n, std::vector<ScalarCoefficient> entries)
    : n_(n), entries_(std::move(entries)) {
  if (n_ < 1 || entries_.size() != (size_t)(n_ * n_))
    throw InputError("MatrixCoefficient: need n*n entries");
  const double T = entries_[0].period();
  for (const auto& e : entries_)
    if (std::abs(e.period() - T) > 1e-12 * T)
      throw InputError("MatrixCoefficient: entries must share one period");
  // Mirror the upper triangle.
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < i; ++j) entries_[(size_t)i * n_ + j] = entries_[(size_t)j * n_ + i];
}

MatrixCoefficient MatrixCoefficient::diagonal(std::vector<ScalarCoefficient> diag) {
  const int n = (int)diag.size();
  if (n < 1) throw InputError("MatrixCoefficient::diagonal: empty diagonal");
  const double T = diag[0].period();
  std::vector<ScalarCoefficient> entries;
  entries.reserve((size_t)n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      entries.push_back(i == j ? diag[i] : ScalarCoefficient::constant(T, 0.0));
  return MatrixCoefficient(n, std::move(entries));
}

double MatrixCoefficient::period() const { return entries_[0].period(); }

const ScalarCoefficient& MatrixCoefficient::entry(int i, int j) const {
  return entries_[(size_t)i * n_ + j];
}

std::vector<double> MatrixCoefficient::eval_all(double t) const {
  std::vector<double> out((size_t)n_ * n_);
  for (size_t k = 0; k < out.size(); ++k) out[k] = entries_[k].eval(t);
  return out;
}

std::vector<double> MatrixCoefficient::interior_breakpoints() const {
  std::vector<double> out;
  for (const auto& e : entries_) {
    auto b = e.interior_breakpoints();
    out.insert(out.end(), b.begin(), b.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---- Grid2D ----

Grid2D Grid2D::rectangle(double a_len, double b_len, int nx, int ny) {
  if (!(a_len > 0) || !(b_len > 0) || nx < 2 || ny < 2)
    throw InputError("Grid2D::rectangle: bad dimensions");
  if (std::abs(a_len / nx - b_len / ny) > 1e-10 * (a_len / nx))
    throw InputError("Grid2D::rectangle: spacing must be uniform (a_len/nx == b_len/ny)");
  Grid2D g;
  g.domain_ = RectangleDomain{a_len, b_len};
  g.n1_ = nx;
  g.n2_ = ny;
  return g;
}

Grid2D Grid2D::disc(double radius, int nr, int ntheta) {
  if (!(radius > 0) || nr < 2 || ntheta < 8)
    throw InputError("Grid2D::disc: bad dimensions");
  Grid2D g;
  g.domain_ = DiscDomain{radius};
  g.n1_ = nr;
  g.n2_ = ntheta;
  return g;
}

double Grid2D::h() const {
  if (is_disc()) return disc_domain().radius / n1_;
  return rect().a_len / n1_;
}

int Grid2D::node_count() const {
  if (is_disc()) return 1 + n1_ * n2_;
  return (n1_ + 1) * (n2_ + 1);
}

std::pair<double, double> Grid2D::node(int idx) const {
  if (is_disc()) {
    if (idx == 0) return {0.0, 0.0};
    const int j = 1 + (idx - 1) / n2_;
    const int k = (idx - 1) % n2_;
    const double r = j * h();
    const double th = 2.0 * kPi * k / n2_;
    return {r * std::cos(th), r * std::sin(th)};
  }
  const int i = idx % (n1_ + 1);
  const int j = idx / (n1_ + 1);
  return {rect().a_len * i / n1_, rect().b_len * j / n2_};
}

std::vector<double> Grid2D::weights() const {
  std::vector<double> w((size_t)node_count());
  if (is_disc()) {
    const double hr = h();
    const double hth = 2.0 * kPi / n2_;
    const double R = disc_domain().radius;
    w[0] = kPi * sqr(0.5 * hr);
    for (int j = 1; j <= n1_; ++j) {
      double wj;
      if (j < n1_) {
        wj = (j * hr) * hr * hth;
      } else {
        wj = 0.5 * (sqr(R) - sqr(R - 0.5 * hr)) * hth;
      }
      for (int k = 0; k < n2_; ++k) w[1 + (size_t)(j - 1) * n2_ + k] = wj;
    }
    return w;
  }
  const double hx = rect().a_len / n1_, hy = rect().b_len / n2_;
  for (int j = 0; j <= n2_; ++j) {
    const double wy = (j == 0 || j == n2_) ? 0.5 * hy : hy;
    for (int i = 0; i <= n1_; ++i) {
      const double wx = (i == 0 || i == n1_) ? 0.5 * hx : hx;
      w[(size_t)j * (n1_ + 1) + i] = wx * wy;
    }
  }
  return w;
}

double Grid2D::area() const {
  if (is_disc()) return kPi * sqr(disc_domain().radius);
  return rect().a_len * rect().b_len;
}

bool Grid2D::same_layout(const Grid2D& other) const {
  if (is_disc() != other.is_disc() || n1_ != other.n1_ || n2_ != other.n2_)
    return false;
  if (is_disc())
    return std::abs(disc_domain().radius - other.disc_domain().radius) < 1e-12;
  return std::abs(rect().a_len - other.rect().a_len) < 1e-12 &&
         std::abs(rect().b_len - other.rect().b_len) < 1e-12;
}

SpatialCoefficient2D::SpatialCoefficient2D(Grid2D g, std::vector<double> s)
    : grid(std::move(g)), samples(std::move(s)) {
  if ((int)samples.size() != grid.node_count())
    throw InputError("SpatialCoefficient2D: sample count does not match grid");
}

SpatialCoefficient2D SpatialCoefficient2D::sample(
    const Grid2D& g, const std::function<double(double, double)>& f) {
  std::vector<double> s((size_t)g.node_count());
  for (int i = 0; i < g.node_count(); ++i) {
    auto [x, y] = g.node(i);
    s[(size_t)i] = f(x, y);
  }
  return SpatialCoefficient2D(g, std::move(s));
}

SpatialCoefficient2D SpatialCoefficient2D::constant(const Grid2D& g, double c) {
  return SpatialCoefficient2D(g, std::vector<double>((size_t)g.node_count(), c));
}

double SpatialCoefficient2D::integral() const {
  auto w = grid.weights();
  double s = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) s += w[i] * samples[i];
  return s;
}

double SpatialCoefficient2D::lp_norm(double p, bool positive_part) const {
  if (p < 1.0) throw InputError("lp_norm: p must be >= 1");
  auto val = [&](double v) { return positive_part ? std::max(v, 0.0) : std::abs(v); };
  if (p == std::numeric_limits<double>::infinity()) {
    double best = 0.0;
    for (double v : samples) best = std::max(best, val(v));
    return best;
  }
  auto w = grid.weights();
  double s = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) s += w[i] * std::pow(val(samples[i]), p);
  return std::pow(s, 1.0 / p);
}

} // namespace lyap
