// Command-line front door: parse problem files, dispatch to the numerical
// modules, and emit JSON/CSV/SVG reports.
#include <CLI11.hpp>

#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "lyap/common.hpp"
#include "lyap/constants.hpp"
#include "lyap/json_io.hpp"
#include "lyap/resonant.hpp"
#include "lyap/selftest.hpp"
#include "lyap/varmin.hpp"

using namespace lyap;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

double parse_p(const std::string& s) {
  if (s == "inf" || s == "infinity") return kInf;
  return std::stod(s);
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw InputError("parse error in " + path + ": " + e.what());
  }
  return j;
}

// "lo:hi:count" inclusive grid
std::vector<double> parse_grid(const std::string& s) {
  double lo, hi;
  int count;
  if (std::sscanf(s.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 1)
    throw InputError("grid must be lo:hi:count, got \"" + s + "\"");
  std::vector<double> g;
  for (int i = 0; i < count; ++i)
    g.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
  return g;
}

void emit(const json& report, const std::string& out_path) {
  std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text_atomic(out_path, text);
  }
}

Grid2D grid_from_options(const std::string& domain, double side, double alen,
                         double blen, double radius, int cells) {
  if (domain == "square") return Grid2D::square(side, cells);
  if (domain == "rect") {
    int ny = (int)std::lround(cells * blen / alen);
    return Grid2D::rectangle(alen, blen, cells, ny);
  }
  if (domain == "disc") return Grid2D::disc(radius, cells, 2 * cells);
  throw InputError("unknown domain \"" + domain + "\" (square|rect|disc)");
}

MatrixField field_from_json(const json& j, const Grid2D& grid, const char* key,
                            int n) {
  MatrixField F(grid, n);
  std::string const_key = std::string(key) + "_const";
  if (j.contains(const_key)) {
    auto rows = j.at(const_key);
    for (int node = 0; node < grid.node_count(); ++node)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) F.at(node, a, b) = rows.at(a).at(b).get<double>();
    return F;
  }
  std::string samp_key = std::string(key) + "_samples";
  if (j.contains(samp_key)) {
    auto nodes = j.at(samp_key);
    if ((int)nodes.size() != grid.node_count())
      throw InputError(samp_key + ": need one n*n block per grid node");
    for (int node = 0; node < grid.node_count(); ++node)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          F.at(node, a, b) = nodes.at(node).at(a * n + b).get<double>();
    return F;
  }
  throw InputError(std::string("field \"") + key + "\": need " + const_key + " or " +
                   samp_key);
}

Field field_1d_from_json(const json& j) {
  std::string kind = j.value("kind", "");
  if (kind == "constant") {
    return Field::constant(j.at("value").get<double>());
  }
  if (kind == "cosine") {
    double amp = j.at("amplitude").get<double>();
    double freq = j.value("frequency", 1.0);
    double offset = j.value("offset", 0.0);
    return Field{[amp, freq, offset](double x, double) {
      return offset + amp * std::cos(freq * kPi * x);
    }};
  }
  if (kind == "sine") {
    double amp = j.at("amplitude").get<double>();
    double freq = j.value("frequency", 1.0);
    double offset = j.value("offset", 0.0);
    return Field{[amp, freq, offset](double x, double) {
      return offset + amp * std::sin(freq * kPi * x);
    }};
  }
  throw InputError("field kind must be constant|cosine|sine");
}

// CSV table: header "x,u,f,fu", one row per (x,u) pair, x-major with a
// complete rectangular (x, u) product grid.
CustomTable custom_table_from_csv(const std::string& text) {
  CustomTable tb;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line); // header
  std::vector<std::array<double, 4>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<double, 4> row{};
    std::istringstream ls(line);
    std::string tok;
    for (int i = 0; i < 4; ++i) {
      if (!std::getline(ls, tok, ',')) throw InputError("custom table: short row");
      row[(size_t)i] = std::stod(tok);
    }
    rows.push_back(row);
  }
  if (rows.empty()) throw InputError("custom table: no rows");
  for (const auto& r : rows) {
    if (tb.x_grid.empty() || r[0] > tb.x_grid.back() + 1e-15) tb.x_grid.push_back(r[0]);
  }
  size_t nu = rows.size() / tb.x_grid.size();
  if (nu * tb.x_grid.size() != rows.size())
    throw InputError("custom table: not a rectangular (x,u) grid");
  for (size_t j = 0; j < nu; ++j) tb.u_grid.push_back(rows[j][1]);
  for (const auto& r : rows) {
    tb.f_vals.push_back(r[2]);
    tb.fu_vals.push_back(r[3]);
  }
  tb.length = tb.x_grid.back();
  return tb;
}

NonlinearitySpec spec_from_json(const json& j) {
  NonlinearitySpec spec;
  for (const auto& c : j.at("components")) {
    ComponentSpec comp;
    std::string kind = c.value("kind", "");
    if (kind == "linear") comp.kind = ComponentSpec::Kind::LinearInU;
    else if (kind == "blend") comp.kind = ComponentSpec::Kind::SaturatedBlend;
    else if (kind == "custom") comp.kind = ComponentSpec::Kind::Custom;
    else throw InputError("component kind must be linear|blend|custom");
    if (comp.kind == ComponentSpec::Kind::Custom) {
      if (c.contains("table_csv")) {
        comp.table = custom_table_from_csv(c.at("table_csv").get<std::string>());
      } else {
        const auto& t = c.at("table");
        comp.table.length = t.value("length", 1.0);
        comp.table.x_grid = t.at("x_grid").get<std::vector<double>>();
        comp.table.u_grid = t.at("u_grid").get<std::vector<double>>();
        comp.table.f_vals = t.at("f").get<std::vector<double>>();
        comp.table.fu_vals = t.at("fu").get<std::vector<double>>();
      }
    } else {
      comp.b = field_1d_from_json(c.at("b"));
      comp.s0 = c.value("s0", 1.0);
      if (c.contains("forcing")) comp.forcing = field_1d_from_json(c.at("forcing"));
    }
    spec.components.push_back(comp);
  }
  for (const auto& f : j.at("A")) spec.bound_lower.push_back(field_1d_from_json(f));
  for (const auto& f : j.at("B")) spec.bound_upper.push_back(field_1d_from_json(f));
  for (const auto& p : j.at("p"))
    spec.p_list.push_back(p.is_string() ? parse_p(p.get<std::string>())
                                        : p.get<double>());
  return spec;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lyapunov constants, Hill-equation stability certificates, and "
               "resonant boundary value problems"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  std::string out_path;
  app.add_option("--out", out_path, "write the report to this file (atomic)")
      ->capture_default_str();

  // ---- constants ----
  auto* c_cmd = app.add_subcommand("constants", "closed-form best Lyapunov constants");
  std::string c_problem = "periodic-l1", c_p = "2";
  int c_n = 0;
  double c_T = kPi;
  c_cmd->add_option("--problem", c_problem,
                    "periodic-l1|antiperiodic-l1|periodic-linf|antiperiodic-lp|"
                    "neumann-lp|dirichlet-lp");
  c_cmd->add_option("--n", c_n, "eigenvalue level (L1/Linf families)");
  c_cmd->add_option("--p", c_p, "exponent for the Lp families (number or 'inf')");
  c_cmd->add_option("--T", c_T, "period");

  // ---- spectrum ----
  auto* s_cmd = app.add_subcommand("spectrum", "periodic/antiperiodic eigenvalues");
  std::string s_coeff, s_boundary = "periodic", s_method = "discriminant",
              s_format = "json";
  int s_count = 6, s_steps = 4096, s_mesh = 512;
  s_cmd->add_option("--coeff", s_coeff, "coefficient JSON file")->required();
  s_cmd->add_option("--boundary", s_boundary, "periodic|antiperiodic");
  s_cmd->add_option("--count", s_count, "number of eigenvalues");
  s_cmd->add_option("--steps", s_steps, "integrator steps per period");
  s_cmd->add_option("--method", s_method, "discriminant|discretized");
  s_cmd->add_option("--mesh", s_mesh, "finite-difference mesh (discretized)");
  s_cmd->add_option("--format", s_format, "json|csv");

  // ---- stability ----
  auto* st_cmd = app.add_subcommand("stability", "monodromy matrix and verdict");
  std::string st_coeff, st_matrix;
  int st_steps = 4096;
  double st_tol = 1e-7;
  st_cmd->add_option("--coeff", st_coeff, "scalar coefficient JSON file");
  st_cmd->add_option("--matrix", st_matrix, "matrix coefficient JSON file");
  st_cmd->add_option("--steps", st_steps, "integrator steps per period");
  st_cmd->add_option("--tol", st_tol, "boundary-band tolerance");

  // ---- sweep ----
  auto* sw_cmd = app.add_subcommand(
      "sweep", "stability chart for a(t) = alpha + beta cos(2 pi t / T); SVG "
               "colors: stable #2b8a3e, unstable #c92a2a, boundary #e8a33d, "
               "error #868e96");
  std::string sw_alpha = "0:4:64", sw_beta = "0:2:64";
  double sw_T = 2 * kPi;
  int sw_steps = 512, sw_threads = 1;
  sw_cmd->add_option("--alpha", sw_alpha, "alpha grid lo:hi:count");
  sw_cmd->add_option("--beta", sw_beta, "beta grid lo:hi:count");
  sw_cmd->add_option("--T", sw_T, "period");
  sw_cmd->add_option("--steps", sw_steps, "integrator steps per period");
  sw_cmd->add_option("--threads", sw_threads,
                     "worker pool size (output is identical to sequential order)");

  // ---- certify ----
  auto* ce_cmd = app.add_subcommand("certify", "theorem certificates with oracles");
  std::string ce_theorem, ce_input;
  int ce_n = 1;
  std::string ce_p1 = "inf", ce_p2 = "inf";
  std::vector<std::string> ce_p;
  double ce_t0 = 0.5;
  bool ce_no_oracle = false;
  std::string ce_domain = "square";
  double ce_side = 1.0, ce_alen = 1.0, ce_blen = 1.0, ce_radius = 1.0;
  int ce_cells = 48;
  ce_cmd->add_option("--theorem", ce_theorem,
                     "classical|periodic-zone|antiperiodic-zone|hill|krein|"
                     "coupling2x2|elliptic|two-step")
      ->required();
  ce_cmd->add_option("--input", ce_input, "problem JSON file")->required();
  ce_cmd->add_option("--n", ce_n, "eigenvalue level (zone certificates)");
  ce_cmd->add_option("--p1", ce_p1, "first exponent (coupling2x2)");
  ce_cmd->add_option("--p2", ce_p2, "second exponent (coupling2x2)");
  ce_cmd->add_option("--p", ce_p, "exponent list (krein/elliptic)");
  ce_cmd->add_option("--t0", ce_t0, "split point (two-step)");
  ce_cmd->add_flag("--no-oracle", ce_no_oracle, "skip the independent cross-check");
  ce_cmd->add_option("--domain", ce_domain, "elliptic: square|rect|disc");
  ce_cmd->add_option("--side", ce_side, "elliptic: square side");
  ce_cmd->add_option("--alen", ce_alen, "elliptic: rectangle x length");
  ce_cmd->add_option("--blen", ce_blen, "elliptic: rectangle y length");
  ce_cmd->add_option("--radius", ce_radius, "elliptic: disc radius");
  ce_cmd->add_option("--cells", ce_cells, "elliptic: grid cells per side");

  // ---- minimize ----
  auto* m_cmd = app.add_subcommand("minimize", "variational quotient minimization");
  std::string m_quotient = "antiperiodic", m_p = "2";
  double m_T = 1.0, m_M = 1.0, m_a = 0.0, m_b = 1.0, m_S = 1.0;
  int m_mesh = 512, m_r = 2, m_cells = 48;
  unsigned m_seed = 12345;
  std::string m_domain = "square";
  double m_side = 1.0, m_alen = 1.0, m_blen = 1.0, m_radius = 1.0;
  m_cmd->add_option("--quotient", m_quotient,
                    "antiperiodic|neumann|neumann2d|mixed|cotsum");
  m_cmd->add_option("--p", m_p, "exponent (number or 'inf')");
  m_cmd->add_option("--T", m_T, "period / interval length");
  m_cmd->add_option("--mesh", m_mesh, "1D mesh");
  m_cmd->add_option("--M", m_M, "mixed quotient shift");
  m_cmd->add_option("--a", m_a, "mixed quotient left endpoint");
  m_cmd->add_option("--b", m_b, "mixed quotient right endpoint");
  m_cmd->add_option("--r", m_r, "cotangent sum length");
  m_cmd->add_option("--S", m_S, "cotangent sum total");
  m_cmd->add_option("--seed", m_seed, "restart seed");
  m_cmd->add_option("--domain", m_domain, "neumann2d: square|rect|disc");
  m_cmd->add_option("--side", m_side, "neumann2d: square side");
  m_cmd->add_option("--alen", m_alen, "neumann2d: rectangle x length");
  m_cmd->add_option("--blen", m_blen, "neumann2d: rectangle y length");
  m_cmd->add_option("--radius", m_radius, "neumann2d: disc radius");
  m_cmd->add_option("--cells", m_cells, "neumann2d: cells per side");

  // ---- pde ----
  auto* p_cmd = app.add_subcommand("pde", "Neumann Laplacian operations");
  std::string p_op = "lambda1", p_domain = "square", p_field;
  double p_side = 1.0, p_alen = 1.0, p_blen = 2.0, p_radius = 1.0, p_const = 0.0,
         p_shift = 4.0, p_tol = 1e-6;
  int p_cells = 128;
  p_cmd->add_option("--op", p_op, "lambda1|detect|counterexample");
  p_cmd->add_option("--domain", p_domain, "square|rect|disc");
  p_cmd->add_option("--side", p_side, "square side");
  p_cmd->add_option("--alen", p_alen, "rectangle x length");
  p_cmd->add_option("--blen", p_blen, "rectangle y length");
  p_cmd->add_option("--radius", p_radius, "disc radius");
  p_cmd->add_option("--cells", p_cells, "cells per side / rings");
  p_cmd->add_option("--coeff-const", p_const, "detect: constant coefficient value");
  p_cmd->add_option("--field", p_field, "detect: sampled field JSON file");
  p_cmd->add_option("--shift", p_shift, "counterexample: positivity shift n");
  p_cmd->add_option("--tol", p_tol, "detect: relative sigma_min tolerance");

  // ---- resonant ----
  auto* r_cmd = app.add_subcommand("resonant", "Schauder-type fixed-point solver");
  std::string r_spec, r_domain = "interval";
  double r_length = 1.0, r_side = 1.0, r_tol = 1e-10;
  int r_cells = 256, r_max_iter = 200, r_probe = 0;
  unsigned r_seed = 2024;
  r_cmd->add_option("--spec", r_spec, "nonlinearity spec JSON file")->required();
  r_cmd->add_option("--domain", r_domain, "interval|square");
  r_cmd->add_option("--length", r_length, "interval length");
  r_cmd->add_option("--side", r_side, "square side");
  r_cmd->add_option("--cells", r_cells, "cells");
  r_cmd->add_option("--max-iter", r_max_iter, "fixed-point iteration cap");
  r_cmd->add_option("--tol", r_tol, "fixed-point increment tolerance");
  r_cmd->add_option("--probe", r_probe, "uniqueness probe starts (0 = off)");
  r_cmd->add_option("--seed", r_seed, "probe seed");

  // ---- selftest ----
  auto* t_cmd = app.add_subcommand("selftest", "run the acceptance suite");

  for (auto* sc : app.get_subcommands([](const CLI::App*) { return true; }))
    sc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*c_cmd) {
      json cfg{{"problem", c_problem}, {"n", c_n}, {"p", c_p}, {"T", c_T}};
      LyapunovConstant lc{};
      if (c_problem == "periodic-l1") lc = gamma1n_periodic(c_T, c_n);
      else if (c_problem == "antiperiodic-l1") lc = gamma1n_antiperiodic(c_T, c_n);
      else if (c_problem == "periodic-linf") lc = gamma_inf_periodic(c_T, c_n);
      else if (c_problem == "antiperiodic-lp" || c_problem == "neumann-lp" ||
               c_problem == "dirichlet-lp") {
        double p = parse_p(c_p);
        ConstantProblem label = c_problem == "antiperiodic-lp"
                                    ? ConstantProblem::AntiperiodicLp
                                : c_problem == "neumann-lp" ? ConstantProblem::NeumannLp
                                                            : ConstantProblem::DirichletLp;
        if (p == kInf)
          lc = LyapunovConstant{label, c_T, 0, p, sqr(kPi / c_T), true};
        else if (p == 1.0)
          lc = LyapunovConstant{label, c_T, 0, p, 4.0 / c_T, false};
        else
          lc = mp_antiperiodic(c_T, p, label);
      } else {
        throw InputError("unknown problem \"" + c_problem + "\"");
      }
      json rep = report_envelope("constants", cfg);
      rep["constant"] = to_json(lc);
      rep["value"] = lc.value;
      emit(rep, out_path);
    } else if (*s_cmd) {
      auto a = scalar_coefficient_from_json(load_json(s_coeff));
      BoundaryCondition bc = s_boundary == "antiperiodic"
                                 ? BoundaryCondition::Antiperiodic
                                 : BoundaryCondition::Periodic;
      SpectrumTable table = s_method == "discretized"
                                ? discretized_scalar_eigenvalues(a, bc, s_mesh, s_count)
                                : scalar_eigenvalues(a, bc, s_count, s_steps);
      if (s_format == "csv") {
        std::string text = spectrum_to_csv(table);
        if (out_path.empty()) std::cout << text;
        else write_text_atomic(out_path, text);
      } else {
        json cfg{{"coeff", s_coeff}, {"boundary", s_boundary}, {"count", s_count},
                 {"steps", s_steps}, {"method", s_method},     {"mesh", s_mesh}};
        json rep = report_envelope("spectrum", cfg);
        rep["spectrum"] = to_json(table);
        emit(rep, out_path);
      }
    } else if (*st_cmd) {
      json cfg{{"steps", st_steps}, {"tol", st_tol}};
      MonodromyResult m;
      if (!st_matrix.empty()) {
        m = monodromy(matrix_coefficient_from_json(load_json(st_matrix)), st_steps);
        cfg["matrix"] = st_matrix;
      } else if (!st_coeff.empty()) {
        m = monodromy(scalar_coefficient_from_json(load_json(st_coeff)), st_steps);
        cfg["coeff"] = st_coeff;
      } else {
        throw InputError("stability: need --coeff or --matrix");
      }
      json rep = report_envelope("stability", cfg);
      rep["monodromy"] = to_json(m);
      rep["verdict"] = to_json(classify(m, st_tol));
      emit(rep, out_path);
    } else if (*sw_cmd) {
      auto alphas = parse_grid(sw_alpha);
      auto betas = parse_grid(sw_beta);
      double T = sw_T;
      CoeffTemplate tmpl = [T](double alpha, double beta) {
        return ScalarCoefficient::fourier(T, alpha, {{beta, 0.0}});
      };
      auto res = sweep(tmpl, alphas, betas, sw_steps, sw_threads);
      std::string csv = sweep_to_csv(res);
      if (out_path.empty()) {
        std::cout << csv;
      } else if (out_path.size() > 4 && out_path.substr(out_path.size() - 4) == ".svg") {
        write_text_atomic(out_path, sweep_to_svg(res));
        write_text_atomic(out_path.substr(0, out_path.size() - 4) + ".csv", csv);
      } else {
        write_text_atomic(out_path, csv);
      }
    } else if (*ce_cmd) {
      CertifyOptions opt;
      opt.run_oracle = !ce_no_oracle;
      json input = load_json(ce_input);
      CertificateReport rep;
      json cfg{{"theorem", ce_theorem}, {"input", ce_input}};
      if (ce_theorem == "classical") {
        rep = classical_lyapunov_check(scalar_coefficient_from_json(input), opt);
      } else if (ce_theorem == "periodic-zone") {
        rep = certify_periodic_zone(scalar_coefficient_from_json(input), ce_n, opt);
        cfg["n"] = ce_n;
      } else if (ce_theorem == "antiperiodic-zone") {
        rep = certify_antiperiodic_zone(scalar_coefficient_from_json(input), ce_n, opt);
        cfg["n"] = ce_n;
      } else if (ce_theorem == "hill") {
        rep = certify_hill_stability(scalar_coefficient_from_json(input), opt);
      } else if (ce_theorem == "two-step") {
        rep = two_step_disfocality(scalar_coefficient_from_json(input), ce_t0, opt);
        cfg["t0"] = ce_t0;
      } else if (ce_theorem == "krein") {
        auto P = matrix_coefficient_from_json(input.at("P"));
        auto B = input.contains("B") ? matrix_coefficient_from_json(input.at("B")) : P;
        std::vector<double> ps;
        for (const auto& s : ce_p) ps.push_back(parse_p(s));
        if (ps.empty()) ps.assign((size_t)P.dim(), kInf);
        rep = certify_krein_system(P, B, ps, opt);
      } else if (ce_theorem == "coupling2x2") {
        auto P = matrix_coefficient_from_json(input.contains("P") ? input.at("P") : input);
        rep = certify_2x2_coupling(P, parse_p(ce_p1), parse_p(ce_p2), opt);
        cfg["p1"] = ce_p1;
        cfg["p2"] = ce_p2;
      } else if (ce_theorem == "elliptic") {
        Grid2D grid =
            grid_from_options(ce_domain, ce_side, ce_alen, ce_blen, ce_radius, ce_cells);
        int n = input.at("n").get<int>();
        auto A = field_from_json(input, grid, "A", n);
        A.symmetrize();
        auto B = field_from_json(input, grid, "B", n);
        std::vector<double> ps;
        for (const auto& s : ce_p) ps.push_back(parse_p(s));
        if (ps.empty()) ps.assign((size_t)n, kInf);
        rep = certify_elliptic_system(A, B, ps, {}, opt);
      } else {
        throw InputError("unknown theorem \"" + ce_theorem + "\"");
      }
      json out = report_envelope("certify", cfg);
      out["certificate"] = to_json(rep);
      emit(out, out_path);
    } else if (*m_cmd) {
      json cfg{{"quotient", m_quotient}, {"p", m_p}, {"T", m_T}, {"mesh", m_mesh},
               {"seed", m_seed}};
      json rep = report_envelope("minimize", cfg);
      VarminOptions vopt;
      vopt.seed = m_seed;
      bool csv_out = out_path.size() > 4 && out_path.substr(out_path.size() - 4) == ".csv";
      if (m_quotient == "antiperiodic") {
        auto r = minimize_antiperiodic_quotient(parse_p(m_p), m_T, m_mesh, vopt);
        if (csv_out) {
          write_text_atomic(out_path, minimizer_to_csv_1d(r, m_T));
          return 0;
        }
        rep["result"] = to_json(r);
      } else if (m_quotient == "neumann") {
        auto r = minimize_neumann_1d(parse_p(m_p), m_T, m_mesh, vopt);
        if (csv_out) {
          write_text_atomic(out_path, minimizer_to_csv_1d(r, m_T));
          return 0;
        }
        rep["result"] = to_json(r);
      } else if (m_quotient == "neumann2d") {
        Grid2D grid = grid_from_options(m_domain, m_side, m_alen, m_blen, m_radius, m_cells);
        auto r = minimize_neumann_grid(parse_p(m_p), grid, vopt);
        if (csv_out) {
          write_text_atomic(out_path, minimizer_to_csv_grid(r, grid));
          return 0;
        }
        rep["result"] = to_json(r);
      } else if (m_quotient == "mixed") {
        auto r = mixed_quotient_min(m_M, m_a, m_b, m_mesh);
        rep["result"] = json{{"value", r.value}};
      } else if (m_quotient == "cotsum") {
        auto r = cot_sum_min(m_r, m_S);
        rep["result"] = json{{"value", r.value},
                             {"argmin", r.argmin},
                             {"brute_checked", r.brute_checked},
                             {"brute_value", r.brute_value}};
      } else {
        throw InputError("unknown quotient \"" + m_quotient + "\"");
      }
      emit(rep, out_path);
    } else if (*p_cmd) {
      Grid2D grid = grid_from_options(p_domain, p_side, p_alen, p_blen, p_radius, p_cells);
      json cfg{{"op", p_op}, {"domain", p_domain}, {"cells", p_cells}};
      json rep = report_envelope("pde", cfg);
      if (p_op == "lambda1") {
        rep["lambda1"] = neumann_lambda1(grid);
      } else if (p_op == "detect") {
        SpatialCoefficient2D a = SpatialCoefficient2D::constant(grid, p_const);
        if (!p_field.empty()) {
          if (p_field.size() > 4 && p_field.substr(p_field.size() - 4) == ".csv") {
            std::ifstream fin(p_field);
            if (!fin) throw InputError("cannot open " + p_field);
            std::stringstream ss;
            ss << fin.rdbuf();
            a = field_from_csv(ss.str());
          } else {
            a = SpatialCoefficient2D(
                grid, load_json(p_field).at("samples").get<std::vector<double>>());
          }
        }
        auto det = detect_nontrivial(a, p_tol);
        rep["verdict"] = to_string(det.verdict);
        rep["sigma_min"] = det.sigma_min;
        rep["scale"] = det.scale;
      } else if (p_op == "counterexample") {
        auto u0 = SpatialCoefficient2D::sample(
            grid, [](double x, double) { return std::cos(kPi * x); });
        auto out = mean_nonnegativity_counterexample(u0, p_shift, {1.0, 2.0});
        if (out_path.size() > 4 && out_path.substr(out_path.size() - 4) == ".csv") {
          write_text_atomic(out_path, field_to_csv(out.a_n));
          return 0;
        }
        rep["mean"] = out.mean;
        rep["residual"] = out.residual;
        json norms = json::array();
        for (auto& [p, v] : out.norms) norms.push_back(json::array({p, v}));
        rep["norms"] = norms;
      } else {
        throw InputError("unknown pde op \"" + p_op + "\"");
      }
      emit(rep, out_path);
    } else if (*r_cmd) {
      NonlinearitySpec spec = spec_from_json(load_json(r_spec));
      ResonantDomain dom = r_domain == "square"
                               ? ResonantDomain(Grid2D::square(r_side, r_cells))
                               : ResonantDomain(Interval1D{r_length, r_cells});
      SolveOptions sopt;
      sopt.max_iter = r_max_iter;
      sopt.tol = r_tol;
      json cfg{{"spec", r_spec},         {"domain", r_domain}, {"cells", r_cells},
               {"max_iter", r_max_iter}, {"tol", r_tol},       {"probe", r_probe},
               {"seed", r_seed}};
      json rep = report_envelope("resonant", cfg);
      rep["hypotheses"] = to_json(check_hypotheses(spec, dom));
      auto sol = solve(spec, dom, sopt);
      rep["solve"] = to_json(sol);
      if (r_probe > 0)
        rep["uniqueness"] = to_json(uniqueness_probe(spec, dom, r_probe, sopt, r_seed));
      emit(rep, out_path);
      if (!sol.converged) return 3;
    } else if (*t_cmd) {
      auto results = run_selftest(true);
      return all_passed(results) ? 0 : 3;
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
