#include "lyap/json_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "lyap/common.hpp"

namespace lyap {

namespace {
const double kInf = std::numeric_limits<double>::infinity();

json p_to_json(double p) {
  if (p == kInf) return "inf";
  return p;
}
} // namespace

json to_json(const ScalarCoefficient& c) {
  json j;
  j["T"] = c.period();
  struct V {
    json& j;
    void operator()(const ScalarCoefficient::Constant& k) {
      j["kind"] = "constant";
      j["value"] = k.value;
    }
    void operator()(const ScalarCoefficient::Fourier& f) {
      j["kind"] = "fourier";
      j["a0"] = f.a0;
      json terms = json::array();
      for (auto& [c1, s1] : f.terms) terms.push_back(json::array({c1, s1}));
      j["terms"] = terms;
    }
    void operator()(const ScalarCoefficient::Piecewise& p) {
      j["kind"] = "piecewise";
      j["breakpoints"] = p.breakpoints;
      j["values"] = p.values;
    }
    void operator()(const ScalarCoefficient::Samples& s) {
      j["kind"] = "samples";
      j["values"] = s.values;
    }
  };
  std::visit(V{j}, c.body());
  return j;
}

ScalarCoefficient scalar_coefficient_from_json(const json& j, double default_T) {
  if (!j.is_object()) throw InputError("coefficient: expected a JSON object");
  double T = j.contains("T") ? j.at("T").get<double>() : default_T;
  if (!(T > 0)) throw InputError("coefficient: missing or nonpositive \"T\"");
  std::string kind = j.value("kind", "");
  if (kind == "constant") return ScalarCoefficient::constant(T, j.at("value").get<double>());
  if (kind == "fourier") {
    std::vector<std::pair<double, double>> terms;
    if (j.contains("terms"))
      for (const auto& t : j.at("terms")) {
        if (!t.is_array() || t.size() != 2)
          throw InputError("fourier: each term must be [cos_k, sin_k]");
        terms.emplace_back(t[0].get<double>(), t[1].get<double>());
      }
    return ScalarCoefficient::fourier(T, j.value("a0", 0.0), std::move(terms));
  }
  if (kind == "piecewise")
    return ScalarCoefficient::piecewise(T, j.at("breakpoints").get<std::vector<double>>(),
                                        j.at("values").get<std::vector<double>>());
  if (kind == "samples")
    return ScalarCoefficient::samples(T, j.at("values").get<std::vector<double>>());
  throw InputError("coefficient: unknown kind \"" + kind + "\"");
}

json to_json(const MatrixCoefficient& m) {
  json rows = json::array();
  for (int i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.dim(); ++j) row.push_back(to_json(m.entry(i, j)));
    rows.push_back(row);
  }
  return json{{"T", m.period()}, {"n", m.dim()}, {"entries", rows}};
}

MatrixCoefficient matrix_coefficient_from_json(const json& j) {
  double T = j.value("T", 0.0);
  int n = j.at("n").get<int>();
  const auto& rows = j.at("entries");
  if ((int)rows.size() != n) throw InputError("matrix: entries must be n rows");
  std::vector<ScalarCoefficient> entries;
  for (const auto& row : rows) {
    if ((int)row.size() != n) throw InputError("matrix: entries must be n x n");
    for (const auto& e : row) entries.push_back(scalar_coefficient_from_json(e, T));
  }
  return MatrixCoefficient(n, std::move(entries));
}

json to_json(const LyapunovConstant& c) {
  return json{{"problem", to_string(c.problem)}, {"T", c.T},       {"n", c.n},
              {"p", p_to_json(c.p)},             {"value", c.value}, {"attained", c.attained}};
}

json to_json(const HypothesisCheck& h) {
  json j{{"name", h.name}, {"measured", h.measured}, {"bound", h.bound}, {"passed", h.passed}};
  if (!h.note.empty()) j["note"] = h.note;
  return j;
}

json to_json(const CertificateReport& r) {
  json hyp = json::array();
  for (const auto& h : r.hypotheses) hyp.push_back(to_json(h));
  json j{{"theorem", r.theorem},
         {"hypotheses", hyp},
         {"verdict", r.certified ? "Certified" : "NotCertified"}};
  if (!r.certified) j["reason"] = r.reason;
  if (r.certified) j["conclusion"] = r.conclusion;
  if (!r.oracle_crosscheck.empty()) {
    j["oracle"] = r.oracle_crosscheck;
    j["oracle_agrees"] = r.oracle_agrees;
  }
  return j;
}

json to_json(const SpectrumTable& t) {
  json eigs = json::array();
  for (const auto& e : t.eigenvalues)
    eigs.push_back(json{{"index", e.index}, {"value", e.value}, {"multiplicity", e.multiplicity}});
  json j{{"boundary", to_string(t.boundary)},
         {"method", to_string(t.method)},
         {"eigenvalues", eigs}};
  if (t.method == SpectrumMethod::Discriminant) {
    j["steps"] = t.steps;
    j["scan_start"] = t.scan_start;
    j["scan_step"] = t.scan_step;
  } else {
    j["mesh"] = t.mesh;
  }
  return j;
}

json to_json(const StabilityVerdict& v) {
  return json{{"class", to_string(v.cls)},
              {"detail", v.detail},
              {"semisimple", v.semisimple},
              {"tol", v.tol}};
}

json to_json(const MonodromyResult& m) {
  json mat = json::array();
  for (int i = 0; i < m.matrix.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.matrix.cols(); ++j) row.push_back(m.matrix(i, j));
    mat.push_back(row);
  }
  json mult = json::array();
  for (auto mu : m.multipliers) mult.push_back(json::array({mu.real(), mu.imag()}));
  return json{{"n", m.n},
              {"matrix", mat},
              {"multipliers", mult},
              {"discriminant", m.discriminant},
              {"step_count", m.step_count},
              {"estimated_error", m.estimated_error}};
}

json to_json(const MinimizationResult& r) {
  json j{{"value", r.value},
         {"constraint_residual", r.constraint_residual},
         {"mesh_sizes", r.mesh_sizes},
         {"mesh_values", r.mesh_values},
         {"start_values", r.start_values},
         {"iterations", r.trace.size()},
         {"converged", r.converged}};
  if (!r.warning.empty()) j["warning"] = r.warning;
  return j;
}

json to_json(const KreinResult& r) {
  json j{{"mesh", r.mesh}, {"method", r.method}};
  if (r.lambda1) j["lambda1"] = *r.lambda1;
  else j["lambda1"] = nullptr;
  return j;
}

json to_json(const SolveResult& r) {
  json j{{"iterations", r.iterations},
         {"residual", r.residual},
         {"residual_rel", r.residual_rel},
         {"converged", r.converged},
         {"damped", r.damped}};
  if (!r.warning.empty()) j["warning"] = r.warning;
  return j;
}

json to_json(const UniquenessReport& r) {
  return json{{"starts", r.starts},
              {"max_spread", r.max_spread},
              {"residuals", r.residuals},
              {"all_converged", r.all_converged}};
}

json report_envelope(const std::string& subcommand, const json& config) {
  return json{{"schema_version", kSchemaVersion},
              {"tool_version", kVersion},
              {"subcommand", subcommand},
              {"config", config}};
}

void write_text_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path dir = target.parent_path();
  if (dir.empty()) dir = ".";
  fs::path tmp = dir / (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << text;
  }
  fs::rename(tmp, target);
}

std::string sweep_to_csv(const SweepResult& s) {
  std::ostringstream os;
  os.precision(17);
  os << "alpha,beta,class,detail\n";
  for (size_t ia = 0; ia < s.alpha.size(); ++ia)
    for (size_t ib = 0; ib < s.beta.size(); ++ib) {
      const SweepCell& c = s.at(ia, ib);
      os << s.alpha[ia] << "," << s.beta[ib] << ",";
      if (!c.error.empty()) os << "error,0";
      else os << to_string(c.verdict->cls) << "," << c.verdict->detail;
      os << "\n";
    }
  return os.str();
}

std::string sweep_to_svg(const SweepResult& s) {
  // One rect per cell; coloring: stable #2b8a3e, unstable #c92a2a,
  // boundary #e8a33d, error #868e96 (documented in the CLI help).
  const size_t na = s.alpha.size(), nb = s.beta.size();
  const int cell = 8;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << na * cell << "\" height=\""
     << nb * cell << "\" viewBox=\"0 0 " << na * cell << " " << nb * cell << "\">\n";
  for (size_t ia = 0; ia < na; ++ia)
    for (size_t ib = 0; ib < nb; ++ib) {
      const SweepCell& c = s.at(ia, ib);
      const char* color = "#868e96";
      if (c.error.empty()) {
        switch (c.verdict->cls) {
          case StabilityClass::Stable: color = "#2b8a3e"; break;
          case StabilityClass::Unstable: color = "#c92a2a"; break;
          case StabilityClass::Boundary: color = "#e8a33d"; break;
        }
      }
      os << "<rect x=\"" << ia * cell << "\" y=\"" << (nb - 1 - ib) * cell << "\" width=\""
         << cell << "\" height=\"" << cell << "\" fill=\"" << color << "\"/>\n";
    }
  os << "</svg>\n";
  return os.str();
}

std::string minimizer_to_csv_1d(const MinimizationResult& r, double T) {
  std::ostringstream os;
  os.precision(17);
  os << "t,v\n";
  const size_t n = r.minimizer.size();
  for (size_t i = 0; i < n; ++i)
    os << T * (double)i / (double)(n - 1) << "," << r.minimizer[i] << "\n";
  return os.str();
}

std::string minimizer_to_csv_grid(const MinimizationResult& r, const Grid2D& grid) {
  std::ostringstream os;
  os.precision(17);
  os << "x,y,v\n";
  for (int i = 0; i < grid.node_count(); ++i) {
    auto [x, y] = grid.node(i);
    os << x << "," << y << "," << r.minimizer[(size_t)i] << "\n";
  }
  return os.str();
}

std::string field_to_csv(const SpatialCoefficient2D& f) {
  std::ostringstream os;
  os.precision(17);
  if (f.grid.is_disc()) {
    os << "disc," << f.grid.h() << "," << f.grid.n1() << "," << f.grid.n2() << "\n";
  } else {
    os << "rectangle," << f.grid.h() << "," << f.grid.n2() + 1 << ","
       << f.grid.n1() + 1 << "\n";
  }
  for (double v : f.samples) os << v << "\n";
  return os.str();
}

SpatialCoefficient2D field_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  std::getline(in, header);
  std::string domain;
  double h = 0;
  int rows = 0, cols = 0;
  {
    std::istringstream hs(header);
    std::string tok;
    std::getline(hs, domain, ',');
    std::getline(hs, tok, ',');
    h = std::stod(tok);
    std::getline(hs, tok, ',');
    rows = std::stoi(tok);
    std::getline(hs, tok, ',');
    cols = std::stoi(tok);
  }
  Grid2D grid = domain == "disc"
                    ? Grid2D::disc(h * rows, rows, cols)
                    : Grid2D::rectangle(h * (cols - 1), h * (rows - 1), cols - 1,
                                        rows - 1);
  std::vector<double> vals;
  vals.reserve((size_t)grid.node_count());
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) vals.push_back(std::stod(line));
  return SpatialCoefficient2D(grid, std::move(vals));
}

std::string spectrum_to_csv(const SpectrumTable& t) {
  std::ostringstream os;
  os.precision(17);
  os << "index,value,multiplicity\n";
  for (const auto& e : t.eigenvalues)
    os << e.index << "," << e.value << "," << e.multiplicity << "\n";
  return os.str();
}

} // namespace lyap
