#ifndef LYAP_JSON_IO_HPP
#define LYAP_JSON_IO_HPP

#include <json.hpp>
#include <string>

#include "lyap/coeffs.hpp"
#include "lyap/constants.hpp"
#include "lyap/floquet.hpp"
#include "lyap/resonant.hpp"
#include "lyap/spectrum.hpp"
#include "lyap/varmin.hpp"

namespace lyap {

using json = nlohmann::json;

// Coefficient schema: {"T": number, "kind": "constant"|"fourier"|"piecewise"
// |"samples", ...}; see the CLI help for the per-kind fields.
json to_json(const ScalarCoefficient& c);
ScalarCoefficient scalar_coefficient_from_json(const json& j, double default_T = 0.0);

json to_json(const MatrixCoefficient& m);
MatrixCoefficient matrix_coefficient_from_json(const json& j);

json to_json(const LyapunovConstant& c);
json to_json(const HypothesisCheck& h);
json to_json(const CertificateReport& r);
json to_json(const SpectrumTable& t);
json to_json(const StabilityVerdict& v);
json to_json(const MonodromyResult& m);
json to_json(const MinimizationResult& r);
json to_json(const KreinResult& r);
json to_json(const SolveResult& r);
json to_json(const UniquenessReport& r);

// Report envelope: schema version, tool version, effective config.
json report_envelope(const std::string& subcommand, const json& config);

// Atomic write: temp file in the same directory, then rename.
void write_text_atomic(const std::string& path, const std::string& text);

std::string sweep_to_csv(const SweepResult& s);
std::string sweep_to_svg(const SweepResult& s);
std::string spectrum_to_csv(const SpectrumTable& t);

// Minimizer samples as CSV: (t, v) for 1D meshes, (x, y, v) on grids.
std::string minimizer_to_csv_1d(const MinimizationResult& r, double T);
std::string minimizer_to_csv_grid(const MinimizationResult& r, const Grid2D& grid);

// Field CSV with a one-line header: domain,h,rows,cols then one value per line
// in node order (rectangle: row-major; disc: center then rings).
std::string field_to_csv(const SpatialCoefficient2D& f);
SpatialCoefficient2D field_from_csv(const std::string& text);

} // namespace lyap

#endif
