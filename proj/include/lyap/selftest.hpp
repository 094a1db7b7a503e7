#ifndef LYAP_SELFTEST_HPP
#define LYAP_SELFTEST_HPP

#include <string>
#include <vector>

namespace lyap {

struct CriterionResult {
  int id;
  std::string name;
  bool passed;
  double seconds;
  std::string detail;
};

// Runs the end-to-end verification suite (closed forms, variational
// recovery, spectra, interlacing, certificate soundness corpus, sweep
// geometry, PDE eigenvalues, vanishing family, resonant solver, hygiene).
std::vector<CriterionResult> run_selftest(bool verbose = true);

bool all_passed(const std::vector<CriterionResult>& results);

} // namespace lyap

#endif
