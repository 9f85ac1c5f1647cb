#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace qprop::validation {

/// One measured quantity inside a criterion. pass = measured <= threshold.
struct Check {
  std::string label;
  double measured = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  bool pass = false;
  double seconds = 0.0;  // wall time, kept out of serialized reports
};

/// Informational comparison with the printed formulas; never gates a run.
struct AuditEntry {
  std::string label;
  double value = 0.0;
  std::string note;
};

struct Report {
  std::uint64_t seed = 0;
  std::vector<CriterionResult> criteria;
  std::vector<AuditEntry> audit;

  bool all_pass() const;
};

struct Options {
  std::uint64_t seed = 20240611;
  /// Criteria to run (1..11); empty runs all of them.
  std::vector<int> only;
  bool audit = true;
};

/// Titles of criteria 1..12, index 0 unused.
const std::vector<std::string>& criterion_titles();

/// Runs the numerical acceptance criteria 1..11. Criterion 12 (byte-identical
/// reports) needs a serializer and lives with the callers.
Report run_suite(const Options& opt, const std::function<void(const CriterionResult&)>& on_done = {});

}  // namespace qprop::validation
