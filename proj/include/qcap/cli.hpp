#pragma once

#include "qcap/detector.hpp"
#include "qcap/verifier.hpp"

#include <optional>
#include <string>

namespace qcap::cli {

struct RunConfig {
  std::optional<FamilySpec> family_spec;
  std::optional<std::string> channel_file;
  ToleranceConfig tol;
  std::string out_dir = ".";
  std::string format = "csv";  // stdout summary format: csv | json
  std::string table;           // reproduce table name
  std::string manifest_path;   // empty: use the checked-in default
  std::string psi_label;       // sweep: probe-state override by label
  int probe_cap = 0;           // cap on listed (non-Haar) probe states, 0 = all
  int jobs = 0;                // reproduce worker count, 0 = hardware parallelism
};

/// Channel, probe list and descriptive labels resolved from the config.
struct Problem {
  ComplementaryPair pair;
  std::vector<LabeledState> states;
  std::string family;
  std::string params;
  Index d = 0;
};

Problem resolve_problem(const RunConfig& config);

// Each command returns the process exit code: 0 when a verdict or report was
// produced (UNDETECTED included), 2 on input or validation errors; cmd_verify
// returns 1 when a detection fails its numerical verification.
int cmd_detect(const RunConfig& config);
int cmd_sweep(const RunConfig& config);
int cmd_verify(const RunConfig& config);
int cmd_reproduce(const RunConfig& config);
int cmd_rank_scan(const RunConfig& config);

/// Full argv interface; QCAP_SEED overrides --seed.
int run(int argc, const char* const* argv);

}  // namespace qcap::cli
