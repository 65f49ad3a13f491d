#pragma once

#include "qcap/channel.hpp"
#include "qcap/families.hpp"

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <string>
#include <vector>

namespace qcap {

enum class Verdict { positive_q, positive_q_complement, both_positive, undetected };

enum class Rule {
  trace_test,          // probe certificate for the complement direction
  dim_rule_out,        // d*_out > d*_env and d*_out > d(d*_env - 1)
  dim_rule_env,        // d*_env > d*_out and d*_env > d(d*_out - 1)
  dim_rule_input,      // d > min_dim_product bound on the input dimension
  max_rank_rule,       // a pure state reaches rank min(d*_out, d*_env), dims unequal
  operator_inequality, // probe certificate for the channel direction
  none,
};

std::string verdict_name(Verdict v);
std::string rule_name(Rule r);

/// One spectral test of the kernel-projector criterion at a pure state:
/// D(psi) = Phi*(K_psi) - Phi_c*(K^c_psi) on the input space. lambda_max
/// above the detection gap certifies the channel direction, lambda_min
/// below minus the gap the complement direction.
struct ProbeResult {
  LabeledState psi;
  double lambda_max = 0.0;
  double lambda_min = 0.0;
  std::optional<Matrix> witness_sigma_fwd;  // top-eigenvector projector
  std::optional<Matrix> witness_sigma_rev;  // bottom-eigenvector projector
  double trace_fwd = 0.0;  // Tr(K_psi Phi(sigma)) for the probe sigma
  double trace_rev = 0.0;  // Tr(K^c_psi Phi_c(sigma))
  Index out_rank = 0;      // rank Phi(|psi><psi|)
  Index env_rank = 0;      // rank Phi_c(|psi><psi|)
  bool unstable = false;   // output spectrum close to the rank threshold
  bool reliable = true;    // false when the tightened rerun disagrees
  bool inconclusive_fwd = false;  // gap in (0, detection_gap]
  bool inconclusive_rev = false;

  bool certifies_fwd(const ToleranceConfig& tol) const;
  bool certifies_rev(const ToleranceConfig& tol) const;
};

/// Probe with an explicit sigma for the reported traces; defaults to the
/// maximally mixed state.
ProbeResult probe(const ComplementaryPair& pair, const LabeledState& psi,
                  const ToleranceConfig& tol,
                  const std::optional<Matrix>& sigma = std::nullopt);
ProbeResult probe(const ComplementaryPair& pair, const Vector& psi,
                  const ToleranceConfig& tol,
                  const std::optional<Matrix>& sigma = std::nullopt);

struct DimensionVerdict {
  Verdict verdict;
  Rule rule;
};

/// Integer dimension shortcuts, checked in order: the minimal-dimension
/// inequalities, the input-dimension inequalities, then the max-rank rule
/// fed by `max_rank_found` (pass 0 to disable it). Comparisons are exact.
std::optional<DimensionVerdict> dimension_rules(const ComplementaryPair& pair,
                                                Index max_rank_found,
                                                const ToleranceConfig& tol);

struct DetectionReport {
  Verdict verdict = Verdict::undetected;
  Rule rule_fired = Rule::none;
  std::vector<ProbeResult> probes;
  std::vector<std::string> implications;
  Index d_in = 0;
  Index d_out_min = 0;
  Index d_env_min = 0;
  Index max_rank_found = 0;
  bool max_rank_hypothesis_met = false;
  double best_gap_fwd = 0.0;  // largest lambda_max over reliable probes
  double best_gap_rev = 0.0;  // largest -lambda_min over reliable probes
  int best_fwd_index = -1;    // probe index of the best forward certificate
  int best_rev_index = -1;

  std::string witness_label(Verdict direction) const;
};

/// Full detection: dimension rules first, then probes over the supplied
/// states followed by Haar samples (seeded per index from tol.rng_seed).
/// Haar sampling stops early once both directions are certified.
DetectionReport search(const ComplementaryPair& pair,
                       const std::vector<LabeledState>& probe_states,
                       const ToleranceConfig& tol);

/// Two-shot probe on the tensor square of the pair. Builds the squared
/// pair internally; use tensor_square + probe directly inside loops.
ProbeResult nshot_probe(const ComplementaryPair& pair, const LabeledState& psi,
                        const ToleranceConfig& tol);

/// Default two-copy probe states: the maximally entangled state, the
/// product basis and the uniform superposition on d^2 dimensions.
std::vector<LabeledState> two_copy_witness_states(Index d);

std::vector<std::string> implications_for(Verdict v);

nlohmann::json report_to_json(const DetectionReport& report);
std::string report_csv_header();
std::string report_csv_row(const DetectionReport& report, const std::string& family,
                           const std::string& params, Index d);

/// Fixed 12-significant-digit scientific notation used in all CSV output.
std::string format_real(double x);

}  // namespace qcap
