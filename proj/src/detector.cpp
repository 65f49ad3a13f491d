#include "qcap/detector.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace qcap {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::positive_q: return "POSITIVE_Q";
    case Verdict::positive_q_complement: return "POSITIVE_Q_COMPLEMENT";
    case Verdict::both_positive: return "BOTH_POSITIVE";
    case Verdict::undetected: return "UNDETECTED";
  }
  throw std::logic_error("verdict_name");
}

std::string rule_name(Rule r) {
  switch (r) {
    case Rule::trace_test: return "trace_test";
    case Rule::dim_rule_out: return "dim_rule_out";
    case Rule::dim_rule_env: return "dim_rule_env";
    case Rule::dim_rule_input: return "dim_rule_input";
    case Rule::max_rank_rule: return "max_rank_rule";
    case Rule::operator_inequality: return "operator_inequality";
    case Rule::none: return "none";
  }
  throw std::logic_error("rule_name");
}

bool ProbeResult::certifies_fwd(const ToleranceConfig& tol) const {
  return reliable && lambda_max > tol.detection_gap;
}

bool ProbeResult::certifies_rev(const ToleranceConfig& tol) const {
  return reliable && lambda_min < -tol.detection_gap;
}

namespace {

struct ProbeCore {
  Projector k_out;
  Projector k_env;
  RealVector d_eigenvalues;
  Matrix d_eigenvectors;
  bool near_threshold = false;
};

ProbeCore probe_core(const ComplementaryPair& pair, const Matrix& rho_psi,
                     const ToleranceConfig& tol) {
  ProbeCore core;
  PsdSpectrum out = psd_spectrum(pair.channel.apply(rho_psi), tol);
  PsdSpectrum env = psd_spectrum(pair.complement.apply(rho_psi), tol);
  core.near_threshold = out.near_threshold() || env.near_threshold();
  core.k_out = out.kernel();
  core.k_env = env.kernel();
  Matrix d = pair.channel.adjoint_apply(core.k_out.matrix) -
             pair.complement.adjoint_apply(core.k_env.matrix);
  EigResult eig = hermitian_eig(d);
  core.d_eigenvalues = std::move(eig.values);
  core.d_eigenvectors = std::move(eig.vectors);
  return core;
}

}  // namespace

ProbeResult probe(const ComplementaryPair& pair, const LabeledState& psi,
                  const ToleranceConfig& tol, const std::optional<Matrix>& sigma) {
  const Index d = pair.channel.d_in;
  if (psi.psi.size() != d) throw ValidationError("probe: state dimension mismatch");
  require_unit_vector(psi.psi);
  const Matrix rho_psi = projector_onto(psi.psi);
  const Matrix sig = sigma ? *sigma : Matrix(Matrix::Identity(d, d) / double(d));
  if (sig.rows() != d || sig.cols() != d)
    throw ValidationError("probe: sigma dimension mismatch");

  ProbeCore core = probe_core(pair, rho_psi, tol);

  ProbeResult result;
  result.psi = psi;
  const Index n = core.d_eigenvalues.size();
  result.lambda_min = core.d_eigenvalues(0);
  result.lambda_max = core.d_eigenvalues(n - 1);
  result.out_rank = pair.channel.d_out - core.k_out.rank;
  result.env_rank = pair.complement.d_out - core.k_env.rank;
  if (result.lambda_max > 0.0)
    result.witness_sigma_fwd = projector_onto(core.d_eigenvectors.col(n - 1));
  if (result.lambda_min < 0.0)
    result.witness_sigma_rev = projector_onto(core.d_eigenvectors.col(0));
  result.trace_fwd = (core.k_out.matrix * pair.channel.apply(sig)).trace().real();
  result.trace_rev = (core.k_env.matrix * pair.complement.apply(sig)).trace().real();
  result.inconclusive_fwd =
      result.lambda_max > 0.0 && result.lambda_max <= tol.detection_gap;
  result.inconclusive_rev =
      result.lambda_min < 0.0 && result.lambda_min >= -tol.detection_gap;

  // Kernel multiplicity sensitivity: when the output spectrum sits near the
  // rank threshold, rerun with rank_rtol tightened by 1e-2 and require the
  // same kernel ranks and certificate classification.
  if (core.near_threshold) {
    result.unstable = true;
    ProbeCore tight = probe_core(pair, rho_psi, tol.with_rank_rtol_scaled(1e-2));
    const Index tn = tight.d_eigenvalues.size();
    const bool same_ranks = tight.k_out.rank == core.k_out.rank &&
                            tight.k_env.rank == core.k_env.rank;
    const bool same_cert =
        (tight.d_eigenvalues(tn - 1) > tol.detection_gap) ==
            (result.lambda_max > tol.detection_gap) &&
        (tight.d_eigenvalues(0) < -tol.detection_gap) ==
            (result.lambda_min < -tol.detection_gap);
    result.reliable = same_ranks && same_cert;
  }
  return result;
}

ProbeResult probe(const ComplementaryPair& pair, const Vector& psi,
                  const ToleranceConfig& tol, const std::optional<Matrix>& sigma) {
  return probe(pair, LabeledState{"psi", psi}, tol, sigma);
}

std::optional<DimensionVerdict> dimension_rules(const ComplementaryPair& pair,
                                                Index max_rank_found,
                                                const ToleranceConfig& tol) {
  const Index d = pair.channel.d_in;
  const Index out = minimal_out_dim(pair.channel, tol);
  const Index env = minimal_env_dim(pair.channel, tol);
  if (out > env && out > d * (env - 1))
    return DimensionVerdict{Verdict::positive_q, Rule::dim_rule_out};
  if (env > out && env > d * (out - 1))
    return DimensionVerdict{Verdict::positive_q_complement, Rule::dim_rule_env};
  if (out > env && d > out * (env - 1))
    return DimensionVerdict{Verdict::positive_q, Rule::dim_rule_input};
  if (env > out && d > env * (out - 1))
    return DimensionVerdict{Verdict::positive_q_complement, Rule::dim_rule_input};
  if (max_rank_found > 0 && max_rank_found == std::min(out, env) && out != env) {
    return DimensionVerdict{out > env ? Verdict::positive_q : Verdict::positive_q_complement,
                            Rule::max_rank_rule};
  }
  return std::nullopt;
}

std::vector<std::string> implications_for(Verdict v) {
  const std::vector<std::string> fwd = {"not anti-degradable",
                                        "not transpose anti-degradable"};
  const std::vector<std::string> rev = {"not more capable", "not degradable",
                                        "not transpose degradable"};
  switch (v) {
    case Verdict::positive_q: return fwd;
    case Verdict::positive_q_complement: return rev;
    case Verdict::both_positive: {
      std::vector<std::string> all = fwd;
      all.insert(all.end(), rev.begin(), rev.end());
      return all;
    }
    case Verdict::undetected: return {"no positivity certificate found"};
  }
  throw std::logic_error("implications_for");
}

std::string DetectionReport::witness_label(Verdict direction) const {
  if (direction == Verdict::positive_q && best_fwd_index >= 0)
    return probes[size_t(best_fwd_index)].psi.label;
  if (direction == Verdict::positive_q_complement && best_rev_index >= 0)
    return probes[size_t(best_rev_index)].psi.label;
  return "";
}

DetectionReport search(const ComplementaryPair& pair,
                       const std::vector<LabeledState>& probe_states,
                       const ToleranceConfig& tol) {
  tol.validate();
  if (probe_states.empty()) throw ValidationError("search: probe list is empty");

  DetectionReport report;
  report.d_in = pair.channel.d_in;
  report.d_out_min = minimal_out_dim(pair.channel, tol);
  report.d_env_min = minimal_env_dim(pair.channel, tol);

  // Integer dimension rules first; no probe data needed.
  std::optional<DimensionVerdict> dim = dimension_rules(pair, 0, tol);

  bool fwd = false, rev = false;
  auto run_probe = [&](const LabeledState& s) {
    ProbeResult r = probe(pair, s, tol);
    if (r.reliable) {
      report.max_rank_found = std::max(report.max_rank_found, r.out_rank);
      if (r.lambda_max > report.best_gap_fwd || report.best_fwd_index < 0) {
        report.best_gap_fwd = r.lambda_max;
        report.best_fwd_index = int(report.probes.size());
      }
      if (-r.lambda_min > report.best_gap_rev || report.best_rev_index < 0) {
        report.best_gap_rev = -r.lambda_min;
        report.best_rev_index = int(report.probes.size());
      }
      fwd = fwd || r.certifies_fwd(tol);
      rev = rev || r.certifies_rev(tol);
    }
    report.probes.push_back(std::move(r));
  };

  for (const LabeledState& s : probe_states) run_probe(s);
  for (int k = 0; k < tol.haar_samples && !(fwd && rev); ++k) {
    Rng rng(mix_seed(tol.rng_seed, std::uint64_t(k)));
    run_probe({"haar_" + std::to_string(k), haar_state(pair.channel.d_in, rng)});
  }

  report.max_rank_hypothesis_met =
      report.max_rank_found == std::min(report.d_out_min, report.d_env_min) &&
      report.d_out_min != report.d_env_min;
  if (!dim) dim = dimension_rules(pair, report.max_rank_found, tol);

  const bool fwd_established = fwd || (dim && dim->verdict == Verdict::positive_q);
  const bool rev_established = rev || (dim && dim->verdict == Verdict::positive_q_complement);

  if (fwd_established && rev_established)
    report.verdict = Verdict::both_positive;
  else if (fwd_established)
    report.verdict = Verdict::positive_q;
  else if (rev_established)
    report.verdict = Verdict::positive_q_complement;
  else
    report.verdict = Verdict::undetected;

  if (dim) {
    report.rule_fired = dim->rule;
  } else if (report.verdict == Verdict::positive_q) {
    report.rule_fired = Rule::operator_inequality;
  } else if (report.verdict == Verdict::positive_q_complement) {
    report.rule_fired = Rule::trace_test;
  } else if (report.verdict == Verdict::both_positive) {
    // Rule of the earliest certificate; a probe certifying both counts as
    // an operator-inequality violation.
    for (const ProbeResult& r : report.probes) {
      if (r.certifies_fwd(tol)) { report.rule_fired = Rule::operator_inequality; break; }
      if (r.certifies_rev(tol)) { report.rule_fired = Rule::trace_test; break; }
    }
  }
  report.implications = implications_for(report.verdict);
  return report;
}

std::vector<LabeledState> two_copy_witness_states(Index d) {
  std::vector<LabeledState> states;
  Vector omega = Vector::Zero(d * d);
  for (Index i = 0; i < d; ++i) omega(i * d + i) = 1.0 / std::sqrt(double(d));
  states.push_back({"max_entangled", std::move(omega)});
  for (const LabeledState& s : default_witness_states(d * d)) states.push_back(s);
  return states;
}

ProbeResult nshot_probe(const ComplementaryPair& pair, const LabeledState& psi,
                        const ToleranceConfig& tol) {
  return probe(tensor_square(pair, tol), psi, tol);
}

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.11e", x);
  return buf;
}

namespace {

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json vector_to_json(const Vector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

}  // namespace

nlohmann::json report_to_json(const DetectionReport& report) {
  nlohmann::json j;
  j["verdict"] = verdict_name(report.verdict);
  j["rule_fired"] = rule_name(report.rule_fired);
  j["d_in"] = report.d_in;
  j["d_out_min"] = report.d_out_min;
  j["d_env_min"] = report.d_env_min;
  j["max_rank_found"] = report.max_rank_found;
  j["max_rank_hypothesis_met"] = report.max_rank_hypothesis_met;
  j["best_gap_fwd"] = report.best_gap_fwd;
  j["best_gap_rev"] = report.best_gap_rev;
  j["witness_psi_fwd"] = report.witness_label(Verdict::positive_q);
  j["witness_psi_rev"] = report.witness_label(Verdict::positive_q_complement);
  j["implications"] = report.implications;
  nlohmann::json probes = nlohmann::json::array();
  for (int i = 0; i < int(report.probes.size()); ++i) {
    const ProbeResult& r = report.probes[size_t(i)];
    nlohmann::json p;
    p["psi_label"] = r.psi.label;
    p["lambda_max"] = r.lambda_max;
    p["lambda_min"] = r.lambda_min;
    p["trace_fwd"] = r.trace_fwd;
    p["trace_rev"] = r.trace_rev;
    p["out_rank"] = r.out_rank;
    p["env_rank"] = r.env_rank;
    p["unstable"] = r.unstable;
    p["reliable"] = r.reliable;
    p["inconclusive_fwd"] = r.inconclusive_fwd;
    p["inconclusive_rev"] = r.inconclusive_rev;
    if (i == report.best_fwd_index || i == report.best_rev_index) {
      p["psi"] = vector_to_json(r.psi.psi);
      if (i == report.best_fwd_index && r.witness_sigma_fwd)
        p["witness_sigma_fwd"] = matrix_to_json(*r.witness_sigma_fwd);
      if (i == report.best_rev_index && r.witness_sigma_rev)
        p["witness_sigma_rev"] = matrix_to_json(*r.witness_sigma_rev);
    }
    probes.push_back(std::move(p));
  }
  j["probes"] = std::move(probes);
  return j;
}

std::string report_csv_header() {
  return "family,params,d,d_out_min,d_env_min,verdict,rule_fired,best_gap_fwd,"
         "best_gap_rev,witness_psi_label";
}

std::string report_csv_row(const DetectionReport& report, const std::string& family,
                           const std::string& params, Index d) {
  std::string witness;
  switch (report.verdict) {
    case Verdict::positive_q:
      witness = report.witness_label(Verdict::positive_q);
      break;
    case Verdict::positive_q_complement:
      witness = report.witness_label(Verdict::positive_q_complement);
      break;
    case Verdict::both_positive:
      witness = report.witness_label(Verdict::positive_q) + ";" +
                report.witness_label(Verdict::positive_q_complement);
      break;
    case Verdict::undetected:
      break;
  }
  std::ostringstream out;
  out << family << "," << params << "," << d << "," << report.d_out_min << ","
      << report.d_env_min << "," << verdict_name(report.verdict) << ","
      << rule_name(report.rule_fired) << "," << format_real(report.best_gap_fwd) << ","
      << format_real(report.best_gap_rev) << "," << witness;
  return out.str();
}

}  // namespace qcap
