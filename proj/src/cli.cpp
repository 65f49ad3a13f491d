#include "qcap/cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <thread>

namespace qcap::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string default_manifest_path() {
#ifdef QCAP_DEFAULT_MANIFEST
  return QCAP_DEFAULT_MANIFEST;
#else
  return "data/reproduce_manifest.json";
#endif
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw ValidationError("malformed JSON in " + path + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write file: " + path.string());
  out << text;
}

template <typename Fn>
void parallel_for(int n, int jobs, Fn&& fn) {
  if (jobs <= 0) jobs = int(std::thread::hardware_concurrency());
  jobs = std::max(1, std::min(jobs, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  workers.reserve(size_t(jobs));
  for (int t = 0; t < jobs; ++t)
    workers.emplace_back([&] {
      for (int i = next++; i < n; i = next++) fn(i);
    });
  for (auto& w : workers) w.join();
}

Matrix mixed_state(Index d) { return Matrix::Identity(d, d) / double(d); }

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

Problem resolve_problem(const RunConfig& config) {
  const int sources = int(bool(config.family_spec)) + int(bool(config.channel_file));
  if (sources != 1)
    throw ValidationError("exactly one channel source required: --family/--spec-file or --channel-file");
  if (config.channel_file) {
    Channel phi = load_channel_file(*config.channel_file);
    Problem prob{complement(phi, config.tol), default_witness_states(phi.d_in),
                 "channel-file", fs::path(*config.channel_file).filename().string(),
                 phi.d_in};
    if (config.probe_cap > 0 && Index(prob.states.size()) > config.probe_cap)
      prob.states.resize(size_t(config.probe_cap));
    return prob;
  }
  const FamilySpec& spec = *config.family_spec;
  Problem prob{build_pair(spec, config.tol), canonical_witness_states(spec),
               family_name(spec.family()), params_summary(spec), 0};
  prob.d = prob.pair.channel.d_in;
  if (config.probe_cap > 0 && Index(prob.states.size()) > config.probe_cap)
    prob.states.resize(size_t(config.probe_cap));
  return prob;
}

int cmd_detect(const RunConfig& config) {
  return guarded([&] {
    Problem prob = resolve_problem(config);
    DetectionReport report = search(prob.pair, prob.states, config.tol);
    fs::create_directories(config.out_dir);
    const fs::path out(config.out_dir);
    write_text(out / "detect_report.json", report_to_json(report).dump(2) + "\n");
    write_text(out / "detect_summary.csv",
               report_csv_header() + "\n" +
                   report_csv_row(report, prob.family, prob.params, prob.d) + "\n");
    if (config.format == "json") {
      json line;
      line["verdict"] = verdict_name(report.verdict);
      line["rule_fired"] = rule_name(report.rule_fired);
      line["d_out_min"] = report.d_out_min;
      line["d_env_min"] = report.d_env_min;
      std::cout << line.dump() << "\n";
    } else {
      std::cout << report_csv_row(report, prob.family, prob.params, prob.d) << "\n";
    }
    return 0;
  });
}

namespace {

struct WitnessChoice {
  int index = -1;
  bool complement_direction = false;
};

WitnessChoice choose_witness(const DetectionReport& report, const std::string& psi_label,
                             const ToleranceConfig& tol) {
  WitnessChoice choice;
  if (!psi_label.empty()) {
    for (int i = 0; i < int(report.probes.size()); ++i) {
      if (report.probes[size_t(i)].psi.label == psi_label) {
        choice.index = i;
        choice.complement_direction = !report.probes[size_t(i)].certifies_fwd(tol) &&
                                      report.probes[size_t(i)].certifies_rev(tol);
        return choice;
      }
    }
    throw ValidationError("no probe with label " + psi_label);
  }
  switch (report.verdict) {
    case Verdict::positive_q:
    case Verdict::both_positive:
      choice.index = report.best_fwd_index;
      break;
    case Verdict::positive_q_complement:
      choice.index = report.best_rev_index;
      choice.complement_direction = true;
      break;
    case Verdict::undetected:
      choice.index = report.probes.empty() ? -1 : 0;
      break;
  }
  return choice;
}

}  // namespace

int cmd_sweep(const RunConfig& config) {
  return guarded([&] {
    Problem prob = resolve_problem(config);
    DetectionReport report = search(prob.pair, prob.states, config.tol);
    WitnessChoice choice = choose_witness(report, config.psi_label, config.tol);
    if (choice.index < 0) throw ValidationError("sweep: no probe available");
    const ProbeResult& pr = report.probes[size_t(choice.index)];
    const Matrix sigma =
        choice.complement_direction
            ? pr.witness_sigma_rev.value_or(mixed_state(prob.pair.channel.d_in))
            : pr.witness_sigma_fwd.value_or(mixed_state(prob.pair.channel.d_in));
    const ComplementaryPair dir_pair =
        choice.complement_direction ? swapped(prob.pair) : prob.pair;
    SweepResult result = sweep(dir_pair, pr.psi.psi, sigma, config.tol);
    fs::create_directories(config.out_dir);
    write_text(fs::path(config.out_dir) / "sweep.csv", sweep_csv(result));
    std::cout << "psi=" << pr.psi.label
              << " direction=" << (choice.complement_direction ? "complement" : "channel")
              << " slope_predicted=" << format_real(result.slope_predicted)
              << " slope_fitted=" << format_real(result.slope_fitted)
              << " best_ic=" << format_real(result.best_ic)
              << " best_eps=" << format_real(result.best_eps) << "\n";
    return 0;
  });
}

int cmd_verify(const RunConfig& config) {
  return guarded([&] {
    Problem prob = resolve_problem(config);
    const ToleranceConfig& tol = config.tol;
    DetectionReport report = search(prob.pair, prob.states, tol);
    json out;
    out["verdict"] = verdict_name(report.verdict);
    out["rule_fired"] = rule_name(report.rule_fired);
    json directions = json::array();
    bool all_ok = true;

    auto check_direction = [&](bool complement_direction, int index) {
      const ProbeResult& pr = report.probes[size_t(index)];
      const double gap = complement_direction ? -pr.lambda_min : pr.lambda_max;
      const Matrix sigma =
          complement_direction
              ? pr.witness_sigma_rev.value_or(mixed_state(prob.pair.channel.d_in))
              : pr.witness_sigma_fwd.value_or(mixed_state(prob.pair.channel.d_in));
      const ComplementaryPair dir_pair =
          complement_direction ? swapped(prob.pair) : prob.pair;
      SweepResult s = sweep(dir_pair, pr.psi.psi, sigma, tol);
      PerturbationCheck pc = perturbation_slopes(
          dir_pair, pr.psi.psi, mixed_state(prob.pair.channel.d_in), Direction::channel, tol);
      const bool sweep_ok = s.best_ic > 0.0 && std::abs(s.ic_at_zero) <= 1e-8;
      const bool slope_ok =
          gap <= 1e-4 || (s.slope_fitted >= 0.5 * gap && s.slope_fitted <= 1.5 * gap);
      const bool pert_ok = pc.trivial || pc.max_rel_err < 1e-3;
      json d;
      d["direction"] = complement_direction ? "complement" : "channel";
      d["psi_label"] = pr.psi.label;
      d["gap"] = gap;
      d["best_ic"] = s.best_ic;
      d["best_eps"] = s.best_eps;
      d["ic_at_zero"] = s.ic_at_zero;
      d["slope_predicted"] = s.slope_predicted;
      d["slope_fitted"] = s.slope_fitted;
      d["perturbation"] = perturbation_to_json(pc);
      d["sweep_ok"] = sweep_ok;
      d["slope_ok"] = slope_ok;
      d["perturbation_ok"] = pert_ok;
      directions.push_back(std::move(d));
      all_ok = all_ok && sweep_ok && slope_ok && pert_ok;
      std::cout << (complement_direction ? "complement" : "channel") << " direction: "
                << (sweep_ok && slope_ok && pert_ok ? "PASS" : "FAIL")
                << " (best_ic=" << format_real(s.best_ic)
                << ", slope_fitted=" << format_real(s.slope_fitted)
                << ", pert_rel_err=" << format_real(pc.max_rel_err) << ")\n";
    };

    const bool fwd = report.verdict == Verdict::positive_q ||
                     report.verdict == Verdict::both_positive;
    const bool rev = report.verdict == Verdict::positive_q_complement ||
                     report.verdict == Verdict::both_positive;
    if (fwd && report.best_fwd_index >= 0) check_direction(false, report.best_fwd_index);
    if (rev && report.best_rev_index >= 0) check_direction(true, report.best_rev_index);
    if (!fwd && !rev) std::cout << "no detection to verify (verdict UNDETECTED)\n";

    out["directions"] = std::move(directions);
    out["all_ok"] = all_ok;
    fs::create_directories(config.out_dir);
    write_text(fs::path(config.out_dir) / "verify.json", out.dump(2) + "\n");
    return all_ok ? 0 : 1;
  });
}

int cmd_rank_scan(const RunConfig& config) {
  return guarded([&] {
    Problem prob = resolve_problem(config);
    const ToleranceConfig& tol = config.tol;
    Index max_rank = 0;
    std::string attained_at;
    auto scan = [&](const LabeledState& s) {
      const Index r =
          numerical_rank(prob.pair.channel.apply(projector_onto(s.psi)), tol);
      if (r > max_rank) {
        max_rank = r;
        attained_at = s.label;
      }
    };
    for (const LabeledState& s : prob.states) scan(s);
    for (int k = 0; k < tol.haar_samples; ++k) {
      Rng rng(mix_seed(tol.rng_seed, std::uint64_t(k)));
      scan({"haar_" + std::to_string(k), haar_state(prob.pair.channel.d_in, rng)});
    }
    const Index out_min = minimal_out_dim(prob.pair.channel, tol);
    const Index env_min = minimal_env_dim(prob.pair.channel, tol);
    const bool hypothesis =
        max_rank == std::min(out_min, env_min) && out_min != env_min;
    json j;
    j["max_rank_found"] = max_rank;
    j["attained_at"] = attained_at;
    j["d_out_min"] = out_min;
    j["d_env_min"] = env_min;
    j["max_rank_hypothesis_met"] = hypothesis;
    fs::create_directories(config.out_dir);
    write_text(fs::path(config.out_dir) / "rank_scan.json", j.dump(2) + "\n");
    std::cout << "max_rank=" << max_rank << " at=" << attained_at << " d_out_min="
              << out_min << " d_env_min=" << env_min
              << " max_rank_hypothesis_met=" << (hypothesis ? "yes" : "no") << "\n";
    return 0;
  });
}

namespace {

double parse_p_entry(const json& e, Index d) {
  if (e.is_number()) return e.get<double>();
  const std::string s = e.get<std::string>();
  if (s == "max") return double(d * d) / double(d * d - 1);
  throw ValidationError("manifest: unknown p entry " + s);
}

double parse_q_entry(const json& e, Index d) {
  if (e.is_number()) return e.get<double>();
  const std::string s = e.get<std::string>();
  const double lo = double(d) / double(d + 1);
  const double hi = double(d) / double(d - 1);
  if (s == "min") return lo;
  if (s == "mid") return 0.5 * (lo + hi);
  if (s == "near-max") return 0.999 * hi;
  throw ValidationError("manifest: unknown q entry " + s);
}

RealMatrix decay_from_json(const json& gammas, Index d) {
  RealMatrix decay = RealMatrix::Zero(d, d);
  for (const auto& g : gammas)
    decay(g.at("from").get<Index>(), g.at("to").get<Index>()) = g.at("rate").get<double>();
  return decay;
}

std::vector<FamilySpec> rows_for_table(const std::string& table, const json& manifest,
                                       const ToleranceConfig& tol) {
  if (!manifest.contains(table))
    throw ValidationError("manifest has no table named " + table);
  const json& m = manifest.at(table);
  std::vector<FamilySpec> rows;
  std::uint64_t row_index = 0;
  auto row_rng = [&] { return Rng(mix_seed(tol.rng_seed, row_index)); };

  if (table == "depolarizing") {
    for (Index d : m.at("d").get<std::vector<Index>>())
      for (const auto& pe : m.at("p")) {
        rows.push_back({d, DepolarizingParams{parse_p_entry(pe, d)}});
        ++row_index;
      }
  } else if (table == "transpose-depolarizing") {
    for (Index d : m.at("d").get<std::vector<Index>>())
      for (const auto& qe : m.at("q")) {
        rows.push_back({d, TransposeDepolarizingParams{parse_q_entry(qe, d)}});
        ++row_index;
      }
  } else if (table == "werner-holevo") {
    for (Index d : m.at("d").get<std::vector<Index>>()) {
      rows.push_back({d, WernerHolevoParams{}});
      ++row_index;
    }
  } else if (table == "pauli") {
    const int count = m.at("count").get<int>();
    for (Index d : m.at("d").get<std::vector<Index>>())
      for (int k = 0; k < count; ++k) {
        Rng rng = row_rng();
        std::uniform_real_distribution<double> unif(0.01, 1.0);
        RealMatrix prob(d, d);
        for (Index i = 0; i < d; ++i)
          for (Index j = 0; j < d; ++j) prob(i, j) = unif(rng);
        prob /= prob.sum();
        rows.push_back({d, PauliParams{std::move(prob)}});
        ++row_index;
      }
  } else if (table == "mad") {
    for (const char* bullet : {"bullet1", "bullet2"})
      for (const auto& entry : m.at(bullet)) {
        const Index d = entry.at("d").get<Index>();
        rows.push_back({d, MadParams{decay_from_json(entry.at("gamma"), d)}});
        ++row_index;
      }
  } else if (table == "dephasing") {
    const int full_rank_count = m.value("full_rank_count", 3);
    for (Index d : m.at("d").get<std::vector<Index>>()) {
      if (m.value("include_identity", true)) {
        rows.push_back({d, DephasingParams{Matrix::Identity(d, d)}});
        ++row_index;
      }
      for (int k = 0; k < full_rank_count; ++k) {
        Rng rng = row_rng();
        rows.push_back({d, DephasingParams{random_correlation(d, rng)}});
        ++row_index;
      }
      if (m.contains("deficient_ranks")) {
        const std::string key = std::to_string(d);
        if (m.at("deficient_ranks").contains(key))
          for (Index r : m.at("deficient_ranks").at(key).get<std::vector<Index>>()) {
            Rng rng = row_rng();
            rows.push_back({d, DephasingParams{random_correlation(d, rng, r)}});
            ++row_index;
          }
      }
    }
  } else if (table == "cduc") {
    const int count = m.at("count").get<int>();
    for (Index d : m.at("d").get<std::vector<Index>>())
      for (int k = 0; k < count; ++k) {
        Rng rng = row_rng();
        CducParams params = random_cduc_params(d, rng);
        rows.push_back({d, std::move(params)});
        ++row_index;
      }
  } else if (table == "unitary-dilation") {
    const int count = m.at("count").get<int>();
    for (Index d : m.at("d").get<std::vector<Index>>())
      for (int k = 0; k < count; ++k) {
        Rng rng = row_rng();
        rows.push_back({d, UnitaryDilationParams{haar_unitary(d * d, rng)}});
        ++row_index;
      }
  } else {
    throw ValidationError("unknown table name: " + table);
  }
  return rows;
}

}  // namespace

int cmd_reproduce(const RunConfig& config) {
  return guarded([&] {
    if (config.table.empty()) throw ValidationError("reproduce: --table is required");
    const std::string manifest_path =
        config.manifest_path.empty() ? default_manifest_path() : config.manifest_path;
    const json manifest = load_json_file(manifest_path);
    std::vector<FamilySpec> rows = rows_for_table(config.table, manifest, config.tol);
    std::vector<std::string> csv_rows(rows.size());
    parallel_for(int(rows.size()), config.jobs, [&](int i) {
      const FamilySpec& spec = rows[size_t(i)];
      ComplementaryPair pair = build_pair(spec, config.tol);
      DetectionReport report = search(pair, canonical_witness_states(spec), config.tol);
      csv_rows[size_t(i)] =
          report_csv_row(report, family_name(spec.family()), params_summary(spec), spec.d);
    });
    std::string table_text = report_csv_header() + "\n";
    for (const std::string& row : csv_rows) table_text += row + "\n";
    fs::create_directories(config.out_dir);
    const fs::path out_path =
        fs::path(config.out_dir) / ("reproduce_" + config.table + ".csv");
    write_text(out_path, table_text);
    std::cout << "wrote " << out_path.string() << " (" << rows.size() << " rows)\n";
    return 0;
  });
}

namespace {

FamilySpec spec_from_flags(const std::string& family, Index d, double p, double q,
                           const std::string& gamma_file, const std::string& ab_file,
                           const std::string& b_file, const std::string& b_preset,
                           std::uint64_t seed) {
  if (d < 1) throw ValidationError("--d is required with --family");
  const Family f = family_from_name(family);
  json spec_json;
  spec_json["family"] = family_name(f);
  spec_json["d"] = d;
  json params = json::object();
  switch (f) {
    case Family::depolarizing:
      if (std::isnan(p)) throw ValidationError("depolarizing requires --p");
      params["p"] = p;
      break;
    case Family::transpose_depolarizing:
      if (std::isnan(q)) throw ValidationError("transpose-depolarizing requires --q");
      params["q"] = q;
      break;
    case Family::werner_holevo:
      break;
    case Family::pauli:
      throw ValidationError("pauli requires --spec-file with params.P");
    case Family::mad: {
      if (gamma_file.empty()) throw ValidationError("mad requires --gamma-file");
      json g = load_json_file(gamma_file);
      params["gamma"] = g.is_array() ? g : g.at("gamma");
      break;
    }
    case Family::duc:
    case Family::cduc: {
      if (ab_file.empty()) throw ValidationError("(c)duc requires --ab-file");
      json ab = load_json_file(ab_file);
      params["A"] = ab.at("A");
      params["B"] = ab.at("B");
      break;
    }
    case Family::dephasing: {
      if (!b_preset.empty()) {
        params["B"] = b_preset;
      } else if (!b_file.empty()) {
        json b = load_json_file(b_file);
        params["B"] = b.is_object() && b.contains("B") ? b.at("B") : b;
      } else {
        throw ValidationError("dephasing requires --b or --b-file");
      }
      break;
    }
    case Family::unitary_dilation: {
      // No file given: a Haar unitary drawn deterministically from the seed.
      Rng rng(mix_seed(seed, 0xd11a));
      FamilySpec spec{d, UnitaryDilationParams{haar_unitary(d * d, rng)}};
      return spec;
    }
  }
  spec_json["params"] = std::move(params);
  return family_spec_from_json(spec_json);
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"qcap: detect positive quantum capacity of channels and complements"};
  app.require_subcommand(1);

  RunConfig config;
  std::string family, gamma_file, ab_file, b_file, b_preset, spec_file, channel_file;
  Index d = 0;
  double p = std::nan(""), q = std::nan("");
  std::uint64_t seed = config.tol.rng_seed;
  int haar_samples = -1;
  double rank_rtol = -1.0, detection_gap = -1.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--family", family, "channel family name");
    sub->add_option("--d", d, "input dimension");
    sub->add_option("--p", p, "depolarizing parameter");
    sub->add_option("--q", q, "transpose-depolarizing parameter");
    sub->add_option("--gamma-file", gamma_file, "MAD decay rates JSON");
    sub->add_option("--ab-file", ab_file, "(C)DUC A/B matrices JSON");
    sub->add_option("--b-file", b_file, "dephasing correlation matrix JSON");
    sub->add_option("--b", b_preset, "dephasing preset: identity|ones");
    sub->add_option("--spec-file", spec_file, "full FamilySpec JSON");
    sub->add_option("--channel-file", channel_file, "Kraus-operator channel JSON");
    sub->add_option("--probes", config.probe_cap, "cap on listed probe states");
    sub->add_option("--haar-samples", haar_samples, "Haar probe count");
    sub->add_option("--seed", seed, "RNG seed (QCAP_SEED overrides)");
    sub->add_option("--rank-rtol", rank_rtol, "relative rank threshold");
    sub->add_option("--detection-gap", detection_gap, "detection gap threshold");
    sub->add_option("--out-dir", config.out_dir, "output directory");
    sub->add_option("--format", config.format, "stdout summary format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--jobs", config.jobs, "worker count for grids");
  };

  CLI::App* detect = app.add_subcommand("detect", "run the detection search");
  add_common(detect);
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "coherent-information eps sweep");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--psi", config.psi_label, "probe state label to sweep");
  CLI::App* verify = app.add_subcommand("verify", "detect plus numerical validation");
  add_common(verify);
  CLI::App* reproduce = app.add_subcommand("reproduce", "emit a manifest table");
  add_common(reproduce);
  reproduce->add_option("--table", config.table, "table name")->required();
  reproduce->add_option("--manifest", config.manifest_path, "manifest JSON path");
  CLI::App* rank_scan = app.add_subcommand("rank-scan", "pure-state output rank scan");
  add_common(rank_scan);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  return guarded([&] {
    if (const char* env_seed = std::getenv("QCAP_SEED")) seed = std::strtoull(env_seed, nullptr, 10);
    config.tol.rng_seed = seed;
    if (haar_samples >= 0) config.tol.haar_samples = haar_samples;
    if (rank_rtol > 0.0) config.tol.rank_rtol = rank_rtol;
    if (detection_gap > 0.0) config.tol.detection_gap = detection_gap;
    config.tol.validate();

    if (!spec_file.empty())
      config.family_spec = family_spec_from_json(load_json_file(spec_file));
    else if (!family.empty())
      config.family_spec =
          spec_from_flags(family, d, p, q, gamma_file, ab_file, b_file, b_preset, seed);
    if (!channel_file.empty()) config.channel_file = channel_file;

    if (detect->parsed()) return cmd_detect(config);
    if (sweep_cmd->parsed()) return cmd_sweep(config);
    if (verify->parsed()) return cmd_verify(config);
    if (reproduce->parsed()) return cmd_reproduce(config);
    if (rank_scan->parsed()) return cmd_rank_scan(config);
    throw ValidationError("no subcommand given");
  });
}

}  // namespace qcap::cli
