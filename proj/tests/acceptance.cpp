// Acceptance suite: one pass/fail line per criterion, exit code = failures.

#include "qcap/cli.hpp"
#include "qcap/detector.hpp"
#include "qcap/verifier.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

using namespace qcap;

namespace {

struct CriterionRun {
  int number;
  std::string name;
  std::vector<std::string> notes;
  bool ok = true;

  void check(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      notes.push_back(what);
    }
  }
};

// Detections collected from criteria 1-7, re-validated by criterion 9.
struct Detection {
  std::string label;
  ComplementaryPair pair;
  Vector psi;
  Matrix sigma;
  bool complement_direction;
};

std::vector<Detection> g_detections;

const ToleranceConfig g_tol;  // spec defaults, seed fixed in ToleranceConfig

void collect_detections(const std::string& label, const ComplementaryPair& pair,
                        const DetectionReport& report) {
  const bool fwd = report.verdict == Verdict::positive_q ||
                   report.verdict == Verdict::both_positive;
  const bool rev = report.verdict == Verdict::positive_q_complement ||
                   report.verdict == Verdict::both_positive;
  if (fwd && report.best_fwd_index >= 0) {
    const ProbeResult& p = report.probes[size_t(report.best_fwd_index)];
    if (p.witness_sigma_fwd)
      g_detections.push_back({label, pair, p.psi.psi, *p.witness_sigma_fwd, false});
  }
  if (rev && report.best_rev_index >= 0) {
    const ProbeResult& p = report.probes[size_t(report.best_rev_index)];
    if (p.witness_sigma_rev)
      g_detections.push_back({label, pair, p.psi.psi, *p.witness_sigma_rev, true});
  }
}

std::string verdict_note(const std::string& label, const DetectionReport& r) {
  return label + ": verdict=" + verdict_name(r.verdict) + " rule=" + rule_name(r.rule_fired) +
         " dims=(" + std::to_string(r.d_out_min) + "," + std::to_string(r.d_env_min) + ")";
}

// --- criterion 1 -----------------------------------------------------------

void criterion_1(CriterionRun& c) {
  for (Index d = 4; d <= 8; ++d) {
    ComplementaryPair pair = complement(make_werner_holevo(d), g_tol);
    ProbeResult r = probe(pair, LabeledState{"basis_0", basis_state(d, 0)}, g_tol);
    c.check(std::abs(r.trace_fwd - 1.0 / double(d)) < 1e-9,
            "d=" + std::to_string(d) + " trace_fwd != 1/d");
    c.check(std::abs(r.trace_rev - double(d - 2) / double(d)) < 1e-9,
            "d=" + std::to_string(d) + " trace_rev != (d-2)/d");
    FamilySpec spec{d, WernerHolevoParams{}};
    DetectionReport report = search(pair, canonical_witness_states(spec), g_tol);
    c.check(report.verdict == Verdict::positive_q_complement,
            verdict_note("werner-holevo d=" + std::to_string(d), report));
    collect_detections("werner-holevo d=" + std::to_string(d), pair, report);
  }
  ComplementaryPair pair3 = complement(make_werner_holevo(3), g_tol);
  ProbeResult r3 = probe(pair3, LabeledState{"basis_0", basis_state(3, 0)}, g_tol);
  c.check(std::abs(r3.trace_fwd - r3.trace_rev) < 1e-9, "d=3 traces differ");
  FamilySpec spec3{3, WernerHolevoParams{}};
  DetectionReport report3 = search(pair3, canonical_witness_states(spec3), g_tol);
  c.check(report3.verdict == Verdict::undetected, verdict_note("werner-holevo d=3", report3));
}

// --- criterion 2 -----------------------------------------------------------

void criterion_2(CriterionRun& c) {
  for (Index d : {2, 3, 4, 5}) {
    const double p_max = double(d * d) / double(d * d - 1);
    c.check(minimal_env_dim(make_depolarizing(d, 0.0), g_tol) == 1,
            "d=" + std::to_string(d) + " Choi rank at p=0 != 1");
    for (double p : {0.01, 0.1, 0.5, 1.0, p_max}) {
      Channel ch = make_depolarizing(d, p);
      const Index choi_rank = minimal_env_dim(ch, g_tol);
      if (p < p_max)
        c.check(choi_rank == d * d, "interior Choi rank != d^2");
      else
        c.check(choi_rank >= d * d - d + 1, "boundary Choi rank < d^2-d+1");
      ComplementaryPair pair = complement(ch, g_tol);
      FamilySpec spec{d, DepolarizingParams{p}};
      DetectionReport report = search(pair, canonical_witness_states(spec), g_tol);
      const std::string label =
          "depolarizing d=" + std::to_string(d) + " p=" + std::to_string(p);
      c.check(report.verdict == Verdict::positive_q_complement, verdict_note(label, report));
      if (p > 0.0 && p < p_max)
        c.check(report.rule_fired == Rule::dim_rule_env, label + " rule != dim_rule_env");
      collect_detections(label, pair, report);
    }
  }
}

// --- criterion 3 -----------------------------------------------------------

void criterion_3(CriterionRun& c) {
  for (Index d : {2, 3, 4}) {
    const double q_min = double(d) / double(d + 1);
    const double q_max = double(d) / double(d - 1);
    const double qs[] = {q_min, 0.5 * (q_min + q_max), 0.999 * q_max};
    for (double q : qs) {
      ComplementaryPair pair = complement(make_transpose_depolarizing(d, q), g_tol);
      FamilySpec spec{d, TransposeDepolarizingParams{q}};
      DetectionReport report = search(pair, canonical_witness_states(spec), g_tol);
      const std::string label =
          "transpose-depolarizing d=" + std::to_string(d) + " q=" + std::to_string(q);
      c.check(report.verdict == Verdict::positive_q_complement, verdict_note(label, report));
      if (q == q_min) {
        // a full-rank pure output realizes the max-rank mechanism
        c.check(report.max_rank_found == d, label + " no full-rank pure output");
        c.check(report.max_rank_hypothesis_met, label + " max-rank hypothesis unmet");
        if (d >= 3)
          c.check(report.rule_fired == Rule::max_rank_rule, label + " rule != max_rank_rule");
        else
          // d=2: the cheaper minimal-dimension rule fires first (3 > 2(2-1))
          c.check(report.rule_fired == Rule::dim_rule_env, label + " rule != dim_rule_env");
      }
      collect_detections(label, pair, report);
    }
  }
}

// --- criterion 4 -----------------------------------------------------------

void criterion_4(CriterionRun& c) {
  for (Index d : {2, 3, 4}) {
    for (int k = 0; k < 50; ++k) {
      Rng rng(mix_seed(g_tol.rng_seed, std::uint64_t(1000 + 100 * d + k)));
      std::uniform_real_distribution<double> unif(0.01, 1.0);
      RealMatrix prob(d, d);
      for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j) prob(i, j) = unif(rng);
      prob /= prob.sum();
      // hypothesis of the qudit Pauli theorem: >= d+1 nonzeros, every row hit
      Index nonzeros = 0;
      bool rows_hit = true;
      for (Index i = 0; i < d; ++i) {
        bool row = false;
        for (Index j = 0; j < d; ++j)
          if (prob(i, j) > 0.0) {
            ++nonzeros;
            row = true;
          }
        rows_hit = rows_hit && row;
      }
      c.check(nonzeros >= d + 1 && rows_hit, "sampled P misses the hypothesis");

      ComplementaryPair pair = complement(make_pauli(d, prob), g_tol);
      FamilySpec spec{d, PauliParams{prob}};
      DetectionReport report = search(pair, canonical_witness_states(spec), g_tol);
      const std::string label = "pauli d=" + std::to_string(d) + " #" + std::to_string(k);
      c.check(report.verdict == Verdict::positive_q_complement, verdict_note(label, report));
      // clock-eigenvector witness: full-rank output at a standard basis state
      ProbeResult clock = probe(pair, LabeledState{"basis_0", basis_state(d, 0)}, g_tol);
      c.check(clock.out_rank == d, label + " clock witness output not full rank");
      collect_detections(label, pair, report);
    }
  }
}

// --- criterion 5 -----------------------------------------------------------

void criterion_5(CriterionRun& c) {
  // full-rank correlation matrices away from the identity
  for (Index d : {2, 3, 4}) {
    for (int k = 0; k < 20; ++k) {
      Rng rng(mix_seed(g_tol.rng_seed, std::uint64_t(2000 + 100 * d + k)));
      Matrix b = random_correlation(d, rng);
      ComplementaryPair pair = complement(make_dephasing(d, b), g_tol);
      FamilySpec spec{d, DephasingParams{b}};
      DetectionReport report = search(pair, canonical_witness_states(spec), g_tol);
      const std::string label = "dephasing d=" + std::to_string(d) + " #" + std::to_string(k);
      c.check(report.verdict == Verdict::positive_q, verdict_note(label, report));
      c.check(report.rule_fired == Rule::operator_inequality,
              label + " rule != operator_inequality");
      c.check(report.witness_label(Verdict::positive_q).rfind("basis_", 0) == 0,
              label + " operator-inequality witness is not a basis state");
      collect_detections(label, pair, report);
    }
  }
  // rank-deficient correlation matrices: the max-rank rule fires at |e>
  for (Index d : {3, 4}) {
    for (Index rank = 2; rank < d; ++rank) {
      Rng rng(mix_seed(g_tol.rng_seed, std::uint64_t(2500 + 10 * d + rank)));
      Matrix b = random_correlation(d, rng, rank);
      ComplementaryPair pair = complement(make_dephasing(d, b), g_tol);
      FamilySpec spec{d, DephasingParams{b}};
      DetectionReport report = search(pair, canonical_witness_states(spec), g_tol);
      const std::string label =
          "dephasing d=" + std::to_string(d) + " rank=" + std::to_string(rank);
      c.check(report.verdict == Verdict::positive_q, verdict_note(label, report));
      c.check(report.rule_fired == Rule::max_rank_rule, label + " rule != max_rank_rule");
      // the uniform state attains the maximum rank
      ProbeResult uniform = probe(pair, LabeledState{"uniform", uniform_superposition(d)}, g_tol);
      c.check(uniform.out_rank == rank, label + " |e> does not attain the max rank");
      collect_detections(label, pair, report);
    }
  }
  // d=2 has only rank-one deficient correlations; the dimension rule
  // preempts the max-rank rule there but the verdict is the same.
  {
    Rng rng(mix_seed(g_tol.rng_seed, 2600));
    Matrix b = random_correlation(2, rng, 1);
    FamilySpec spec{2, DephasingParams{b}};
    ComplementaryPair pair = build_pair(spec, g_tol);
    DetectionReport report = search(pair, canonical_witness_states(spec), g_tol);
    c.check(report.verdict == Verdict::positive_q, verdict_note("dephasing d=2 rank=1", report));
    c.check(report.rule_fired == Rule::dim_rule_out, "dephasing d=2 rank=1 rule");
    collect_detections("dephasing d=2 rank=1", pair, report);
  }
  // identity correlation: undetected at one and two copies over 50 probes
  for (Index d : {2, 3, 4}) {
    ComplementaryPair pair = complement(make_dephasing(d, Matrix::Identity(d, d)), g_tol);
    ToleranceConfig fifty = g_tol;
    fifty.haar_samples = 50;
    FamilySpec spec{d, DephasingParams{Matrix::Identity(d, d)}};
    DetectionReport report = search(pair, canonical_witness_states(spec), fifty);
    c.check(report.verdict == Verdict::undetected,
            verdict_note("identity dephasing d=" + std::to_string(d), report));

    ComplementaryPair squared = tensor_square(pair, g_tol);
    std::vector<LabeledState> probes = two_copy_witness_states(d);
    for (int k = 0; Index(probes.size()) < 50; ++k) {
      Rng rng(mix_seed(g_tol.rng_seed, std::uint64_t(2700 + k)));
      probes.push_back({"haar_" + std::to_string(k), haar_state(d * d, rng)});
    }
    probes.resize(50);
    for (const LabeledState& s : probes) {
      ProbeResult r = probe(squared, s, g_tol);
      c.check(!r.certifies_fwd(g_tol) && !r.certifies_rev(g_tol),
              "identity dephasing d=" + std::to_string(d) + " two-copy probe " + s.label +
                  " fired");
    }
  }
}

// --- criterion 6 -----------------------------------------------------------

void criterion_6(CriterionRun& c) {
  std::ifstream in(QCAP_MANIFEST_PATH);
  c.check(bool(in), "manifest not readable");
  if (!in) return;
  nlohmann::json manifest;
  in >> manifest;
  for (const char* bullet : {"bullet1", "bullet2"}) {
    const auto& entries = manifest.at("mad").at(bullet);
    c.check(entries.size() == 10, std::string(bullet) + " manifest does not have 10 entries");
    for (const auto& entry : entries) {
      const Index d = entry.at("d").get<Index>();
      RealMatrix decay = RealMatrix::Zero(d, d);
      for (const auto& g : entry.at("gamma"))
        decay(g.at("from").get<Index>(), g.at("to").get<Index>()) = g.at("rate").get<double>();
      Channel ch = make_mad(d, decay);
      const Index n1 = mad_n1(d, decay);
      const Index n2 = mad_n2(d, decay);
      c.check(minimal_out_dim(ch, g_tol) == n1, "n1 closed form mismatch");
      c.check(minimal_env_dim(ch, g_tol) == 1 + n2, "n2 closed form mismatch");
      ComplementaryPair pair = complement(ch, g_tol);
      FamilySpec spec{d, MadParams{decay}};
      DetectionReport report = search(pair, canonical_witness_states(spec), g_tol);
      const std::string label = std::string(bullet) + " d=" + std::to_string(d);
      if (std::string(bullet) == "bullet1") {
        c.check(1 + n2 > n1, label + " hypothesis violated");
        c.check(report.verdict == Verdict::positive_q_complement, verdict_note(label, report));
      } else {
        c.check(1 + n2 < n1, label + " hypothesis violated");
        c.check(report.verdict == Verdict::positive_q, verdict_note(label, report));
      }
      collect_detections(label, pair, report);
    }
  }
}

// --- criterion 7 -----------------------------------------------------------

void criterion_7(CriterionRun& c) {
  for (Index d : {2, 3}) {
    for (int k = 0; k < 20; ++k) {
      Rng rng(mix_seed(g_tol.rng_seed, std::uint64_t(3000 + 100 * d + k)));
      FamilySpec spec{d, UnitaryDilationParams{haar_unitary(d * d, rng)}};
      ComplementaryPair pair = build_pair(spec, g_tol);
      DetectionReport report = search(pair, canonical_witness_states(spec), g_tol);
      const std::string label =
          "unitary-dilation d=" + std::to_string(d) + " #" + std::to_string(k);
      c.check(report.verdict == Verdict::both_positive, verdict_note(label, report));
      collect_detections(label, pair, report);
    }
  }
}

// --- criterion 8 -----------------------------------------------------------

void criterion_8(CriterionRun& c) {
  int nontrivial = 0;
  std::uint64_t draw = 0;
  while (nontrivial < 100 && draw < 2000) {
    Rng rng(mix_seed(g_tol.rng_seed, 4000 + draw++));
    std::uniform_int_distribution<Index> dims(2, 5);
    Index d_in = dims(rng), d_out = dims(rng), d_env = dims(rng);
    d_in = std::min(d_in, d_out * d_env);
    ComplementaryPair pair = complement(random_channel(d_in, d_out, d_env, rng), g_tol);
    Vector psi = haar_state(d_in, rng);
    Matrix sigma = random_density(d_in, rng);
    PerturbationCheck check =
        perturbation_slopes(pair, psi, sigma, Direction::channel, g_tol);
    if (check.trivial) continue;
    ++nontrivial;
    c.check(check.max_rel_err < 1e-3,
            "triple #" + std::to_string(nontrivial) +
                " rel err=" + std::to_string(check.max_rel_err));
  }
  c.check(nontrivial == 100, "fewer than 100 nontrivial kernels sampled");
}

// --- criterion 9 -----------------------------------------------------------

void criterion_9(CriterionRun& c) {
  c.check(!g_detections.empty(), "no detections collected from criteria 1-7");
  // Validation grid extended to 1e-14: positivity below that sits under the
  // ~1e-15 roundoff floor of the entropy difference and is not measurable.
  ToleranceConfig sweep_tol = g_tol;
  sweep_tol.eps_grid.clear();
  for (int k = 1; k <= 14; ++k) sweep_tol.eps_grid.push_back(std::pow(10.0, -k));
  for (const Detection& det : g_detections) {
    const ComplementaryPair dir_pair =
        det.complement_direction ? swapped(det.pair) : det.pair;
    SweepResult s = sweep(dir_pair, det.psi, det.sigma, sweep_tol);
    c.check(std::abs(s.ic_at_zero) <= 1e-8, det.label + " anchor I_c(0) != 0");
    if (!(s.best_ic > 0.0)) {
      // Diagnose with the default grid, where the slope fit is clean: the
      // log2(1/eps) coefficient confirms the gap even though the sign
      // change sits below the entropy roundoff floor.
      SweepResult diag = sweep(dir_pair, det.psi, det.sigma, g_tol);
      c.check(false, det.label + " positivity below the measurable range (gap=" +
                         format_real(s.slope_predicted) +
                         ", default-grid fitted slope=" + format_real(diag.slope_fitted) +
                         ", best_ic=" + format_real(s.best_ic) + ")");
    }
  }
}

// --- criterion 10 ----------------------------------------------------------

void criterion_10(CriterionRun& c) {
  // equal nonzero spectra of the two outputs on pure states
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng(mix_seed(g_tol.rng_seed, std::uint64_t(5000 + trial)));
    std::uniform_int_distribution<Index> dims(2, 5);
    Index d_in = dims(rng), d_out = dims(rng), d_env = dims(rng);
    d_in = std::min(d_in, d_out * d_env);
    ComplementaryPair pair = complement(random_channel(d_in, d_out, d_env, rng), g_tol);
    Vector psi = haar_state(pair.channel.d_in, rng);
    EigResult out = hermitian_eig(pair.channel.apply(projector_onto(psi)));
    EigResult env = hermitian_eig(pair.complement.apply(projector_onto(psi)));
    std::vector<double> so, se;
    for (Index i = 0; i < out.values.size(); ++i)
      if (out.values(i) > 1e-8) so.push_back(out.values(i));
    for (Index i = 0; i < env.values.size(); ++i)
      if (env.values(i) > 1e-8) se.push_back(env.values(i));
    bool same = so.size() == se.size();
    for (size_t i = 0; same && i < so.size(); ++i) same = std::abs(so[i] - se[i]) < 1e-8;
    c.check(same, "spectra equality violated");
  }
  // range of Phi(rho) determined by the range projector of rho
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng(mix_seed(g_tol.rng_seed, std::uint64_t(5200 + trial)));
    Channel ch = random_channel(4, 3, 2, rng);
    Matrix g = ginibre(4, 2, rng);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    Projector r_rho = range_projector(rho, g_tol);
    Matrix normalized = r_rho.matrix / double(r_rho.rank);
    c.check((range_projector(ch.apply(normalized), g_tol).matrix -
             range_projector(ch.apply(rho), g_tol).matrix)
                    .cwiseAbs()
                    .maxCoeff() < 1e-8,
            "range lemma violated");
  }
  // pure-output rank bound
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng(mix_seed(g_tol.rng_seed, std::uint64_t(5400 + trial)));
    std::uniform_int_distribution<Index> dims(2, 5);
    Index d_in = dims(rng), d_out = dims(rng), d_env = dims(rng);
    d_in = std::min(d_in, d_out * d_env);
    Channel ch = random_channel(d_in, d_out, d_env, rng);
    const Index bound = std::min(minimal_out_dim(ch, g_tol), minimal_env_dim(ch, g_tol));
    Vector psi = haar_state(ch.d_in, rng);
    c.check(numerical_rank(ch.apply(projector_onto(psi)), g_tol) <= bound,
            "pure-output rank bound violated");
  }
  // maximality of the uniform state over 200 samples x 20 (C)DUC channels
  for (int k = 0; k < 20; ++k) {
    Rng rng(mix_seed(g_tol.rng_seed, std::uint64_t(5600 + k)));
    const Index d = 3 + Index(k % 3);
    Channel ch;
    if (k % 2 == 0) {
      CducParams params = random_cduc_params(d, rng);
      ch = make_cduc(params.a, params.b);
    } else {
      DucParams params = random_duc_params(d, rng);
      ch = make_duc(params.a, params.b);
    }
    const Index rank_at_e =
        numerical_rank(ch.apply(projector_onto(uniform_superposition(d))), g_tol);
    for (int s = 0; s < 200; ++s) {
      Vector psi = haar_state(d, rng);
      if (numerical_rank(ch.apply(projector_onto(psi)), g_tol) > rank_at_e) {
        c.check(false, "uniform-state maximality violated");
        break;
      }
    }
  }
  // determinant identity on 200 random two-per-row matrices
  for (int trial = 0; trial < 200; ++trial) {
    Rng rng(mix_seed(g_tol.rng_seed, std::uint64_t(5800 + trial)));
    std::normal_distribution<double> gauss(0.0, 1.0);
    const Index d = 2 + Index(trial % 5);
    Matrix x = Matrix::Zero(d, d);
    std::vector<std::pair<Index, Index>> support(static_cast<size_t>(d));
    for (Index i = 0; i < d; ++i) {
      Index c1 = Index(rng() % std::uint64_t(d));
      Index c2 = (c1 + 1 + Index(rng() % std::uint64_t(d - 1))) % d;
      support[size_t(i)] = {c1, c2};
      x(i, c1) = Complex(gauss(rng), gauss(rng));
      x(i, c2) = Complex(gauss(rng), gauss(rng));
    }
    Vector psi(d);
    for (Index i = 0; i < d; ++i) psi(i) = Complex(gauss(rng), gauss(rng));
    Matrix psi_x = Matrix::Zero(d, d);
    for (Index i = 0; i < d; ++i) {
      auto [c1, c2] = support[size_t(i)];
      psi_x(i, c1) = x(i, c1) * psi(c2);
      psi_x(i, c2) = x(i, c2) * psi(c1);
    }
    Complex prefactor(1.0, 0.0);
    for (Index i = 0; i < d; ++i) {
      Index n_i = 0;
      for (Index r = 0; r < d; ++r)
        if (x(r, i) != Complex(0, 0)) ++n_i;
      for (Index t = 0; t + 1 < n_i; ++t) prefactor *= psi(i);
    }
    const Complex lhs = psi_x.determinant();
    const Complex rhs = prefactor * x.determinant();
    c.check(std::abs(lhs - rhs) <= 1e-8 * std::max({std::abs(lhs), std::abs(rhs), 1e-9}),
            "determinant identity violated");
  }
  // Flanders bound over 1000 random subspaces of M_{3x4} ... M_{5x5}
  for (int trial = 0; trial < 1000; ++trial) {
    Rng rng(mix_seed(g_tol.rng_seed, std::uint64_t(6000 + trial)));
    const Index d1 = 3 + Index(rng() % 3);
    const Index d2 = 3 + Index(rng() % 3);
    const Index dim = 1 + Index(rng() % std::uint64_t(d1 * d2));
    std::vector<Matrix> basis;
    for (Index k = 0; k < dim; ++k) basis.push_back(ginibre(d1, d2, rng));
    FlandersResult fr = flanders_check(basis, 20, g_tol);
    c.check(fr.bound_holds, "flanders bound violated");
  }
}

// --- criterion 11 ----------------------------------------------------------

void criterion_11(CriterionRun& c) {
  for (double gamma : {0.5, 0.7, 0.9}) {
    RealMatrix decay = RealMatrix::Zero(2, 2);
    decay(1, 0) = gamma;
    ComplementaryPair pair = complement(make_mad(2, decay), g_tol);
    for (int k = 0; k < 200; ++k) {
      Rng rng(mix_seed(g_tol.rng_seed, std::uint64_t(7000 + k)));
      ProbeResult r = probe(pair, LabeledState{"haar", haar_state(2, rng)}, g_tol);
      if (r.certifies_fwd(g_tol)) {
        c.check(false, "gamma=" + std::to_string(gamma) + " one-copy forward certificate");
        break;
      }
    }
    ComplementaryPair squared = tensor_square(pair, g_tol);
    std::vector<LabeledState> probes = two_copy_witness_states(2);
    for (int k = 0; Index(probes.size()) < 50; ++k) {
      Rng rng(mix_seed(g_tol.rng_seed, std::uint64_t(7500 + k)));
      probes.push_back({"haar_" + std::to_string(k), haar_state(4, rng)});
    }
    probes.resize(50);
    for (const LabeledState& s : probes) {
      ProbeResult r = probe(squared, s, g_tol);
      if (r.certifies_fwd(g_tol)) {
        c.check(false, "gamma=" + std::to_string(gamma) + " two-copy forward certificate");
        break;
      }
    }
  }
}

}  // namespace

int main() {
  struct Entry {
    int number;
    std::string name;
    std::function<void(CriterionRun&)> body;
    double budget_seconds;  // 0 = untimed
  };
  const std::vector<Entry> entries = {
      {1, "Werner-Holevo trace values", criterion_1, 5.0},
      {2, "depolarizing family verdicts and Choi ranks", criterion_2, 30.0},
      {3, "transpose-depolarizing verdicts", criterion_3, 20.0},
      {4, "generalized Pauli complement detection", criterion_4, 60.0},
      {5, "dephasing characterization", criterion_5, 120.0},
      {6, "MAD manifest conditions", criterion_6, 30.0},
      {7, "unitary-dilation both-directions detection", criterion_7, 30.0},
      {8, "perturbation slope oracle", criterion_8, 0.0},
      {9, "sweep positivity for every detection", criterion_9, 0.0},
      {10, "property suites", criterion_10, 0.0},
      {11, "anti-degradable conformance", criterion_11, 0.0},
  };

  int failures = 0;
  for (const Entry& entry : entries) {
    CriterionRun run{entry.number, entry.name};
    const auto start = std::chrono::steady_clock::now();
    try {
      entry.body(run);
    } catch (const std::exception& e) {
      run.check(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (entry.budget_seconds > 0.0 && seconds >= entry.budget_seconds)
      run.check(false, "runtime budget exceeded");
    std::printf("criterion %2d [%s]: %s (%.1fs)\n", entry.number, entry.name.c_str(),
                run.ok ? "PASS" : "FAIL", seconds);
    if (!run.ok) {
      ++failures;
      size_t shown = 0;
      for (const std::string& note : run.notes) {
        std::printf("    - %s\n", note.c_str());
        if (++shown >= 8) {
          std::printf("    - (%zu more)\n", run.notes.size() - shown);
          break;
        }
      }
    }
  }
  std::printf("%d/%zu criteria passed\n", int(entries.size()) - failures, entries.size());
  return failures;
}
