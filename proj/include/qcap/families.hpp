#pragma once

#include "qcap/channel.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qcap {

// Channel family constructors. Each validates its parameter region strictly
// (reject, never clamp); boundary values are accepted exactly.

/// D_p(X) = (1-p) X + p Tr(X) 1/d, p in [0, d^2/(d^2-1)].
Channel make_depolarizing(Index d, double p, const ToleranceConfig& tol = {});
/// D^T_q(X) = (1-q) X^T + q Tr(X) 1/d, q in [d/(d+1), d/(d-1)].
Channel make_transpose_depolarizing(Index d, double q, const ToleranceConfig& tol = {});
/// Transpose-depolarizing at the extreme parameter q = d/(d-1):
/// X -> (Tr(X) 1 - X^T)/(d-1).
Channel make_werner_holevo(Index d, const ToleranceConfig& tol = {});

/// Mixed-unitary channel over the Heisenberg-Weyl basis U_ij = X^i Z^j,
/// with Kraus sqrt(p_ij) U_ij over the nonzero entries of P.
Channel make_pauli(Index d, const RealMatrix& prob);
Matrix shift_matrix(Index d);  // X|k> = |k+1 mod d>
Matrix clock_matrix(Index d);  // Z|k> = w^k |k>

/// Multi-level amplitude damping: decay(j, i) is the rate j -> i for i < j.
Channel make_mad(Index d, const RealMatrix& decay);
/// Levels that get totally depleted: no incoming rate and outgoing rates
/// summing to one (comparisons at the 1e-10 tolerance).
std::vector<Index> mad_depleted_levels(Index d, const RealMatrix& decay);
Index mad_n1(Index d, const RealMatrix& decay);  // non-depleted level count
Index mad_n2(Index d, const RealMatrix& decay);  // nonzero decay rate count

/// Diagonal unitary covariant channel Psi_{A,B}: requires A entrywise
/// nonnegative with unit column sums, diag A = diag B, B Hermitian and
/// A_ij A_ji >= |B_ij|^2.
Channel make_duc(const RealMatrix& a, const Matrix& b, const ToleranceConfig& tol = {});
/// Conjugate diagonal unitary covariant channel Phi_{A,B}: requires A
/// entrywise nonnegative with unit column sums, diag A = diag B, B PSD.
Channel make_cduc(const RealMatrix& a, const Matrix& b, const ToleranceConfig& tol = {});
/// Closed-form (minimal output, minimal environment) dimensions.
std::pair<Index, Index> duc_min_dims(const RealMatrix& a, const Matrix& b,
                                     const ToleranceConfig& tol = {});
std::pair<Index, Index> cduc_min_dims(const RealMatrix& a, const Matrix& b,
                                      const ToleranceConfig& tol = {});

/// Schur multiplier X -> B o X for a correlation matrix B.
Channel make_dephasing(Index d, const Matrix& corr, const ToleranceConfig& tol = {});

/// Channel pair Tr_2(V X V^dag), Tr_1(V X V^dag) for a unitary V on
/// C^d (x) C^d; both members have minimal dimensions (d, d) generically.
ComplementaryPair make_unitary_dilation(Index d, const Matrix& v,
                                        const ToleranceConfig& tol = {});

struct DepolarizingParams { double p = 0.0; };
struct TransposeDepolarizingParams { double q = 0.0; };
struct WernerHolevoParams {};
struct PauliParams { RealMatrix prob; };
struct MadParams { RealMatrix decay; };
struct DucParams { RealMatrix a; Matrix b; };
struct CducParams { RealMatrix a; Matrix b; };
struct DephasingParams { Matrix corr; };
struct UnitaryDilationParams { Matrix v; };

enum class Family {
  depolarizing, transpose_depolarizing, werner_holevo, pauli, mad,
  duc, cduc, dephasing, unitary_dilation,
};

std::string family_name(Family f);
Family family_from_name(const std::string& name);

struct FamilySpec {
  Index d = 0;
  std::variant<DepolarizingParams, TransposeDepolarizingParams, WernerHolevoParams,
               PauliParams, MadParams, DucParams, CducParams, DephasingParams,
               UnitaryDilationParams>
      params;

  Family family() const { return Family(params.index()); }
};

ComplementaryPair build_pair(const FamilySpec& spec, const ToleranceConfig& tol);

struct LabeledState {
  std::string label;
  Vector psi;
};

/// The family's paper-designated probe states first, then the standard
/// basis and the uniform superposition (deduplicated by label).
std::vector<LabeledState> canonical_witness_states(const FamilySpec& spec);
std::vector<LabeledState> default_witness_states(Index d);

FamilySpec family_spec_from_json(const nlohmann::json& j);
std::string params_summary(const FamilySpec& spec);

/// Entrywise-positive matrix with unit column sums.
RealMatrix random_column_stochastic(Index d, Rng& rng);
/// Random valid parameter pairs for the two covariant flavors.
DucParams random_duc_params(Index d, Rng& rng);
CducParams random_cduc_params(Index d, Rng& rng);

}  // namespace qcap
