#pragma once

#include "qcap/channel.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>
#include <vector>

namespace qcap {

/// I_c(rho; Phi) = S[Phi(rho)] - S[Phi_c(rho)] in bits.
double coherent_information(const ComplementaryPair& pair, const Matrix& rho);

/// Coherent information along rho(eps) = (1-eps)|psi><psi| + eps sigma.
/// slope_predicted is the detection gap Tr(K_psi Phi(sigma)) -
/// Tr(K^c_psi Phi_c(sigma)); slope_fitted is the least-squares coefficient
/// of log2(1/eps) in dI_c/deps over the three smallest grid points
/// (central differences at step eps/10).
struct SweepResult {
  std::vector<double> eps_values;
  std::vector<double> ic_values;  // bits
  double ic_at_zero = 0.0;
  double best_eps = 0.0;
  double best_ic = 0.0;
  double slope_predicted = 0.0;
  double slope_fitted = 0.0;
};

SweepResult sweep(const ComplementaryPair& pair, const Vector& psi, const Matrix& sigma,
                  const ToleranceConfig& tol);

enum class Direction { channel, complement };

/// First-order eigenvalue perturbation check: predicted slopes are the
/// nonzero eigenvalues of K_psi Phi(sigma) K_psi on the kernel block,
/// fitted slopes come from finite differences of the vanishing eigenvalues
/// of Phi(rho(eps)) at eps = 1e-6, matched in sorted order.
struct PerturbationCheck {
  std::vector<double> predicted_slopes;
  std::vector<double> fitted_slopes;
  double max_rel_err = 0.0;
  bool trivial = false;  // empty kernel: nothing to check
};

PerturbationCheck perturbation_slopes(const ComplementaryPair& pair, const Vector& psi,
                                      const Matrix& sigma, Direction direction,
                                      const ToleranceConfig& tol);

/// One-sided sampling check of the matrix-subspace rank bound
/// dim S <= max_rank * max(d1, d2). Sampling can only underestimate the
/// maximal rank, so bound_holds = false is never a false alarm.
struct FlandersResult {
  Index max_rank_found = 0;
  bool bound_holds = false;
};

FlandersResult flanders_check(const std::vector<Matrix>& basis, int samples,
                              const ToleranceConfig& tol);

/// Basis {unvec(V|i>)} of the matrix subspace vec^-1(range V) inside
/// M_{d_out x d_env}.
std::vector<Matrix> stinespring_subspace(const ComplementaryPair& pair);

std::string sweep_csv(const SweepResult& result);
nlohmann::json perturbation_to_json(const PerturbationCheck& check);

}  // namespace qcap
