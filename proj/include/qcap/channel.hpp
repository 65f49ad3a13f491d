#pragma once

#include "qcap/numerics.hpp"
#include "qcap/random.hpp"

#include <nlohmann/json_fwd.hpp>

#include <vector>

namespace qcap {

/// Completely positive trace-preserving map held as Kraus operators.
struct Channel {
  Index d_in = 0;
  Index d_out = 0;
  std::vector<Matrix> kraus;

  /// Validates shapes and trace preservation (sum A^dag A = 1 within tp_tol).
  static Channel from_kraus(std::vector<Matrix> kraus, double tp_tol = 1e-9);

  Matrix apply(const Matrix& x) const;
  /// Adjoint map, Phi*(Y) = sum A^dag Y A.
  Matrix adjoint_apply(const Matrix& y) const;

  double trace_preservation_defect() const;
};

/// Choi matrix J = (Phi (x) id)|Omega><Omega| with the output factor first;
/// Tr J = d_in and the partial trace over the output factor is 1_{d_in}.
Matrix choi(const Channel& phi);

/// Reconstruct a channel from its Choi matrix using the minimal Kraus set
/// (eigenvalues above the rank threshold, ordered by descending eigenvalue,
/// ties broken lexicographically on eigenvector entries).
Channel channel_from_choi(Index d_in, Index d_out, const Matrix& j,
                          const ToleranceConfig& tol);

/// rank J(Phi): the smallest environment dimension over all dilations.
Index minimal_env_dim(const Channel& phi, const ToleranceConfig& tol);
/// rank Phi(1/d): the smallest output dimension over all isometric images.
Index minimal_out_dim(const Channel& phi, const ToleranceConfig& tol);

struct StinespringIsometry {
  Index d_in = 0;
  Index d_out = 0;
  Index d_env = 0;
  Matrix v;  // (d_out*d_env) x d_in, V^dag V = 1, env factor second

  Matrix apply_to_state(const Matrix& x) const;  // V X V^dag
};

/// Minimal Stinespring dilation V = sum_a B_a (x) |a>_env built from the
/// Choi eigendecomposition, so d_env equals the Choi rank.
StinespringIsometry stinespring(const Channel& phi, const ToleranceConfig& tol);

/// A channel together with its canonical minimally-defined complement and
/// the shared dilation isometry.
struct ComplementaryPair {
  Channel channel;     // Kraus re-minimized to the canonical set
  Channel complement;  // output dimension = Choi rank of `channel`
  StinespringIsometry isometry;
};

ComplementaryPair complement(const Channel& phi, const ToleranceConfig& tol);

/// Same dilation read the other way round: output and environment swap roles.
ComplementaryPair swapped(const ComplementaryPair& pair);

/// n-fold tensor power, n in {1, 2}; total dimension capped at 4096.
Channel tensor_power(const Channel& phi, int n);
ComplementaryPair tensor_square(const ComplementaryPair& pair, const ToleranceConfig& tol);

/// Random channel with the given dimensions from a Haar isometry.
Channel random_channel(Index d_in, Index d_out, Index d_env, Rng& rng);

Channel channel_from_json(const nlohmann::json& j);
nlohmann::json channel_to_json(const Channel& phi);
Channel load_channel_file(const std::string& path);

}  // namespace qcap
