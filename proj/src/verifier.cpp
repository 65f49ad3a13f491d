#include "qcap/verifier.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace qcap {

double coherent_information(const ComplementaryPair& pair, const Matrix& rho) {
  require_density_matrix(rho);
  return von_neumann_entropy(pair.channel.apply(rho)) -
         von_neumann_entropy(pair.complement.apply(rho));
}

namespace {

Matrix line_state(const Matrix& rho_psi, const Matrix& sigma, double eps) {
  return (1.0 - eps) * rho_psi + eps * sigma;
}

double detection_gap_at(const ComplementaryPair& pair, const Matrix& rho_psi,
                        const Matrix& sigma, const ToleranceConfig& tol) {
  Projector k_out = kernel_projector(pair.channel.apply(rho_psi), tol);
  Projector k_env = kernel_projector(pair.complement.apply(rho_psi), tol);
  const double fwd = (k_out.matrix * pair.channel.apply(sigma)).trace().real();
  const double rev = (k_env.matrix * pair.complement.apply(sigma)).trace().real();
  return fwd - rev;
}

}  // namespace

SweepResult sweep(const ComplementaryPair& pair, const Vector& psi, const Matrix& sigma,
                  const ToleranceConfig& tol) {
  require_unit_vector(psi);
  if (psi.size() != pair.channel.d_in || sigma.rows() != pair.channel.d_in)
    throw ValidationError("sweep: dimension mismatch");
  const Matrix rho_psi = projector_onto(psi);

  auto ic_at = [&](double eps) {
    return coherent_information(pair, line_state(rho_psi, sigma, eps));
  };

  SweepResult result;
  result.ic_at_zero = coherent_information(pair, rho_psi);
  result.slope_predicted = detection_gap_at(pair, rho_psi, sigma, tol);
  result.eps_values = tol.eps_grid;
  result.best_ic = -std::numeric_limits<double>::infinity();
  for (double eps : tol.eps_grid) {
    const double ic = ic_at(eps);
    result.ic_values.push_back(ic);
    if (ic > result.best_ic) {
      result.best_ic = ic;
      result.best_eps = eps;
    }
  }

  // dI_c/deps carries the gap as the coefficient of log2(1/eps); the three
  // smallest grid points keep the bounded remainder from contaminating the
  // fit.
  std::vector<double> smallest = tol.eps_grid;
  std::sort(smallest.begin(), smallest.end());
  smallest.resize(std::min<size_t>(3, smallest.size()));
  double sxx = 0, sx = 0, sxy = 0, sy = 0;
  const double n = double(smallest.size());
  for (double eps : smallest) {
    // keep eps + h inside (0, 1) so the stencil states stay valid
    const double h = std::min(eps / 10.0, 0.5 * (1.0 - eps));
    const double derivative = (ic_at(eps + h) - ic_at(eps - h)) / (2.0 * h);
    const double x = std::log2(1.0 / eps);
    sx += x;
    sy += derivative;
    sxx += x * x;
    sxy += x * derivative;
  }
  const double denom = n * sxx - sx * sx;
  result.slope_fitted = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
  return result;
}

PerturbationCheck perturbation_slopes(const ComplementaryPair& pair, const Vector& psi,
                                      const Matrix& sigma, Direction direction,
                                      const ToleranceConfig& tol) {
  require_unit_vector(psi);
  const Channel& act = direction == Direction::channel ? pair.channel : pair.complement;
  const Matrix rho_psi = projector_onto(psi);
  const Matrix out0 = act.apply(rho_psi);
  Projector kernel = kernel_projector(out0, tol);

  PerturbationCheck check;
  if (kernel.rank == 0) {
    check.trivial = true;
    return check;
  }

  constexpr double kSlopeFloor = 1e-9;

  // Predicted: nonzero eigenvalues of the perturbation projected onto the
  // kernel block. K Phi(|psi><psi|) K vanishes there, so K Phi(sigma) K is
  // the full first-order term.
  Matrix block = kernel.matrix * act.apply(sigma) * kernel.matrix;
  EigResult block_eig = hermitian_eig(block);
  for (Index i = 0; i < block_eig.values.size(); ++i)
    if (block_eig.values(i) > kSlopeFloor) check.predicted_slopes.push_back(block_eig.values(i));
  std::sort(check.predicted_slopes.begin(), check.predicted_slopes.end());

  // Fitted: central-difference slopes of the eigenvalues converging to zero.
  const double eps0 = 1e-6;
  auto small_eigs = [&](double eps) {
    EigResult eig = hermitian_eig(act.apply(line_state(rho_psi, sigma, eps)));
    std::vector<double> lowest(eig.values.data(), eig.values.data() + kernel.rank);
    return lowest;  // ascending already
  };
  std::vector<double> hi = small_eigs(1.1 * eps0);
  std::vector<double> lo = small_eigs(0.9 * eps0);
  for (Index i = 0; i < kernel.rank; ++i) {
    const double slope = (hi[size_t(i)] - lo[size_t(i)]) / (0.2 * eps0);
    if (slope > kSlopeFloor) check.fitted_slopes.push_back(slope);
  }
  std::sort(check.fitted_slopes.begin(), check.fitted_slopes.end());

  if (check.predicted_slopes.size() != check.fitted_slopes.size()) {
    check.max_rel_err = std::numeric_limits<double>::infinity();
    return check;
  }
  for (size_t i = 0; i < check.predicted_slopes.size(); ++i) {
    const double rel = std::abs(check.predicted_slopes[i] - check.fitted_slopes[i]) /
                       std::max(check.predicted_slopes[i], kSlopeFloor);
    check.max_rel_err = std::max(check.max_rel_err, rel);
  }
  return check;
}

FlandersResult flanders_check(const std::vector<Matrix>& basis, int samples,
                              const ToleranceConfig& tol) {
  if (basis.empty()) throw ValidationError("flanders_check: empty basis");
  const Index d1 = basis.front().rows();
  const Index d2 = basis.front().cols();
  const Index n = Index(basis.size());
  Matrix stacked(d1 * d2, n);
  for (Index k = 0; k < n; ++k) {
    if (basis[size_t(k)].rows() != d1 || basis[size_t(k)].cols() != d2)
      throw ValidationError("flanders_check: basis matrices have mismatched shapes");
    stacked.col(k) = vec(basis[size_t(k)]);
  }
  if (numerical_rank(stacked, tol) != n)
    throw ValidationError("flanders_check: basis is linearly dependent");

  Rng rng(tol.rng_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  FlandersResult result;
  for (int s = 0; s < samples; ++s) {
    Matrix combo = Matrix::Zero(d1, d2);
    for (Index k = 0; k < n; ++k)
      combo += Complex(gauss(rng), gauss(rng)) * basis[size_t(k)];
    result.max_rank_found = std::max(result.max_rank_found, numerical_rank(combo, tol));
  }
  result.bound_holds = n <= result.max_rank_found * std::max(d1, d2);
  return result;
}

std::vector<Matrix> stinespring_subspace(const ComplementaryPair& pair) {
  std::vector<Matrix> basis;
  const StinespringIsometry& iso = pair.isometry;
  for (Index i = 0; i < iso.d_in; ++i)
    basis.push_back(unvec(iso.v.col(i), iso.d_out, iso.d_env));
  return basis;
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "eps,ic_bits\n";
  for (size_t i = 0; i < result.eps_values.size(); ++i) {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%.11e,%.11e\n", result.eps_values[i],
                  result.ic_values[i]);
    out << buf;
  }
  return out.str();
}

nlohmann::json perturbation_to_json(const PerturbationCheck& check) {
  nlohmann::json j;
  j["predicted_slopes"] = check.predicted_slopes;
  j["fitted_slopes"] = check.fitted_slopes;
  j["max_rel_err"] = check.max_rel_err;
  j["trivial"] = check.trivial;
  return j;
}

}  // namespace qcap
