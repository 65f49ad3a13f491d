#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcap {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Thrown when an input violates a documented precondition.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Global numerical policy: rank thresholds, detection gap, sweep grid.
struct ToleranceConfig {
  double rank_rtol = 1e-9;    // relative to the largest singular value
  double rank_atol = 1e-12;   // absolute floor, handles exact zero matrices
  double detection_gap = 1e-7;
  std::vector<double> eps_grid = default_eps_grid();
  int haar_samples = 200;
  std::uint64_t rng_seed = 12345;

  static std::vector<double> default_eps_grid();  // {1e-1, ..., 1e-8}

  /// Copy with rank_rtol scaled by `factor` (used for stability reruns).
  ToleranceConfig with_rank_rtol_scaled(double factor) const;

  /// Throws ValidationError unless all tolerances are positive and the
  /// eps grid is strictly decreasing inside (0, 1).
  void validate() const;
};

inline Index square_dim(const Matrix& a, const char* what) {
  if (a.rows() != a.cols())
    throw ValidationError(std::string(what) + ": matrix must be square");
  return a.rows();
}

bool is_hermitian(const Matrix& a, double atol = 1e-12);
void require_hermitian(const Matrix& a, double atol = 1e-12);
void require_unit_vector(const Vector& psi, double atol = 1e-10);
void require_density_matrix(const Matrix& rho, double atol = 1e-10);

struct EigResult {
  RealVector values;  // ascending
  Matrix vectors;     // columns match values
};

/// Spectral decomposition of a Hermitian matrix, eigenvalues ascending.
EigResult hermitian_eig(const Matrix& a);

/// Count of singular values above max(rank_rtol * sigma_max, rank_atol).
Index numerical_rank(const Matrix& a, const ToleranceConfig& tol);

struct Projector {
  Matrix matrix;
  Index rank = 0;
  Index dim() const { return matrix.rows(); }
};

/// Spectrum of a PSD matrix together with the rank threshold that splits
/// kernel from range. Eigenvalues below -1e-8 (relative to the spectral
/// radius) are rejected.
struct PsdSpectrum {
  EigResult eig;
  double threshold;
  Projector kernel() const;
  Projector range() const;
  /// True when some eigenvalue sits within a factor of 10 of the threshold,
  /// so the kernel/range split is sensitive to the rank tolerance.
  bool near_threshold() const;
};

PsdSpectrum psd_spectrum(const Matrix& a, const ToleranceConfig& tol);

/// Orthogonal projector onto the numerical kernel of a PSD matrix.
Projector kernel_projector(const Matrix& a, const ToleranceConfig& tol);

/// Complement of kernel_projector: projector onto the numerical range.
Projector range_projector(const Matrix& a, const ToleranceConfig& tol);

/// Von Neumann entropy in bits. Eigenvalues in [-1e-10, 0] are clipped to
/// zero; anything more negative or a trace away from one is an error.
double von_neumann_entropy(const Matrix& rho);

enum class Subsystem { first, second };

/// Partial trace of a matrix on a (d1*d2)-dimensional bipartite space,
/// keeping the named factor.
Matrix partial_trace(const Matrix& m, Subsystem keep, Index d1, Index d2);

/// Row-major vectorization: vec(X) = sum_ij X_ij |ij>.
Vector vec(const Matrix& x);
Matrix unvec(const Vector& v, Index rows, Index cols);

Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);

struct SchmidtDecomposition {
  RealVector coefficients;  // descending, nonnegative
  Matrix left;              // columns in C^{d1}
  Matrix right;             // columns in C^{d2}
  Index rank(const ToleranceConfig& tol) const;
};

/// Schmidt decomposition of a unit vector in C^{d1} (x) C^{d2} via the SVD
/// of its unvec.
SchmidtDecomposition schmidt_decomposition(const Vector& psi, Index d1, Index d2);

Vector basis_state(Index dim, Index k);
Vector uniform_superposition(Index dim);
Matrix projector_onto(const Vector& psi);

}  // namespace qcap
