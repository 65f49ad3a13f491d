#include "qcap/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace qcap {

std::vector<double> ToleranceConfig::default_eps_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 8; ++k) grid.push_back(std::pow(10.0, -k));
  return grid;
}

ToleranceConfig ToleranceConfig::with_rank_rtol_scaled(double factor) const {
  ToleranceConfig out = *this;
  out.rank_rtol *= factor;
  return out;
}

void ToleranceConfig::validate() const {
  if (rank_rtol <= 0 || rank_atol <= 0 || detection_gap <= 0)
    throw ValidationError("ToleranceConfig: tolerances must be positive");
  if (haar_samples < 0)
    throw ValidationError("ToleranceConfig: haar_samples must be nonnegative");
  double prev = 1.0;
  for (double e : eps_grid) {
    if (!(e > 0.0 && e < 1.0))
      throw ValidationError("ToleranceConfig: eps grid entries must lie in (0,1)");
    if (!(e < prev))
      throw ValidationError("ToleranceConfig: eps grid must be strictly decreasing");
    prev = e;
  }
}

bool is_hermitian(const Matrix& a, double atol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= atol * scale;
}

void require_hermitian(const Matrix& a, double atol) {
  if (!is_hermitian(a, atol)) throw ValidationError("matrix is not Hermitian within tolerance");
}

void require_unit_vector(const Vector& psi, double atol) {
  if (std::abs(psi.norm() - 1.0) > atol)
    throw ValidationError("vector is not normalized within tolerance");
}

void require_density_matrix(const Matrix& rho, double atol) {
  require_hermitian(rho, 1e-12);
  if (std::abs(rho.trace().real() - 1.0) > atol || std::abs(rho.trace().imag()) > atol)
    throw ValidationError("density matrix trace differs from one beyond tolerance");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()),
                                           Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -atol)
    throw ValidationError("density matrix has a negative eigenvalue beyond tolerance");
}

EigResult hermitian_eig(const Matrix& a) {
  square_dim(a, "hermitian_eig");
  require_hermitian(a);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.adjoint()));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("hermitian_eig: eigensolver failed to converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

Index numerical_rank(const Matrix& a, const ToleranceConfig& tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const RealVector& sv = svd.singularValues();
  const double threshold = std::max(tol.rank_rtol * sv(0), tol.rank_atol);
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > threshold) ++rank;
  return rank;
}

PsdSpectrum psd_spectrum(const Matrix& a, const ToleranceConfig& tol) {
  EigResult eig = hermitian_eig(a);
  const double top = eig.values.size() ? eig.values(eig.values.size() - 1) : 0.0;
  const double scale = std::max(1.0, std::abs(top));
  if (eig.values.size() && eig.values(0) < -1e-8 * scale)
    throw ValidationError("psd_spectrum: matrix is not PSD within tolerance");
  return {std::move(eig), std::max(tol.rank_rtol * std::max(top, 0.0), tol.rank_atol)};
}

namespace {

Projector accumulate_projector(const PsdSpectrum& s, bool kernel_side) {
  const Index d = s.eig.values.size();
  Matrix p = Matrix::Zero(d, d);
  Index rank = 0;
  for (Index i = 0; i < d; ++i) {
    if ((s.eig.values(i) <= s.threshold) == kernel_side) {
      p += s.eig.vectors.col(i) * s.eig.vectors.col(i).adjoint();
      ++rank;
    }
  }
  return {std::move(p), rank};
}

}  // namespace

Projector PsdSpectrum::kernel() const { return accumulate_projector(*this, true); }

Projector PsdSpectrum::range() const { return accumulate_projector(*this, false); }

bool PsdSpectrum::near_threshold() const {
  for (Index i = 0; i < eig.values.size(); ++i) {
    const double v = eig.values(i);
    if (v > 0.1 * threshold && v < 10.0 * threshold) return true;
  }
  return false;
}

Projector kernel_projector(const Matrix& a, const ToleranceConfig& tol) {
  return psd_spectrum(a, tol).kernel();
}

Projector range_projector(const Matrix& a, const ToleranceConfig& tol) {
  return psd_spectrum(a, tol).range();
}

double von_neumann_entropy(const Matrix& rho) {
  square_dim(rho, "von_neumann_entropy");
  require_hermitian(rho);
  if (std::abs(rho.trace().real() - 1.0) > 1e-10 || std::abs(rho.trace().imag()) > 1e-10)
    throw ValidationError("von_neumann_entropy: trace differs from one beyond tolerance");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()),
                                           Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    double lambda = es.eigenvalues()(i);
    if (lambda < -1e-10)
      throw ValidationError("von_neumann_entropy: negative eigenvalue beyond tolerance");
    if (lambda <= 0.0) continue;
    s -= lambda * std::log2(lambda);
  }
  return s;
}

Matrix partial_trace(const Matrix& m, Subsystem keep, Index d1, Index d2) {
  if (m.rows() != d1 * d2 || m.cols() != d1 * d2)
    throw ValidationError("partial_trace: matrix size does not match d1*d2");
  if (keep == Subsystem::first) {
    Matrix out = Matrix::Zero(d1, d1);
    for (Index i = 0; i < d1; ++i)
      for (Index j = 0; j < d1; ++j)
        for (Index k = 0; k < d2; ++k) out(i, j) += m(i * d2 + k, j * d2 + k);
    return out;
  }
  Matrix out = Matrix::Zero(d2, d2);
  for (Index a = 0; a < d2; ++a)
    for (Index b = 0; b < d2; ++b)
      for (Index k = 0; k < d1; ++k) out(a, b) += m(k * d2 + a, k * d2 + b);
  return out;
}

Vector vec(const Matrix& x) {
  Vector v(x.rows() * x.cols());
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < x.cols(); ++j) v(i * x.cols() + j) = x(i, j);
  return v;
}

Matrix unvec(const Vector& v, Index rows, Index cols) {
  if (v.size() != rows * cols)
    throw ValidationError("unvec: length does not factor as rows*cols");
  Matrix x(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) x(i, j) = v(i * cols + j);
  return x;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Index SchmidtDecomposition::rank(const ToleranceConfig& tol) const {
  if (coefficients.size() == 0) return 0;
  const double threshold =
      std::max(tol.rank_rtol * coefficients(0), tol.rank_atol);
  Index r = 0;
  for (Index i = 0; i < coefficients.size(); ++i)
    if (coefficients(i) > threshold) ++r;
  return r;
}

SchmidtDecomposition schmidt_decomposition(const Vector& psi, Index d1, Index d2) {
  require_unit_vector(psi);
  Matrix x = unvec(psi, d1, d2);
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  // vec(u v^dag) = u (x) conj(v), so the right Schmidt vectors are the
  // conjugated right singular vectors.
  return {svd.singularValues(), svd.matrixU(), svd.matrixV().conjugate()};
}

Vector basis_state(Index dim, Index k) {
  Vector v = Vector::Zero(dim);
  v(k) = 1.0;
  return v;
}

Vector uniform_superposition(Index dim) {
  return Vector::Constant(dim, Complex(1.0 / std::sqrt(double(dim)), 0.0));
}

Matrix projector_onto(const Vector& psi) { return psi * psi.adjoint(); }

}  // namespace qcap
