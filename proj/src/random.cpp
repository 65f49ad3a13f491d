#include "qcap/random.hpp"

namespace qcap {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Matrix ginibre(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  return g;
}

Vector haar_state(Index dim, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = Complex(gauss(rng), gauss(rng));
  return v / v.norm();
}

Matrix haar_isometry(Index rows, Index cols, Rng& rng) {
  Matrix g = ginibre(rows, cols, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  Matrix r = qr.matrixQR().topLeftCorner(cols, cols).triangularView<Eigen::Upper>();
  // Fix the phase ambiguity of QR so the distribution is Haar.
  for (Index j = 0; j < cols; ++j) {
    Complex d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

Matrix haar_unitary(Index dim, Rng& rng) { return haar_isometry(dim, dim, rng); }

Matrix random_hermitian(Index dim, Rng& rng) {
  Matrix g = ginibre(dim, dim, rng);
  return 0.5 * (g + g.adjoint());
}

Matrix random_density(Index dim, Rng& rng) {
  Matrix g = ginibre(dim, dim, rng);
  Matrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

Matrix random_correlation(Index dim, Rng& rng, Index max_rank) {
  const Index r = (max_rank == 0) ? dim : max_rank;
  Matrix g = ginibre(dim, r, rng);
  for (Index i = 0; i < dim; ++i) g.row(i) /= g.row(i).norm();
  return g * g.adjoint();
}

}  // namespace qcap
