#pragma once

#include "qcap/numerics.hpp"

#include <random>

namespace qcap {

using Rng = std::mt19937_64;

/// Stateless splitmix64 mix of a base seed with a stream index, so draws
/// keyed by index are independent of evaluation order.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

Matrix ginibre(Index rows, Index cols, Rng& rng);
Vector haar_state(Index dim, Rng& rng);
Matrix haar_unitary(Index dim, Rng& rng);
/// Haar-distributed isometry with rows >= cols, V^dag V = 1.
Matrix haar_isometry(Index rows, Index cols, Rng& rng);
Matrix random_hermitian(Index dim, Rng& rng);
Matrix random_density(Index dim, Rng& rng);
/// Hermitian PSD with unit diagonal; rank <= max_rank (0 means full).
Matrix random_correlation(Index dim, Rng& rng, Index max_rank = 0);

}  // namespace qcap
