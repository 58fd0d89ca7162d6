#pragma once

#include <cstdint>
#include <random>

#include "bigframe/types.hpp"

namespace bigframe {

using Rng = std::mt19937_64;

/// Derives an independent stream from a base seed and a trial index.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  // splitmix64 finalizer over (seed, stream) so nearby seeds decorrelate.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  z ^= z >> 31;
  return Rng(z);
}

inline Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      m(i, j) = Complex(normal(rng), normal(rng));
  return m;
}

inline Vector random_unit_vector(Eigen::Index dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(dim);
  double n2 = 0.0;
  do {
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = Complex(normal(rng), normal(rng));
    n2 = v.squaredNorm();
  } while (n2 == 0.0);
  return v / std::sqrt(n2);
}

}  // namespace bigframe
