#pragma once

#include <random>

#include "slopekit/lattice.hpp"

namespace slopekit::testing {

inline long uniform(std::mt19937_64& rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

inline ZMatrix random_integer_matrix(std::mt19937_64& rng, size_t r, size_t c, long bound) {
  ZMatrix m(r, c);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j) m(i, j) = uniform(rng, -bound, bound);
  return m;
}

inline EuclideanLattice random_integral_lattice(std::mt19937_64& rng, size_t rank, long bound = 3) {
  for (;;) {
    QMatrix b = to_rational(random_integer_matrix(rng, rank, rank, bound));
    if (determinant(b) == 0) continue;
    return EuclideanLattice(b * b.transpose());
  }
}

inline Rational random_positive_rational(std::mt19937_64& rng, long bound = 9) {
  Rational q(uniform(rng, 1, bound), uniform(rng, 1, bound));
  q.canonicalize();
  return q;
}

inline EuclideanLattice random_rational_lattice(std::mt19937_64& rng, size_t rank, long bound = 3) {
  return scale(random_integral_lattice(rng, rank, bound), random_positive_rational(rng));
}

inline QMatrix e8_gram() {
  // Cartan matrix of E8: chain 0-2-3-4-5-6-7 with node 1 attached to node 3
  QMatrix g = QMatrix::identity(8) * Rational(2);
  const int edges[7][2] = {{0, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {1, 3}};
  for (auto& e : edges) {
    g(e[0], e[1]) = -1;
    g(e[1], e[0]) = -1;
  }
  return g;
}

inline QMatrix a2_gram() { return QMatrix{{2, 1}, {1, 2}}; }

}  // namespace slopekit::testing
