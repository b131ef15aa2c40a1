#pragma once

// Seeded generators for property tests.

#include <random>
#include <vector>

#include "perfect/numerics.hpp"
#include "perfect/structures.hpp"

namespace gen {

using perfect::Index;
using perfect::Rational;
using perfect::RationalMatrix;

class Source {
 public:
  explicit Source(std::uint64_t seed) : rng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  // Small rationals p/q with |p| <= 3, 1 <= q <= 2.
  Rational rational() { return perfect::make_rational(integer(-3, 3), integer(1, 2)); }

  RationalMatrix matrix(Index rows, Index cols, int lo = -2, int hi = 2) {
    RationalMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) m(i, j) = integer(lo, hi);
    return m;
  }

  RationalMatrix rational_matrix(Index rows, Index cols) {
    RationalMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) m(i, j) = rational();
    return m;
  }

  // Integer matrix with determinant +-1 from random elementary operations.
  RationalMatrix unimodular(Index n, int steps = 8) {
    RationalMatrix a = RationalMatrix::Identity(n, n);
    if (n < 2) return a;
    for (int s = 0; s < steps; ++s) {
      const Index i = integer(0, static_cast<int>(n - 1));
      Index j = integer(0, static_cast<int>(n - 2));
      if (j >= i) ++j;
      a.row(i) += Rational(integer(-1, 1) == 0 ? 2 : integer(-1, 1)) * a.row(j);
    }
    return a;
  }

  // A diag(values) A^-1 with A unimodular: diagonalizable with a known spectrum.
  RationalMatrix diagonalizable(const std::vector<int>& values) {
    const Index n = static_cast<Index>(values.size());
    RationalMatrix d = RationalMatrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) d(i, i) = values[static_cast<std::size_t>(i)];
    const RationalMatrix a = unimodular(n);
    return a * d * perfect::inverse(a);
  }

  std::vector<int> values(Index n, const std::vector<int>& pool) {
    std::vector<int> out;
    for (Index i = 0; i < n; ++i) out.push_back(pool[static_cast<std::size_t>(integer(0, static_cast<int>(pool.size() - 1)))]);
    return out;
  }

  // Structures (M_i, P, S_i) sharing P: M_i = A blockdiag(S_i, X_i) A^-1 and
  // P = A [I; 0], so M_i P = P S_i for arbitrary S_i, X_i.
  std::vector<perfect::RationalStructure> collection(Index n, Index k, int count) {
    const RationalMatrix a = unimodular(n);
    const RationalMatrix a_inv = perfect::inverse(a);
    RationalMatrix embed = RationalMatrix::Zero(n, k);
    embed.topRows(k) = RationalMatrix::Identity(k, k);
    const RationalMatrix p = a * embed;
    std::vector<perfect::RationalStructure> out;
    for (int c = 0; c < count; ++c) {
      RationalMatrix block = RationalMatrix::Zero(n, n);
      const RationalMatrix s = matrix(k, k);
      block.topLeftCorner(k, k) = s;
      block.bottomRightCorner(n - k, n - k) = matrix(n - k, n - k);
      if (coin()) block.topRightCorner(k, n - k) = matrix(k, n - k);
      out.emplace_back(a * block * a_inv, p, s);
    }
    return out;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace gen
