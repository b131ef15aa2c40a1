#pragma once

#include "perfect/graphs.hpp"
#include "perfect/numerics.hpp"
#include "perfect/products.hpp"

namespace perfect {

/// An eigenvector h (eigenvalue nu) of a two-term product
/// N = M1 (x) L1 + M2 (x) L2 of order m*n, together with a vector g that is an
/// eigenvector of L1 (lambda_first) and of L2 (lambda_second).
///
/// h is read left-index-major: h(i, j) = h[i * n + j], matching the block
/// layout of kron so that f (x) g reshapes to f g^T.
struct ContractionInput {
  ComplexMatrix product;
  ComplexVector h;
  Complex nu;
  ComplexVector g;
  Complex lambda_first;
  Complex lambda_second;
  Index left_order = 0;
  Index right_order = 0;
};

/// The m x n matrix H with H(i, j) = h[i * n + j].
ComplexMatrix reshape_left_major(const ComplexVector& h, Index left_order, Index right_order);

/// f = H g. The zero vector is a valid outcome.
ComplexVector contract(const ComplexVector& h, const ComplexVector& g, Index left_order,
                       Index right_order);
ComplexVector contract(const ContractionInput& input);

struct ContractionEigenvalues {
  ComplexVector f;
  Complex mu_first;   // M1 f = mu_first f
  Complex mu_second;  // M2 f = mu_second f, (nu - lambda_first mu_first) / lambda_second
};

/// Checks N h = nu h, contracts, gates on f being an eigenvector of m1
/// (Errc::hypothesis_unmet if not) and then asserts m2 f = mu_second f.
/// Throws Errc::excluded_eigenvalue for lambda_second = 0,
/// Errc::zero_contraction when f = 0 and Errc::numerical_failure when the
/// final check misses the tolerance.
ContractionEigenvalues verify_contraction_theorem(const ContractionInput& input,
                                                  const ComplexMatrix& m1,
                                                  const ComplexMatrix& m2,
                                                  double tol = kDefaultTolerance);

struct NamedContraction {
  ComplexVector f;
  Complex mu;
  bool zero = false;      // f vanished; retry with another g
  double residual = 0.0;  // max|M f - mu f|
};

/// Contraction in a named product of `left` and `right`:
///   tensor        mu = nu / lambda            (lambda != 0)
///   cartesian     mu = nu - lambda
///   normal        mu = (nu - lambda) / (1 + lambda)   (lambda != -1)
///   lexicographic mu = (nu - r) / |U| with g the all-ones vector and right
///                 r-regular.
/// Checks that h and g are eigenvectors of the product and of `right`.
NamedContraction contract_named(ProductKind kind, const Graph& left, const Graph& right,
                                const ComplexVector& h, Complex nu, const ComplexVector& g,
                                Complex lambda, double tol = kDefaultTolerance);

}  // namespace perfect
