#pragma once

#include <span>
#include <vector>

#include "perfect/graphs.hpp"
#include "perfect/numerics.hpp"
#include "perfect/spectrum.hpp"
#include "perfect/structures.hpp"

namespace perfect {

/// The (alpha_ij)-product sum_{i,j} alpha_ij M_i (x) L_j of left factors
/// M_1..M_m (common order n') and right factors L_1..L_l (common order n'').
template <ScalarDomain Scalar>
class ProductSpec {
 public:
  /// Throws Errc::dimension_mismatch on non-square or unequal factor orders or
  /// an m x l mismatch in the coefficient grid, Errc::invalid_argument on an
  /// all-zero grid.
  ProductSpec(std::vector<Matrix<Scalar>> left_factors, std::vector<Matrix<Scalar>> right_factors,
              Matrix<Scalar> coefficients);

  const std::vector<Matrix<Scalar>>& left_factors() const { return left_; }
  const std::vector<Matrix<Scalar>>& right_factors() const { return right_; }
  const Matrix<Scalar>& coefficients() const { return coefficients_; }

  Index left_order() const { return left_.front().rows(); }
  Index right_order() const { return right_.front().rows(); }

 private:
  std::vector<Matrix<Scalar>> left_;
  std::vector<Matrix<Scalar>> right_;
  Matrix<Scalar> coefficients_;
};

enum class ProductKind { tensor, cartesian, normal, lexicographic };

/// tensor: {M}{L}[1]; cartesian: {M, I}{I, L} diag(1, 1);
/// normal: {M, I}{I, L} [[1, 1], [0, 1]]; lexicographic: {M, I}{J, L} diag(1, 1).
template <ScalarDomain Scalar>
ProductSpec<Scalar> named_product(ProductKind kind, const Matrix<Scalar>& left,
                                  const Matrix<Scalar>& right);

template <ScalarDomain Scalar>
Matrix<Scalar> build_product(const ProductSpec<Scalar>& spec);

Graph graph_product(ProductKind kind, const Graph& left, const Graph& right);

/// (sum alpha M_i (x) L_j, P (x) R, sum alpha S_i (x) T_j) from collections
/// (M_i, P, S_i) and (L_j, R, T_j) that share P and R respectively and whose
/// adjacency matrices are the factors of `spec`.
template <ScalarDomain Scalar>
PerfectStructure<Scalar> product_structures(const ProductSpec<Scalar>& spec,
                                            std::span<const PerfectStructure<Scalar>> left,
                                            std::span<const PerfectStructure<Scalar>> right,
                                            double tol = kDefaultTolerance);

/// (M (x) J + I (x) L, P (x) R, S (x) T' + I (x) T) where T' solves J R = R T'.
/// Throws Errc::not_invariant when no T' exists.
template <ScalarDomain Scalar>
PerfectStructure<Scalar> lexicographic_structure(const PerfectStructure<Scalar>& left,
                                                 const PerfectStructure<Scalar>& right,
                                                 double tol = kDefaultTolerance);

/// A basis shared by a collection of diagonalizable matrices: values[i][s] is
/// the eigenvalue of factor i on column s.
struct ConsolidatedBasis {
  ComplexMatrix vectors;
  std::vector<std::vector<Complex>> values;
};

/// Finds a shared eigenbasis from a generic combination of the factors and
/// checks every factor maps every basis vector to a multiple of itself.
/// Throws Errc::consolidation_failed otherwise.
ConsolidatedBasis consolidate(std::span<const ComplexMatrix> factors,
                              const EigenOptions& options = {});

/// Checks a caller-supplied basis against every factor.
ConsolidatedBasis consolidate(std::span<const ComplexMatrix> factors, const ComplexMatrix& basis,
                              const EigenOptions& options = {});

/// {sum_ij alpha_ij mu^i_s lambda^j_t : s <= n', t <= n''}.
Spectrum product_spectrum(const ProductSpec<Complex>& spec, const ConsolidatedBasis& left,
                          const ConsolidatedBasis& right, double radius = kClusterRadius);

template <ScalarDomain Scalar>
Spectrum product_spectrum(const ProductSpec<Scalar>& spec, const EigenOptions& options = {});

template <typename DerivedA, typename DerivedB>
Vector<typename DerivedA::Scalar> product_eigenvector(const Eigen::MatrixBase<DerivedA>& f,
                                                      const Eigen::MatrixBase<DerivedB>& g) {
  return kron_vector(f, g);
}

/// Eigenvalue of f (x) g in a named product for mu = eigenvalue of f, lambda of
/// g, and lambda_tilde the eigenvalue of J on g (lexicographic only).
Complex product_eigenvalue(ProductKind kind, Complex mu, Complex lambda,
                           Complex lambda_tilde = 0.0);

/// Eigenvalue of J on an eigenvector g of a connected regular graph: n when g
/// is parallel to the all-ones vector, 0 when g sums to zero. Throws
/// Errc::hypothesis_unmet otherwise.
Complex unity_eigenvalue(const ComplexVector& g, double tol = kDefaultTolerance);

template <ScalarDomain Scalar>
ProductSpec<Complex> to_complex(const ProductSpec<Scalar>& spec);

}  // namespace perfect
