#pragma once

#include <span>
#include <vector>

#include "perfect/numerics.hpp"
#include "perfect/spectrum.hpp"

namespace perfect {

/// A triple (M, P, S) of an n x n adjacency matrix, an n x k structure matrix
/// and a k x k parameter matrix. The residual max|MP - PS| is computed once at
/// construction; in the exact domain `exact_match` records MP == PS.
template <ScalarDomain Scalar>
class PerfectStructure {
 public:
  using MatrixType = Matrix<Scalar>;

  /// Throws Errc::dimension_mismatch unless adjacency.cols() == structure.rows(),
  /// structure.cols() == parameters.rows() == parameters.cols() and 1 <= k <= n.
  PerfectStructure(MatrixType adjacency, MatrixType structure, MatrixType parameters);

  const MatrixType& adjacency() const { return adjacency_; }
  const MatrixType& structure() const { return structure_; }
  const MatrixType& parameters() const { return parameters_; }

  Index order() const { return adjacency_.rows(); }
  Index width() const { return structure_.cols(); }

  double residual() const { return residual_; }
  bool exact_match() const { return exact_match_; }

 private:
  MatrixType adjacency_;
  MatrixType structure_;
  MatrixType parameters_;
  double residual_ = 0.0;
  bool exact_match_ = false;
};

using RationalStructure = PerfectStructure<Rational>;
using ComplexStructure = PerfectStructure<Complex>;

/// MP == PS exactly for rationals, max|MP - PS| <= tol for complex.
template <ScalarDomain Scalar>
bool verify(const PerfectStructure<Scalar>& s, double tol = kDefaultTolerance);

/// rank(P) == k. Throws Errc::not_verified on a triple that fails MP = PS.
template <ScalarDomain Scalar>
bool is_nonsingular(const PerfectStructure<Scalar>& s, double tol = kDefaultTolerance);

/// (p(M), P, p(S)), coefficients in ascending degree.
template <ScalarDomain Scalar>
PerfectStructure<Scalar> transform_polynomial(const PerfectStructure<Scalar>& s,
                                              std::span<const Scalar> coefficients);

/// (M, P R, T) from (M, P, S) and (S, R, T). Requires outer.parameters() to
/// equal inner.adjacency() entry for entry.
template <ScalarDomain Scalar>
PerfectStructure<Scalar> compose(const PerfectStructure<Scalar>& outer,
                                 const PerfectStructure<Scalar>& inner,
                                 double tol = kDefaultTolerance);

/// (A M A^-1, A P B^-1, B S B^-1).
template <ScalarDomain Scalar>
PerfectStructure<Scalar> similar_transform(const PerfectStructure<Scalar>& s,
                                           const Matrix<Scalar>& a, const Matrix<Scalar>& b,
                                           double tol = kDefaultTolerance);

/// A similar structure with diagonal parameters: T = diag(mu), columns of R
/// are unit eigenvectors of M with M R_i = mu_i R_i, and P = R B.
struct CanonicalForm {
  ComplexMatrix diagonal_parameters;
  ComplexMatrix eigen_columns;
  ComplexMatrix basis_change;
};

template <ScalarDomain Scalar>
CanonicalForm canonical_form(const PerfectStructure<Scalar>& s,
                             const EigenOptions& options = {});

/// sp(S) is a sub-multiset of sp(M) and S is diagonalizable. The structure
/// must verify and be nonsingular (Errc::not_verified / Errc::singular).
template <ScalarDomain Scalar>
bool spectrum_inclusion_check(const PerfectStructure<Scalar>& s,
                              const EigenOptions& options = {});

/// Basis of {P : M P = P S} for diagonalizable M and S. Built in the joint
/// eigenbasis: U e_i e_j^T V^-1 for every pair of equal eigenvalues
/// lambda_i(M) = mu_j(S), so its length is sum over lambda of
/// mult_M(lambda) * mult_S(lambda).
std::vector<ComplexMatrix> structure_space_basis(const ComplexMatrix& m, const ComplexMatrix& s,
                                                 const EigenOptions& options = {});
std::vector<ComplexMatrix> structure_space_basis(const RationalMatrix& m, const RationalMatrix& s,
                                                 const EigenOptions& options = {});

/// The unique S with M P = P S. Throws Errc::rank_deficient when P lacks full
/// column rank and Errc::not_invariant when span(P) is not M-invariant.
RationalMatrix parameters_from_structure(const RationalMatrix& m, const RationalMatrix& p);
ComplexMatrix parameters_from_structure(const ComplexMatrix& m, const ComplexMatrix& p,
                                        double tol = kDefaultTolerance);

/// (I, P, I): every structure over the identity adjacency has S = I.
template <ScalarDomain Scalar>
PerfectStructure<Scalar> classify_identity(const Matrix<Scalar>& p);

enum class UnityCase { zero_parameters, rank_one_parameters };

/// Classification of a nonsingular structure over J_n. In the zero case
/// `column_sums` (all zero) is the certificate; in the rank-one case
/// S = n v u^T with the first nonzero entry of v fixed to 1.
template <ScalarDomain Scalar>
struct UnityClassification {
  UnityCase kind;
  Vector<Scalar> v;
  Vector<Scalar> u;
  Vector<Scalar> column_sums;
};

template <ScalarDomain Scalar>
UnityClassification<Scalar> classify_unity(const PerfectStructure<Scalar>& s,
                                           double tol = kDefaultTolerance);

}  // namespace perfect
