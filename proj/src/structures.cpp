#include "perfect/structures.hpp"

#include <string>

namespace perfect {

namespace {

template <ScalarDomain Scalar>
Index rank_of(const Matrix<Scalar>& m, double tol) {
  if constexpr (is_exact_v<Scalar>) {
    (void)tol;
    return rank(m);
  } else {
    return rank(m, tol);
  }
}

template <ScalarDomain Scalar>
Matrix<Scalar> inverse_of(const Matrix<Scalar>& m, double tol) {
  if constexpr (is_exact_v<Scalar>) {
    (void)tol;
    return inverse(m);
  } else {
    return inverse(m, tol);
  }
}

template <ScalarDomain Scalar>
void require_verified(const PerfectStructure<Scalar>& s, double tol, const char* where) {
  if (!verify(s, tol))
    throw Error(Errc::not_verified, std::string(where) + ": structure fails MP = PS");
}

std::string dims(Index r, Index c) { return std::to_string(r) + "x" + std::to_string(c); }

}  // namespace

template <ScalarDomain Scalar>
PerfectStructure<Scalar>::PerfectStructure(MatrixType adjacency, MatrixType structure,
                                           MatrixType parameters)
    : adjacency_(std::move(adjacency)),
      structure_(std::move(structure)),
      parameters_(std::move(parameters)) {
  const Index n = adjacency_.rows();
  const Index k = structure_.cols();
  if (adjacency_.cols() != n || structure_.rows() != n || parameters_.rows() != k ||
      parameters_.cols() != k) {
    throw Error(Errc::dimension_mismatch,
                "incompatible structure: M " + dims(n, adjacency_.cols()) + ", P " +
                    dims(structure_.rows(), k) + ", S " +
                    dims(parameters_.rows(), parameters_.cols()));
  }
  if (k < 1) throw Error(Errc::dimension_mismatch, "structure matrix needs at least one column");
  if (k > n) throw Error(Errc::dimension_mismatch, "structure matrix has more columns than rows");

  const MatrixType difference = adjacency_ * structure_ - structure_ * parameters_;
  residual_ = max_abs(difference);
  if constexpr (is_exact_v<Scalar>) {
    exact_match_ = difference.isZero();
  } else {
    exact_match_ = residual_ == 0.0;
  }
}

template <ScalarDomain Scalar>
bool verify(const PerfectStructure<Scalar>& s, double tol) {
  if constexpr (is_exact_v<Scalar>) {
    (void)tol;
    return s.exact_match();
  } else {
    return s.residual() <= tol;
  }
}

template <ScalarDomain Scalar>
bool is_nonsingular(const PerfectStructure<Scalar>& s, double tol) {
  require_verified(s, tol, "is_nonsingular");
  return rank_of<Scalar>(s.structure(), tol) == s.width();
}

template <ScalarDomain Scalar>
PerfectStructure<Scalar> transform_polynomial(const PerfectStructure<Scalar>& s,
                                              std::span<const Scalar> coefficients) {
  return {poly_eval(coefficients, s.adjacency()), s.structure(),
          poly_eval(coefficients, s.parameters())};
}

template <ScalarDomain Scalar>
PerfectStructure<Scalar> compose(const PerfectStructure<Scalar>& outer,
                                 const PerfectStructure<Scalar>& inner, double tol) {
  if (outer.parameters().rows() != inner.adjacency().rows() ||
      outer.parameters() != inner.adjacency()) {
    throw Error(Errc::chaining_mismatch,
                "outer parameter matrix differs from inner adjacency matrix");
  }
  require_verified(outer, tol, "compose (outer)");
  require_verified(inner, tol, "compose (inner)");
  return {outer.adjacency(), outer.structure() * inner.structure(), inner.parameters()};
}

template <ScalarDomain Scalar>
PerfectStructure<Scalar> similar_transform(const PerfectStructure<Scalar>& s,
                                           const Matrix<Scalar>& a, const Matrix<Scalar>& b,
                                           double tol) {
  if (a.rows() != s.order() || a.cols() != s.order() || b.rows() != s.width() ||
      b.cols() != s.width()) {
    throw Error(Errc::dimension_mismatch, "similarity matrices must be n x n and k x k");
  }
  require_verified(s, tol, "similar_transform");
  const Matrix<Scalar> a_inv = inverse_of<Scalar>(a, tol);
  const Matrix<Scalar> b_inv = inverse_of<Scalar>(b, tol);
  return {a * s.adjacency() * a_inv, a * s.structure() * b_inv, b * s.parameters() * b_inv};
}

template <ScalarDomain Scalar>
CanonicalForm canonical_form(const PerfectStructure<Scalar>& s, const EigenOptions& options) {
  if (!is_nonsingular(s, options.tolerance))
    throw Error(Errc::singular, "canonical form needs a nonsingular structure");
  if (!is_diagonalizable(s.adjacency(), options))
    throw Error(Errc::defective, "adjacency matrix is not diagonalizable");

  EigenSystem parameter_eigen;
  try {
    parameter_eigen = eig(s.parameters(), options);
  } catch (const Error& e) {
    if (e.code() != Errc::defective) throw;
    throw Error(Errc::defective,
                "parameter matrix is defective; a nonsingular structure cannot have one");
  }

  const ComplexMatrix p = to_complex(s.structure());
  const ComplexMatrix& v = parameter_eigen.vectors;
  const ComplexMatrix v_inv = inverse(v, options.tolerance);
  const Index k = s.width();

  CanonicalForm form;
  form.diagonal_parameters = ComplexMatrix::Zero(k, k);
  form.eigen_columns = p * v;
  form.basis_change = v_inv;
  for (Index i = 0; i < k; ++i) {
    form.diagonal_parameters(i, i) = parameter_eigen.values[i];
    const ComplexVector column = form.eigen_columns.col(i);
    const ComplexVector unit = normalize_eigenvector(column, options.tolerance);
    // unit = column / c for a real c of magnitude |column|; move c into B.
    const Complex c = column.dot(unit);
    form.eigen_columns.col(i) = unit;
    form.basis_change.row(i) *= c;
  }
  return form;
}

template <ScalarDomain Scalar>
bool spectrum_inclusion_check(const PerfectStructure<Scalar>& s, const EigenOptions& options) {
  if (!is_nonsingular(s, options.tolerance))
    throw Error(Errc::singular, "spectrum inclusion needs a nonsingular structure");
  if (!is_diagonalizable(s.parameters(), options)) return false;
  const Spectrum parameter_spectrum = Spectrum::from_eigen(eig(s.parameters(), options),
                                                           options.cluster_radius);
  const Spectrum adjacency_spectrum = Spectrum::from_eigen(eig(s.adjacency(), options),
                                                           options.cluster_radius);
  return is_submultiset(parameter_spectrum, adjacency_spectrum, options.cluster_radius);
}

std::vector<ComplexMatrix> structure_space_basis(const ComplexMatrix& m, const ComplexMatrix& s,
                                                 const EigenOptions& options) {
  const EigenSystem me = eig(m, options);
  const EigenSystem se = eig(s, options);
  const ComplexMatrix s_vectors_inv = inverse(se.vectors, options.tolerance);
  std::vector<ComplexMatrix> basis;
  for (std::size_t i = 0; i < me.values.size(); ++i) {
    for (std::size_t j = 0; j < se.values.size(); ++j) {
      if (std::abs(me.values[i] - se.values[j]) > options.cluster_radius) continue;
      basis.push_back(me.vectors.col(static_cast<Index>(i)) *
                      s_vectors_inv.row(static_cast<Index>(j)));
    }
  }
  return basis;
}

std::vector<ComplexMatrix> structure_space_basis(const RationalMatrix& m, const RationalMatrix& s,
                                                 const EigenOptions& options) {
  return structure_space_basis(to_complex(m), to_complex(s), options);
}

RationalMatrix parameters_from_structure(const RationalMatrix& m, const RationalMatrix& p) {
  if (m.rows() != m.cols() || p.rows() != m.rows())
    throw Error(Errc::dimension_mismatch, "parameters_from_structure: M must be n x n, P n x k");
  const Index k = p.cols();
  // Row-reduce [P | MP]; with rank(P) = k the top k rows carry S.
  RationalMatrix augmented(p.rows(), 2 * k);
  augmented << p, m * p;
  std::vector<Index> pivots;
  const RationalMatrix r = rref(augmented, &pivots);
  Index structure_pivots = 0;
  for (Index c : pivots) structure_pivots += c < k ? 1 : 0;
  if (structure_pivots < k)
    throw Error(Errc::rank_deficient, "structure matrix lacks full column rank");
  if (static_cast<Index>(pivots.size()) > k)
    throw Error(Errc::not_invariant, "column span of P is not invariant under M");
  return r.block(0, k, k, k);
}

ComplexMatrix parameters_from_structure(const ComplexMatrix& m, const ComplexMatrix& p,
                                        double tol) {
  if (m.rows() != m.cols() || p.rows() != m.rows())
    throw Error(Errc::dimension_mismatch, "parameters_from_structure: M must be n x n, P n x k");
  if (rank(p, tol) < p.cols())
    throw Error(Errc::rank_deficient, "structure matrix lacks full column rank");
  const ComplexMatrix target = m * p;
  const ComplexMatrix s = p.colPivHouseholderQr().solve(target);
  if (max_abs(p * s - target) > tol)
    throw Error(Errc::not_invariant, "column span of P is not invariant under M");
  return s;
}

template <ScalarDomain Scalar>
PerfectStructure<Scalar> classify_identity(const Matrix<Scalar>& p) {
  return {identity<Scalar>(p.rows()), p, identity<Scalar>(p.cols())};
}

template <ScalarDomain Scalar>
UnityClassification<Scalar> classify_unity(const PerfectStructure<Scalar>& s, double tol) {
  const Index n = s.order();
  const Index k = s.width();
  if (!approx_equal(s.adjacency(), unity<Scalar>(n), tol))
    throw Error(Errc::invalid_argument, "classify_unity: adjacency is not J");
  if (!is_nonsingular(s, tol))
    throw Error(Errc::singular, "classify_unity: structure is singular");

  const Matrix<Scalar>& p = s.structure();
  const Matrix<Scalar>& params = s.parameters();
  UnityClassification<Scalar> out;
  out.column_sums = p.colwise().sum().transpose();

  Index pivot_row = -1;
  Index pivot_col = -1;
  for (Index i = 0; i < k && pivot_row < 0; ++i)
    for (Index j = 0; j < k; ++j)
      if (!is_zero(params(i, j), tol)) {
        pivot_row = i;
        pivot_col = j;
        break;
      }

  if (pivot_row < 0) {
    out.kind = UnityCase::zero_parameters;
    out.v = Vector<Scalar>::Zero(k);
    out.u = Vector<Scalar>::Zero(k);
    for (Index j = 0; j < k; ++j)
      if (!is_zero(out.column_sums(j), tol))
        throw Error(Errc::hypothesis_unmet, "zero parameters but a nonzero column sum");
    return out;
  }

  // v_{pivot_row} = 1, so row pivot_row of S is n * u^T and column pivot_col
  // fixes the remaining v_i.
  const Scalar size = Scalar(static_cast<long>(n));
  out.kind = UnityCase::rank_one_parameters;
  out.u = params.row(pivot_row).transpose() / size;
  out.v.resize(k);
  for (Index i = 0; i < k; ++i) out.v(i) = params(i, pivot_col) / params(pivot_row, pivot_col);

  const Matrix<Scalar> rebuilt = size * out.v * out.u.transpose();
  if (!approx_equal(rebuilt, params, tol))
    throw Error(Errc::hypothesis_unmet, "parameter matrix of a structure over J is not rank one");
  // Column j of P sums to n u_j sum_t p_{i,t} v_t, for every row i.
  const Vector<Scalar> weights = p * out.v;
  for (Index i = 0; i < n; ++i) {
    const Vector<Scalar> law = size * weights(i) * out.u;
    if (!approx_equal(law, out.column_sums, tol))
      throw Error(Errc::hypothesis_unmet, "column-sum law fails on row " + std::to_string(i));
  }
  return out;
}

#define PERFECT_INSTANTIATE(S)                                                                    \
  template class PerfectStructure<S>;                                                             \
  template bool verify(const PerfectStructure<S>&, double);                                       \
  template bool is_nonsingular(const PerfectStructure<S>&, double);                               \
  template PerfectStructure<S> transform_polynomial(const PerfectStructure<S>&,                   \
                                                    std::span<const S>);                          \
  template PerfectStructure<S> compose(const PerfectStructure<S>&, const PerfectStructure<S>&,    \
                                       double);                                                   \
  template PerfectStructure<S> similar_transform(const PerfectStructure<S>&, const Matrix<S>&,    \
                                                 const Matrix<S>&, double);                       \
  template CanonicalForm canonical_form(const PerfectStructure<S>&, const EigenOptions&);         \
  template bool spectrum_inclusion_check(const PerfectStructure<S>&, const EigenOptions&);        \
  template PerfectStructure<S> classify_identity(const Matrix<S>&);                               \
  template UnityClassification<S> classify_unity(const PerfectStructure<S>&, double);

PERFECT_INSTANTIATE(Rational)
PERFECT_INSTANTIATE(Complex)

#undef PERFECT_INSTANTIATE

}  // namespace perfect
