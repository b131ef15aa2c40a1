#pragma once

#include <complex>
#include <concepts>
#include <span>
#include <type_traits>
#include <vector>

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>
#include <Eigen/Dense>

#include "perfect/error.hpp"

namespace perfect {

// Exact rationals are kept in lowest terms with a positive denominator by GMP.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Complex = std::complex<double>;
using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using RationalMatrix = Matrix<Rational>;
using RationalVector = Vector<Rational>;
using ComplexMatrix = Matrix<Complex>;
using ComplexVector = Vector<Complex>;

/// The two scalar domains. Arithmetic never mixes them implicitly; use
/// to_complex() to cross from the exact domain.
template <typename T>
concept ScalarDomain = std::same_as<T, Rational> || std::same_as<T, Complex>;

template <typename T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

inline constexpr double kDefaultTolerance = 1e-9;
inline constexpr double kClusterRadius = 1e-6;

/// Builds p/q, normalizing the sign into the numerator.
Rational make_rational(long long numerator, long long denominator = 1);

double to_double(const Rational& x);
Complex to_complex(const Rational& x);
ComplexMatrix to_complex(const RationalMatrix& m);
ComplexVector to_complex(const RationalVector& v);
inline const ComplexMatrix& to_complex(const ComplexMatrix& m) { return m; }

inline double magnitude(const Rational& x) { return std::abs(to_double(x)); }
inline double magnitude(const Complex& x) { return std::abs(x); }

/// Largest entry magnitude, i.e. the max-norm of the entries.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  double best = 0.0;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) best = std::max(best, magnitude(m(i, j)));
  return best;
}

/// Exact comparison in the rational domain, max-norm tolerance otherwise.
template <typename DerivedA, typename DerivedB>
bool approx_equal(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
                  double tol = kDefaultTolerance) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if constexpr (is_exact_v<typename DerivedA::Scalar>) {
    return a == b;
  } else {
    return max_abs(a - b) <= tol;
  }
}

template <ScalarDomain Scalar>
bool is_zero(const Scalar& x, double tol = kDefaultTolerance) {
  if constexpr (is_exact_v<Scalar>) {
    return x == 0;
  } else {
    return std::abs(x) <= tol;
  }
}

template <ScalarDomain Scalar>
Matrix<Scalar> identity(Index n) {
  return Matrix<Scalar>::Identity(n, n);
}

/// The all-ones matrix J.
template <ScalarDomain Scalar>
Matrix<Scalar> unity(Index rows, Index cols) {
  return Matrix<Scalar>::Constant(rows, cols, Scalar(1));
}
template <ScalarDomain Scalar>
Matrix<Scalar> unity(Index n) {
  return unity<Scalar>(n, n);
}

/// Kronecker product: block (i, j) of the result is a(i, j) * b.
template <typename DerivedA, typename DerivedB>
Matrix<typename DerivedA::Scalar> kron(const Eigen::MatrixBase<DerivedA>& a,
                                       const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  static_assert(std::is_same_v<Scalar, typename DerivedB::Scalar>,
                "kron operands must share one scalar domain");
  const Index br = b.rows();
  const Index bc = b.cols();
  Matrix<Scalar> out(a.rows() * br, a.cols() * bc);
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out.block(i * br, j * bc, br, bc) = a(i, j) * b;
  return out;
}

/// Kronecker product of two column vectors, kept as a vector.
template <typename DerivedA, typename DerivedB>
Vector<typename DerivedA::Scalar> kron_vector(const Eigen::MatrixBase<DerivedA>& a,
                                              const Eigen::MatrixBase<DerivedB>& b) {
  if (a.cols() != 1 || b.cols() != 1)
    throw Error(Errc::dimension_mismatch, "kron_vector expects column vectors");
  return kron(a, b).col(0);
}

/// Horner evaluation of sum_i coefficients[i] * m^i.
template <ScalarDomain Scalar>
Matrix<Scalar> poly_eval(std::span<const Scalar> coefficients, const Matrix<Scalar>& m) {
  if (m.rows() != m.cols()) throw Error(Errc::dimension_mismatch, "poly_eval needs a square matrix");
  const Index n = m.rows();
  Matrix<Scalar> result = Matrix<Scalar>::Zero(n, n);
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
    result = result * m;
    result.diagonal().array() += *it;
  }
  return result;
}

template <ScalarDomain Scalar>
Matrix<Scalar> poly_eval(const std::vector<Scalar>& coefficients, const Matrix<Scalar>& m) {
  return poly_eval(std::span<const Scalar>(coefficients), m);
}

// Linear algebra kernels. The exact overloads eliminate over Q; the complex
// overloads use SVD / LU with an absolute threshold of tol * max(1, |A|).

/// Reduced row echelon form over Q; pivots receives the pivot column of each
/// nonzero row.
RationalMatrix rref(const RationalMatrix& a, std::vector<Index>* pivots = nullptr);

Index rank(const RationalMatrix& a);
Index rank(const ComplexMatrix& a, double tol = kDefaultTolerance);

/// Columns form a basis of {x : a x = 0}.
RationalMatrix nullspace(const RationalMatrix& a);
ComplexMatrix nullspace(const ComplexMatrix& a, double tol = kDefaultTolerance);

RationalMatrix inverse(const RationalMatrix& a);
ComplexMatrix inverse(const ComplexMatrix& a, double tol = kDefaultTolerance);

double determinant_magnitude(const ComplexMatrix& a);

struct EigenOptions {
  double tolerance = kDefaultTolerance;   // residual bound |M v - lambda v|_inf
  double cluster_radius = kClusterRadius;  // eigenvalues closer than this are one eigenvalue
  int max_iterations = 0;                  // 0 keeps the solver's own budget
};

/// Eigenvalues ascending by (real, imag); column i of vectors belongs to values[i].
struct EigenSystem {
  std::vector<Complex> values;
  ComplexMatrix vectors;
  double residual = 0.0;
};

/// Full eigendecomposition of a diagonalizable matrix. Hermitian input takes
/// the self-adjoint path (real eigenvalues, orthonormal vectors). Each vector
/// has unit 2-norm and its first nonzero entry has nonnegative real part.
/// Throws Errc::defective when an eigenvalue cluster has a deficient
/// eigenspace and Errc::no_convergence when the solver fails.
EigenSystem eig(const ComplexMatrix& m, const EigenOptions& options = {});
EigenSystem eig(const RationalMatrix& m, const EigenOptions& options = {});

bool is_hermitian(const ComplexMatrix& m, double tol = kDefaultTolerance);

bool is_diagonalizable(const ComplexMatrix& m, const EigenOptions& options = {});
bool is_diagonalizable(const RationalMatrix& m, const EigenOptions& options = {});

/// Scales v to unit 2-norm and flips its sign so the first entry above
/// threshold has nonnegative real part.
ComplexVector normalize_eigenvector(const ComplexVector& v, double threshold = kDefaultTolerance);

/// Groups values within radius (single linkage); groups are ordered by the
/// (real, imag) order of their mean.
std::vector<std::vector<std::size_t>> cluster_values(std::span<const Complex> values,
                                                     double radius = kClusterRadius);

}  // namespace perfect
