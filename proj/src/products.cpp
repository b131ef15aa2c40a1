#include "perfect/products.hpp"

#include <cmath>
#include <string>

namespace perfect {

template <ScalarDomain Scalar>
ProductSpec<Scalar>::ProductSpec(std::vector<Matrix<Scalar>> left_factors,
                                 std::vector<Matrix<Scalar>> right_factors,
                                 Matrix<Scalar> coefficients)
    : left_(std::move(left_factors)),
      right_(std::move(right_factors)),
      coefficients_(std::move(coefficients)) {
  if (left_.empty() || right_.empty())
    throw Error(Errc::dimension_mismatch, "product needs at least one factor on each side");
  auto check_side = [](const std::vector<Matrix<Scalar>>& side, const char* name) {
    const Index order = side.front().rows();
    for (const auto& f : side)
      if (f.rows() != order || f.cols() != order || order == 0)
        throw Error(Errc::dimension_mismatch,
                    std::string(name) + " factors must be square of one common order");
  };
  check_side(left_, "left");
  check_side(right_, "right");
  if (coefficients_.rows() != static_cast<Index>(left_.size()) ||
      coefficients_.cols() != static_cast<Index>(right_.size()))
    throw Error(Errc::dimension_mismatch, "coefficient grid must be m x l");
  bool any_nonzero = false;
  for (Index i = 0; i < coefficients_.rows(); ++i)
    for (Index j = 0; j < coefficients_.cols(); ++j)
      any_nonzero = any_nonzero || coefficients_(i, j) != Scalar(0);
  if (!any_nonzero) throw Error(Errc::invalid_argument, "coefficient grid is all zero");
}

template <ScalarDomain Scalar>
ProductSpec<Scalar> named_product(ProductKind kind, const Matrix<Scalar>& left,
                                  const Matrix<Scalar>& right) {
  const Matrix<Scalar> left_identity = identity<Scalar>(left.rows());
  const Matrix<Scalar> right_identity = identity<Scalar>(right.rows());
  Matrix<Scalar> grid = Matrix<Scalar>::Identity(2, 2);
  switch (kind) {
    case ProductKind::tensor:
      return {{left}, {right}, Matrix<Scalar>::Constant(1, 1, Scalar(1))};
    case ProductKind::cartesian:
      return {{left, left_identity}, {right_identity, right}, grid};
    case ProductKind::normal:
      grid(0, 1) = Scalar(1);
      return {{left, left_identity}, {right_identity, right}, grid};
    case ProductKind::lexicographic:
      return {{left, left_identity}, {unity<Scalar>(right.rows()), right}, grid};
  }
  throw Error(Errc::invalid_argument, "unknown product kind");
}

template <ScalarDomain Scalar>
Matrix<Scalar> build_product(const ProductSpec<Scalar>& spec) {
  const Index n = spec.left_order() * spec.right_order();
  Matrix<Scalar> out = Matrix<Scalar>::Zero(n, n);
  const auto& alpha = spec.coefficients();
  for (Index i = 0; i < alpha.rows(); ++i)
    for (Index j = 0; j < alpha.cols(); ++j)
      if (alpha(i, j) != Scalar(0))
        out += alpha(i, j) * kron(spec.left_factors()[i], spec.right_factors()[j]);
  return out;
}

Graph graph_product(ProductKind kind, const Graph& left, const Graph& right) {
  return Graph(build_product(named_product(kind, left.adjacency(), right.adjacency())));
}

namespace {

template <ScalarDomain Scalar>
const Matrix<Scalar>& shared_structure(std::span<const PerfectStructure<Scalar>> side,
                                       const std::vector<Matrix<Scalar>>& factors,
                                       double tol, const char* name) {
  if (side.size() != factors.size())
    throw Error(Errc::dimension_mismatch,
                std::string(name) + ": one structure per factor is required");
  const Matrix<Scalar>& shared = side.front().structure();
  for (std::size_t i = 0; i < side.size(); ++i) {
    const auto& s = side[i];
    if (s.structure().rows() != shared.rows() || s.structure().cols() != shared.cols() ||
        s.structure() != shared)
      throw Error(Errc::invalid_argument,
                  std::string(name) + " structures must share one structure matrix");
    if (s.adjacency().rows() != factors[i].rows() || s.adjacency() != factors[i])
      throw Error(Errc::invalid_argument,
                  std::string(name) + " structure adjacency differs from its factor");
    if (!verify(s, tol))
      throw Error(Errc::not_verified, std::string(name) + " structure fails MP = PS");
  }
  return shared;
}

}  // namespace

template <ScalarDomain Scalar>
PerfectStructure<Scalar> product_structures(const ProductSpec<Scalar>& spec,
                                            std::span<const PerfectStructure<Scalar>> left,
                                            std::span<const PerfectStructure<Scalar>> right,
                                            double tol) {
  const Matrix<Scalar>& p = shared_structure(left, spec.left_factors(), tol, "left");
  const Matrix<Scalar>& r = shared_structure(right, spec.right_factors(), tol, "right");
  const Index k = p.cols() * r.cols();
  Matrix<Scalar> parameters = Matrix<Scalar>::Zero(k, k);
  const auto& alpha = spec.coefficients();
  for (Index i = 0; i < alpha.rows(); ++i)
    for (Index j = 0; j < alpha.cols(); ++j)
      if (alpha(i, j) != Scalar(0))
        parameters += alpha(i, j) * kron(left[i].parameters(), right[j].parameters());
  return {build_product(spec), kron(p, r), std::move(parameters)};
}

template <ScalarDomain Scalar>
PerfectStructure<Scalar> lexicographic_structure(const PerfectStructure<Scalar>& left,
                                                 const PerfectStructure<Scalar>& right,
                                                 double tol) {
  const Index h = right.order();
  Matrix<Scalar> unity_parameters;
  if constexpr (is_exact_v<Scalar>) {
    unity_parameters = parameters_from_structure(unity<Scalar>(h), right.structure());
  } else {
    unity_parameters = parameters_from_structure(unity<Scalar>(h), right.structure(), tol);
  }
  const ProductSpec<Scalar> spec =
      named_product(ProductKind::lexicographic, left.adjacency(), right.adjacency());
  const std::vector<PerfectStructure<Scalar>> lefts{
      left, PerfectStructure<Scalar>(identity<Scalar>(left.order()), left.structure(),
                                     identity<Scalar>(left.width()))};
  const std::vector<PerfectStructure<Scalar>> rights{
      PerfectStructure<Scalar>(unity<Scalar>(h), right.structure(), unity_parameters), right};
  return product_structures<Scalar>(spec, lefts, rights, tol);
}

ConsolidatedBasis consolidate(std::span<const ComplexMatrix> factors, const ComplexMatrix& basis,
                              const EigenOptions& options) {
  ConsolidatedBasis out;
  out.vectors = basis;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const ComplexMatrix& f = factors[i];
    if (f.rows() != basis.rows())
      throw Error(Errc::dimension_mismatch, "basis and factor orders differ");
    const double bound = options.tolerance * std::max(1.0, max_abs(f));
    std::vector<Complex> values;
    for (Index s = 0; s < basis.cols(); ++s) {
      const ComplexVector v = basis.col(s);
      const ComplexVector image = f * v;
      const Complex value = v.dot(image) / v.squaredNorm();
      if (max_abs(image - value * v) > bound)
        throw Error(Errc::consolidation_failed, "factor " + std::to_string(i) +
                                                    " does not fix basis vector " +
                                                    std::to_string(s));
      values.push_back(value);
    }
    out.values.push_back(std::move(values));
  }
  return out;
}

ConsolidatedBasis consolidate(std::span<const ComplexMatrix> factors,
                              const EigenOptions& options) {
  if (factors.empty()) throw Error(Errc::invalid_argument, "no factors to consolidate");
  // Real weights keep a Hermitian collection Hermitian.
  const Index n = factors.front().rows();
  ComplexMatrix combination = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < factors.size(); ++i)
    combination += (1.0 / (static_cast<double>(i) + std::sqrt(2.0))) * factors[i];
  EigenSystem es;
  try {
    es = eig(combination, options);
  } catch (const Error& e) {
    throw Error(Errc::consolidation_failed,
                std::string("no shared eigenbasis: ") + e.what());
  }
  return consolidate(factors, es.vectors, options);
}

Spectrum product_spectrum(const ProductSpec<Complex>& spec, const ConsolidatedBasis& left,
                          const ConsolidatedBasis& right, double radius) {
  const auto& alpha = spec.coefficients();
  if (left.values.size() != static_cast<std::size_t>(alpha.rows()) ||
      right.values.size() != static_cast<std::size_t>(alpha.cols()))
    throw Error(Errc::dimension_mismatch, "one eigenvalue list per factor is required");
  const Index left_order = left.vectors.cols();
  const Index right_order = right.vectors.cols();
  std::vector<Complex> values;
  values.reserve(static_cast<std::size_t>(left_order * right_order));
  for (Index s = 0; s < left_order; ++s) {
    for (Index t = 0; t < right_order; ++t) {
      Complex nu = 0.0;
      for (Index i = 0; i < alpha.rows(); ++i)
        for (Index j = 0; j < alpha.cols(); ++j)
          nu += alpha(i, j) * left.values[i][s] * right.values[j][t];
      values.push_back(nu);
    }
  }
  return Spectrum::from_values(values, radius);
}

template <ScalarDomain Scalar>
ProductSpec<Complex> to_complex(const ProductSpec<Scalar>& spec) {
  if constexpr (is_exact_v<Scalar>) {
    std::vector<ComplexMatrix> left;
    std::vector<ComplexMatrix> right;
    for (const auto& m : spec.left_factors()) left.push_back(to_complex(m));
    for (const auto& m : spec.right_factors()) right.push_back(to_complex(m));
    return {std::move(left), std::move(right), to_complex(spec.coefficients())};
  } else {
    return spec;
  }
}

template <ScalarDomain Scalar>
Spectrum product_spectrum(const ProductSpec<Scalar>& spec, const EigenOptions& options) {
  const ProductSpec<Complex> complex_spec = to_complex(spec);
  const ConsolidatedBasis left = consolidate(complex_spec.left_factors(), options);
  const ConsolidatedBasis right = consolidate(complex_spec.right_factors(), options);
  return product_spectrum(complex_spec, left, right, options.cluster_radius);
}

Complex product_eigenvalue(ProductKind kind, Complex mu, Complex lambda, Complex lambda_tilde) {
  switch (kind) {
    case ProductKind::tensor: return mu * lambda;
    case ProductKind::cartesian: return mu + lambda;
    case ProductKind::normal: return mu + lambda + mu * lambda;
    case ProductKind::lexicographic: return mu * lambda_tilde + lambda;
  }
  throw Error(Errc::invalid_argument, "unknown product kind");
}

Complex unity_eigenvalue(const ComplexVector& g, double tol) {
  const Index n = g.size();
  if (n == 0) throw Error(Errc::invalid_argument, "empty vector");
  const Complex sum = g.sum();
  const double scale = std::max(1.0, max_abs(g));
  const Complex mean = sum / static_cast<double>(n);
  if (max_abs(g - ComplexVector::Constant(n, mean)) <= tol * scale && std::abs(mean) > tol)
    return {static_cast<double>(n), 0.0};
  if (std::abs(sum) <= tol * scale * static_cast<double>(n)) return 0.0;
  throw Error(Errc::hypothesis_unmet, "vector is neither parallel nor orthogonal to all-ones");
}

#define PERFECT_INSTANTIATE(S)                                                                   \
  template class ProductSpec<S>;                                                                 \
  template ProductSpec<S> named_product(ProductKind, const Matrix<S>&, const Matrix<S>&);        \
  template Matrix<S> build_product(const ProductSpec<S>&);                                       \
  template PerfectStructure<S> product_structures(const ProductSpec<S>&,                         \
                                                  std::span<const PerfectStructure<S>>,          \
                                                  std::span<const PerfectStructure<S>>, double); \
  template PerfectStructure<S> lexicographic_structure(const PerfectStructure<S>&,               \
                                                       const PerfectStructure<S>&, double);      \
  template Spectrum product_spectrum(const ProductSpec<S>&, const EigenOptions&);                \
  template ProductSpec<Complex> to_complex(const ProductSpec<S>&);

PERFECT_INSTANTIATE(Rational)
PERFECT_INSTANTIATE(Complex)

#undef PERFECT_INSTANTIATE

}  // namespace perfect
