#include "perfect/contraction.hpp"

#include <string>

namespace perfect {

namespace {

bool is_eigenpair(const ComplexMatrix& m, const ComplexVector& v, Complex value, double tol) {
  return max_abs(m * v - value * v) <= tol * std::max(1.0, max_abs(v));
}

void check_sizes(const ComplexVector& h, const ComplexVector& g, Index m, Index n) {
  if (m < 1 || n < 1 || h.size() != m * n || g.size() != n)
    throw Error(Errc::dimension_mismatch,
                "contraction needs |h| = m*n and |g| = n (m = " + std::to_string(m) +
                    ", n = " + std::to_string(n) + ")");
}

}  // namespace

ComplexMatrix reshape_left_major(const ComplexVector& h, Index left_order, Index right_order) {
  if (h.size() != left_order * right_order)
    throw Error(Errc::dimension_mismatch, "vector length differs from m*n");
  return Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      h.data(), left_order, right_order);
}

ComplexVector contract(const ComplexVector& h, const ComplexVector& g, Index left_order,
                       Index right_order) {
  check_sizes(h, g, left_order, right_order);
  return reshape_left_major(h, left_order, right_order) * g;
}

ComplexVector contract(const ContractionInput& input) {
  return contract(input.h, input.g, input.left_order, input.right_order);
}

ContractionEigenvalues verify_contraction_theorem(const ContractionInput& input,
                                                  const ComplexMatrix& m1,
                                                  const ComplexMatrix& m2, double tol) {
  const Index m = input.left_order;
  const Index n = input.right_order;
  check_sizes(input.h, input.g, m, n);
  if (input.product.rows() != m * n || input.product.cols() != m * n || m1.rows() != m ||
      m1.cols() != m || m2.rows() != m || m2.cols() != m)
    throw Error(Errc::dimension_mismatch, "product or left factor orders differ from m, n");
  if (std::abs(input.lambda_second) <= tol)
    throw Error(Errc::excluded_eigenvalue, "lambda'' must be nonzero");
  if (!is_eigenpair(input.product, input.h, input.nu, tol))
    throw Error(Errc::hypothesis_unmet, "h is not an eigenvector of the product for nu");

  ContractionEigenvalues out;
  out.f = contract(input);
  if (max_abs(out.f) <= tol) throw Error(Errc::zero_contraction, "contraction H g vanished");

  out.mu_first = out.f.dot(m1 * out.f) / out.f.squaredNorm();
  if (!is_eigenpair(m1, out.f, out.mu_first, tol))
    throw Error(Errc::hypothesis_unmet, "contracted vector is not an eigenvector of M1");

  out.mu_second = (input.nu - input.lambda_first * out.mu_first) / input.lambda_second;
  if (!is_eigenpair(m2, out.f, out.mu_second, tol))
    throw Error(Errc::numerical_failure, "M2 f differs from mu'' f beyond tolerance");
  return out;
}

NamedContraction contract_named(ProductKind kind, const Graph& left, const Graph& right,
                                const ComplexVector& h, Complex nu, const ComplexVector& g,
                                Complex lambda, double tol) {
  const Index m = left.order();
  const Index n = right.order();
  check_sizes(h, g, m, n);
  const ComplexMatrix left_adjacency = to_complex(left.adjacency());
  const ComplexMatrix right_adjacency = to_complex(right.adjacency());

  switch (kind) {
    case ProductKind::tensor:
      if (std::abs(lambda) <= tol)
        throw Error(Errc::excluded_eigenvalue, "tensor contraction needs lambda != 0");
      break;
    case ProductKind::normal:
      if (std::abs(lambda + 1.0) <= tol)
        throw Error(Errc::excluded_eigenvalue, "normal contraction needs lambda != -1");
      break;
    case ProductKind::lexicographic: {
      const std::optional<Rational> degree = is_regular(right);
      if (!degree) throw Error(Errc::not_regular, "lexicographic contraction needs a regular right factor");
      if (max_abs(g - ComplexVector::Ones(n)) > tol)
        throw Error(Errc::invalid_argument, "lexicographic contraction uses g = all-ones");
      if (std::abs(lambda - to_complex(*degree)) > tol)
        throw Error(Errc::hypothesis_unmet, "lambda must equal the degree of the right factor");
      break;
    }
    case ProductKind::cartesian:
      break;
  }

  const ComplexMatrix product = build_product(named_product(kind, left_adjacency, right_adjacency));
  if (!is_eigenpair(product, h, nu, tol))
    throw Error(Errc::hypothesis_unmet, "h is not an eigenvector of the product for nu");
  if (!is_eigenpair(right_adjacency, g, lambda, tol))
    throw Error(Errc::hypothesis_unmet, "g is not an eigenvector of the right factor for lambda");

  NamedContraction out;
  switch (kind) {
    case ProductKind::tensor: out.mu = nu / lambda; break;
    case ProductKind::cartesian: out.mu = nu - lambda; break;
    case ProductKind::normal: out.mu = (nu - lambda) / (1.0 + lambda); break;
    case ProductKind::lexicographic: out.mu = (nu - lambda) / static_cast<double>(n); break;
  }
  out.f = contract(h, g, m, n);
  if (max_abs(out.f) <= tol) {
    out.zero = true;
    return out;
  }
  out.residual = max_abs(left_adjacency * out.f - out.mu * out.f);
  if (out.residual > tol * std::max(1.0, max_abs(out.f)))
    throw Error(Errc::numerical_failure, "contracted vector misses the predicted eigenvalue");
  return out;
}

}  // namespace perfect
