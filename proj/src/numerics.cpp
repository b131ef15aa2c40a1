#include "perfect/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace perfect {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "invalid argument";
    case Errc::dimension_mismatch: return "dimension mismatch";
    case Errc::not_verified: return "structure does not satisfy MP = PS";
    case Errc::singular: return "singular matrix";
    case Errc::defective: return "defective (non-diagonalizable) matrix";
    case Errc::no_convergence: return "eigensolver did not converge";
    case Errc::not_invariant: return "column span is not invariant";
    case Errc::rank_deficient: return "structure matrix is rank deficient";
    case Errc::chaining_mismatch: return "chaining mismatch";
    case Errc::no_closed_form: return "no closed form known";
    case Errc::not_regular: return "graph is not regular";
    case Errc::not_connected: return "graph is not connected";
    case Errc::consolidation_failed: return "factors do not share an eigenbasis";
    case Errc::excluded_eigenvalue: return "excluded eigenvalue";
    case Errc::zero_contraction: return "zero contraction";
    case Errc::hypothesis_unmet: return "hypothesis unmet";
    case Errc::numerical_failure: return "numerical failure";
    case Errc::parse: return "parse error";
    case Errc::io: return "I/O error";
  }
  return "unknown error";
}

Rational make_rational(long long numerator, long long denominator) {
  if (denominator == 0) throw Error(Errc::invalid_argument, "zero denominator");
  return Rational(numerator) / Rational(denominator);
}

double to_double(const Rational& x) { return x.convert_to<double>(); }

Complex to_complex(const Rational& x) { return {to_double(x), 0.0}; }

ComplexMatrix to_complex(const RationalMatrix& m) {
  ComplexMatrix out(m.rows(), m.cols());
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) out(i, j) = to_complex(m(i, j));
  return out;
}

ComplexVector to_complex(const RationalVector& v) {
  ComplexVector out(v.size());
  for (Index i = 0; i < v.size(); ++i) out(i) = to_complex(v(i));
  return out;
}

RationalMatrix rref(const RationalMatrix& a, std::vector<Index>* pivots) {
  RationalMatrix r = a;
  if (pivots) pivots->clear();
  Index row = 0;
  for (Index col = 0; col < r.cols() && row < r.rows(); ++col) {
    Index pivot = row;
    while (pivot < r.rows() && r(pivot, col) == 0) ++pivot;
    if (pivot == r.rows()) continue;
    r.row(pivot).swap(r.row(row));
    const Rational lead = r(row, col);
    for (Index j = col; j < r.cols(); ++j) r(row, j) /= lead;
    for (Index i = 0; i < r.rows(); ++i) {
      if (i == row || r(i, col) == 0) continue;
      const Rational factor = r(i, col);
      for (Index j = col; j < r.cols(); ++j) r(i, j) -= factor * r(row, j);
    }
    if (pivots) pivots->push_back(col);
    ++row;
  }
  return r;
}

Index rank(const RationalMatrix& a) {
  std::vector<Index> pivots;
  rref(a, &pivots);
  return static_cast<Index>(pivots.size());
}

namespace {

double svd_threshold(const Eigen::VectorXd& singular, double tol) {
  const double top = singular.size() ? singular(0) : 0.0;
  return tol * std::max(1.0, top);
}

}  // namespace

Index rank(const ComplexMatrix& a, double tol) {
  if (a.size() == 0) return 0;
  Eigen::BDCSVD<ComplexMatrix> svd(a);
  const Eigen::VectorXd s = svd.singularValues();
  const double threshold = svd_threshold(s, tol);
  return static_cast<Index>((s.array() > threshold).count());
}

RationalMatrix nullspace(const RationalMatrix& a) {
  std::vector<Index> pivots;
  const RationalMatrix r = rref(a, &pivots);
  std::vector<bool> is_pivot(a.cols(), false);
  for (Index p : pivots) is_pivot[p] = true;
  std::vector<Index> free_columns;
  for (Index j = 0; j < a.cols(); ++j)
    if (!is_pivot[j]) free_columns.push_back(j);

  RationalMatrix basis = RationalMatrix::Zero(a.cols(), static_cast<Index>(free_columns.size()));
  for (std::size_t f = 0; f < free_columns.size(); ++f) {
    const Index free = free_columns[f];
    basis(free, f) = 1;
    for (std::size_t p = 0; p < pivots.size(); ++p) basis(pivots[p], f) = -r(p, free);
  }
  return basis;
}

ComplexMatrix nullspace(const ComplexMatrix& a, double tol) {
  if (a.cols() == 0) return ComplexMatrix(0, 0);
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd s = svd.singularValues();
  const double threshold = svd_threshold(s, tol);
  const Index significant = static_cast<Index>((s.array() > threshold).count());
  return svd.matrixV().rightCols(a.cols() - significant);
}

RationalMatrix inverse(const RationalMatrix& a) {
  if (a.rows() != a.cols()) throw Error(Errc::dimension_mismatch, "inverse needs a square matrix");
  const Index n = a.rows();
  RationalMatrix augmented(n, 2 * n);
  augmented << a, RationalMatrix::Identity(n, n);
  std::vector<Index> pivots;
  const RationalMatrix r = rref(augmented, &pivots);
  if (static_cast<Index>(pivots.size()) < n || pivots[n - 1] >= n)
    throw Error(Errc::singular, "matrix is singular");
  return r.rightCols(n);
}

ComplexMatrix inverse(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols()) throw Error(Errc::dimension_mismatch, "inverse needs a square matrix");
  if (rank(a, tol) < a.rows()) throw Error(Errc::singular, "matrix is singular");
  return a.fullPivLu().inverse();
}

double determinant_magnitude(const ComplexMatrix& a) { return std::abs(a.determinant()); }

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tol * std::max(1.0, max_abs(m));
}

ComplexVector normalize_eigenvector(const ComplexVector& v, double threshold) {
  const double norm = v.norm();
  if (norm == 0.0) return v;
  ComplexVector out = v / norm;
  for (Index i = 0; i < out.size(); ++i) {
    if (std::abs(out(i)) > threshold) {
      if (out(i).real() < 0.0) out = -out;
      break;
    }
  }
  return out;
}

std::vector<std::vector<std::size_t>> cluster_values(std::span<const Complex> values,
                                                     double radius) {
  const std::size_t n = values.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(values[i] - values[j]) <= radius) parent[find(i)] = find(j);

  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::ptrdiff_t> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<std::ptrdiff_t>(groups.size());
      groups.emplace_back();
    }
    groups[slot[root]].push_back(i);
  }

  auto mean = [&](const std::vector<std::size_t>& g) {
    Complex sum = 0.0;
    for (std::size_t i : g) sum += values[i];
    return sum / static_cast<double>(g.size());
  };
  std::vector<Complex> means;
  means.reserve(groups.size());
  for (const auto& g : groups) means.push_back(mean(g));
  std::vector<std::size_t> order(groups.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (means[a].real() != means[b].real()) return means[a].real() < means[b].real();
    return means[a].imag() < means[b].imag();
  });
  std::vector<std::vector<std::size_t>> sorted;
  sorted.reserve(groups.size());
  for (std::size_t i : order) sorted.push_back(std::move(groups[i]));
  return sorted;
}

namespace {

Complex snap(Complex z, double threshold) {
  if (std::abs(z.imag()) <= threshold) z.imag(0.0);
  return z;
}

double residual_of(const ComplexMatrix& m, const EigenSystem& es) {
  double worst = 0.0;
  for (Index i = 0; i < es.vectors.cols(); ++i) {
    const ComplexVector r = m * es.vectors.col(i) - es.values[i] * es.vectors.col(i);
    worst = std::max(worst, max_abs(r));
  }
  return worst;
}

// Assembles the system cluster by cluster: each cluster's value is the mean
// of its members, and vectors_for(cluster, value) supplies its eigenvectors.
template <typename VectorsFor>
EigenSystem assemble(const ComplexMatrix& m, const std::vector<Complex>& raw,
                     const EigenOptions& options, VectorsFor&& vectors_for) {
  const Index n = m.rows();
  EigenSystem es;
  es.vectors.resize(n, n);
  es.values.reserve(n);
  Index column = 0;
  for (const auto& cluster : cluster_values(raw, options.cluster_radius)) {
    Complex value = 0.0;
    for (std::size_t i : cluster) value += raw[i];
    value = snap(value / static_cast<double>(cluster.size()), options.tolerance * 1e-3);
    const ComplexMatrix block = vectors_for(cluster, value);
    for (Index c = 0; c < block.cols(); ++c) {
      es.vectors.col(column++) = normalize_eigenvector(block.col(c), options.tolerance);
      es.values.push_back(value);
    }
  }
  es.residual = residual_of(m, es);
  return es;
}

EigenSystem eig_hermitian(const ComplexMatrix& m, const EigenOptions& options) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw Error(Errc::no_convergence, "self-adjoint eigensolver failed");
  std::vector<Complex> raw;
  for (Index i = 0; i < m.rows(); ++i) raw.emplace_back(solver.eigenvalues()(i), 0.0);
  const ComplexMatrix& vectors = solver.eigenvectors();
  return assemble(m, raw, options, [&](const std::vector<std::size_t>& cluster, Complex) {
    ComplexMatrix block(m.rows(), static_cast<Index>(cluster.size()));
    for (std::size_t c = 0; c < cluster.size(); ++c) block.col(c) = vectors.col(cluster[c]);
    return block;
  });
}

EigenSystem eig_general(const ComplexMatrix& m, const EigenOptions& options) {
  Eigen::ComplexEigenSolver<ComplexMatrix> solver;
  if (options.max_iterations > 0) solver.setMaxIterations(options.max_iterations);
  solver.compute(m, true);
  if (solver.info() != Eigen::Success)
    throw Error(Errc::no_convergence, "complex eigensolver did not converge");
  std::vector<Complex> raw(solver.eigenvalues().data(),
                           solver.eigenvalues().data() + m.rows());
  const double scale = std::max(1.0, m.norm());
  const Index n = m.rows();

  EigenSystem es = assemble(m, raw, options, [&](const std::vector<std::size_t>& cluster,
                                                 Complex value) -> ComplexMatrix {
    if (cluster.size() == 1) return solver.eigenvectors().col(cluster.front());
    // Repeated eigenvalue: take the eigenspace directly as the numerical
    // kernel of M - value*I and demand its dimension match the cluster size.
    const Index want = static_cast<Index>(cluster.size());
    const ComplexMatrix shifted = m - value * ComplexMatrix::Identity(n, n);
    Eigen::JacobiSVD<ComplexMatrix> svd(shifted, Eigen::ComputeFullV);
    const Eigen::VectorXd s = svd.singularValues();
    if (s(n - want) > options.cluster_radius * scale)
      throw Error(Errc::defective, "eigenvalue cluster has a deficient eigenspace");
    return svd.matrixV().rightCols(want);
  });

  // Nearly parallel eigenvectors betray a defective matrix whose eigenvalues
  // split beyond the cluster radius.
  Eigen::JacobiSVD<ComplexMatrix> basis(es.vectors);
  if (basis.singularValues()(n - 1) < options.cluster_radius)
    throw Error(Errc::defective, "eigenvectors do not span the space");
  return es;
}

}  // namespace

EigenSystem eig(const ComplexMatrix& m, const EigenOptions& options) {
  if (m.rows() != m.cols()) throw Error(Errc::dimension_mismatch, "eig needs a square matrix");
  if (m.rows() == 0) return {};
  EigenSystem es = is_hermitian(m, options.tolerance * 1e-3) ? eig_hermitian(m, options)
                                                             : eig_general(m, options);
  if (!(es.residual <= options.tolerance))
    throw Error(Errc::no_convergence, "eigen residual above tolerance");
  return es;
}

EigenSystem eig(const RationalMatrix& m, const EigenOptions& options) {
  return eig(to_complex(m), options);
}

bool is_diagonalizable(const ComplexMatrix& m, const EigenOptions& options) {
  if (m.rows() != m.cols()) throw Error(Errc::dimension_mismatch, "square matrix expected");
  if (is_hermitian(m, options.tolerance * 1e-3)) return true;
  try {
    eig(m, options);
    return true;
  } catch (const Error& e) {
    if (e.code() == Errc::defective) return false;
    throw;
  }
}

bool is_diagonalizable(const RationalMatrix& m, const EigenOptions& options) {
  return is_diagonalizable(to_complex(m), options);
}

}  // namespace perfect
