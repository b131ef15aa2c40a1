#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "perfect/graphs.hpp"
#include "perfect/numerics.hpp"
#include "perfect/products.hpp"

namespace perfect {

/// Surjective map from vertices 0..n-1 onto colors 0..k-1. (Files use 1..k.)
class Coloring {
 public:
  /// Throws Errc::invalid_argument on negative colors or a gap in 0..k-1.
  explicit Coloring(std::vector<int> colors);

  const std::vector<int>& colors() const { return colors_; }
  int color(Index v) const { return colors_[static_cast<std::size_t>(v)]; }
  Index order() const { return static_cast<Index>(colors_.size()); }
  int count() const { return k_; }
  const std::vector<Index>& class_sizes() const { return class_sizes_; }

  /// n x k 0/1 matrix with a single one per row.
  RationalMatrix indicator() const;

  /// Colors renamed in order of first appearance; the lexicographically
  /// smallest string among all renamings.
  Coloring canonical() const;

  bool operator==(const Coloring&) const = default;

 private:
  std::vector<int> colors_;
  int k_ = 0;
  std::vector<Index> class_sizes_;
};

/// Nonnegative n x k weights with unit row sums.
class FractionalColoring {
 public:
  /// Throws Errc::invalid_argument on a negative entry or a row sum other than 1.
  explicit FractionalColoring(RationalMatrix weights);
  const RationalMatrix& weights() const { return weights_; }

 private:
  RationalMatrix weights_;
};

/// Parameter matrix when every color-i vertex sees the same weighted count of
/// each color among its neighbors; s_ij is that count. The result is
/// cross-checked against M P = P S.
std::optional<RationalMatrix> verify_coloring(const Graph& g, const Coloring& c);

/// J diag(n_1, ..., n_k) - I: parameters of any coloring of K_n with those class sizes.
RationalMatrix complete_graph_parameters(const std::vector<Index>& class_sizes);

/// phi maps vertices of g onto vertices of h; true iff the induced coloring is
/// perfect with parameter matrix equal to h's adjacency. Entries above 1 can
/// only match when h is a multigraph. Throws Errc::invalid_argument on a
/// non-surjective phi.
bool check_covering(const Graph& g, const Graph& h, const std::vector<int>& phi);

std::optional<RationalMatrix> verify_fractional(const Graph& g, const FractionalColoring& w);

struct ProductColoring {
  Graph graph;
  Coloring coloring;
  RationalMatrix parameters;
};

/// Coloring with indicator P (x) R of the named product; color of (v, u) is
/// c(v) * k2 + d(u). Parameters:
///   tensor S (x) T, cartesian I (x) T + S (x) I, normal S (x) I + I (x) T + S (x) T,
///   lexicographic S (x) (J diag(l_1..l_k2)) + I (x) T.
/// Throws Errc::not_verified when a factor coloring is not perfect.
ProductColoring product_coloring(ProductKind kind, const Graph& left, const Coloring& left_coloring,
                                 const Graph& right, const Coloring& right_coloring);

/// For perfect colorings P, R of a connected r-regular graph whose parameter
/// spectra meet only in r: every <P_i, R_j> equals l_i m_j / n, compared
/// exactly. Throws Errc::hypothesis_unmet when the spectra share another
/// eigenvalue, Errc::not_regular / Errc::not_connected / Errc::not_verified
/// on the other preconditions.
bool orthogonality_check(const Graph& g, const Coloring& p, const Coloring& r,
                         const EigenOptions& options = {});

struct CensusEntry {
  Coloring coloring;
  RationalMatrix parameters;
};

struct CensusResult {
  std::vector<CensusEntry> entries;
  bool partial = false;
  std::uint64_t evaluations = 0;
};

inline constexpr std::uint64_t kDefaultCensusBudget = 100'000'000;

/// Every perfect k-coloring of g up to renaming of colors, in lexicographic
/// order of the canonical color strings. Backtracks vertex by vertex and cuts
/// a branch as soon as two same-colored vertices provably see different
/// color counts. Stops with `partial` set after `budget` color assignments.
/// Requires a nonnegative integer adjacency matrix.
CensusResult census(const Graph& g, int k, std::uint64_t budget = kDefaultCensusBudget);

/// Canonical representative of S under simultaneous row/column permutation
/// (lexicographically smallest entry sequence); used to group census output.
RationalMatrix canonical_parameters(const RationalMatrix& s);

}  // namespace perfect
