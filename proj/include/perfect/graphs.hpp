#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "perfect/numerics.hpp"
#include "perfect/spectrum.hpp"

namespace perfect {

enum class FamilyKind {
  complete,               // K_n
  matching,               // M_n on 2n vertices
  complete_bipartite,     // K_{n,n}
  complete_multipartite,  // K_{n,...,n}: k parts of size n, params {k, n}
  hamming,                // H(n, q), params {n, q}
  path,                   // P_n
  cycle,                  // C_n, n >= 3
  grid,                   // Gr_{m,n} = P_m x P_n (Cartesian)
  torus,                  // Tr_{m,n} = C_m x C_n
  prism,                  // Pr_n = C_n x K_2
  ladder,                 // L_n = P_n x K_2
  double_graph,           // D(G) = G (x) J_2
  bipartite_double,       // BD(G) = G (x) K_2
};

/// Family tag with parameters. The two doubling operations carry the tag of
/// the graph they double in `base`.
struct Family {
  FamilyKind kind;
  std::vector<int> params;
  std::shared_ptr<const Family> base;

  static Family complete(int n) { return {FamilyKind::complete, {n}, nullptr}; }
  static Family matching(int n) { return {FamilyKind::matching, {n}, nullptr}; }
  static Family complete_bipartite(int n) { return {FamilyKind::complete_bipartite, {n}, nullptr}; }
  static Family complete_multipartite(int parts, int part_size) {
    return {FamilyKind::complete_multipartite, {parts, part_size}, nullptr};
  }
  static Family hamming(int n, int q) { return {FamilyKind::hamming, {n, q}, nullptr}; }
  static Family path(int n) { return {FamilyKind::path, {n}, nullptr}; }
  static Family cycle(int n) { return {FamilyKind::cycle, {n}, nullptr}; }
  static Family grid(int m, int n) { return {FamilyKind::grid, {m, n}, nullptr}; }
  static Family torus(int m, int n) { return {FamilyKind::torus, {m, n}, nullptr}; }
  static Family prism(int n) { return {FamilyKind::prism, {n}, nullptr}; }
  static Family ladder(int n) { return {FamilyKind::ladder, {n}, nullptr}; }
  static Family double_of(Family g) {
    return {FamilyKind::double_graph, {}, std::make_shared<const Family>(std::move(g))};
  }
  static Family bipartite_double_of(Family g) {
    return {FamilyKind::bipartite_double, {}, std::make_shared<const Family>(std::move(g))};
  }

  /// e.g. "cycle(5)", "double(complete(3))".
  std::string name() const;
  Index order() const;
};

/// Graph on vertices 0..n-1 given by a rational adjacency matrix. `kind` is
/// inferred: simple (symmetric 0/1, zero diagonal), multigraph (symmetric,
/// nonnegative integers) or general (anything else, including digraphs and
/// weighted matrices).
class Graph {
 public:
  enum class Kind { simple, multigraph, general };

  explicit Graph(RationalMatrix adjacency);
  /// Throws Errc::invalid_argument unless the family regenerates `adjacency`.
  Graph(RationalMatrix adjacency, Family family);

  const RationalMatrix& adjacency() const { return adjacency_; }
  Index order() const { return adjacency_.rows(); }
  Kind kind() const { return kind_; }
  bool directed() const { return directed_; }
  const std::optional<Family>& family() const { return family_; }

 private:
  struct Trusted {};
  Graph(RationalMatrix adjacency, Family family, Trusted);
  friend Graph make_family(const Family& family);

  RationalMatrix adjacency_;
  std::optional<Family> family_;
  Kind kind_ = Kind::general;
  bool directed_ = false;
};

/// Builds a family member; product-defined families go through the product
/// constructions. Hamming vertices are words over {0..q-1} in lexicographic
/// order, so H(n, q) = K_q x H(n-1, q) holds entry for entry.
Graph make_family(const Family& family);

/// Spectrum from the closed-form formula; rational values carry `exact`,
/// trigonometric values keep their generating (i) or (i, j) indices (1-based).
Spectrum closed_form_spectrum(const Family& family);
/// Throws Errc::no_closed_form when the graph carries no family tag.
Spectrum closed_form_spectrum(const Graph& g);

Spectrum numeric_spectrum(const Graph& g, const EigenOptions& options = {});

/// sp(J - M - I) for a connected r-regular graph: {-lambda-1 : lambda in sp(G)}
/// with one copy of r replaced by n - r - 1. Uses the closed form when known.
Spectrum complement_spectrum(const Graph& g, const EigenOptions& options = {});

RationalMatrix complement_adjacency(const Graph& g);

/// Degree when the adjacency is symmetric with equal row sums.
std::optional<Rational> is_regular(const Graph& g);

/// Breadth-first reachability from vertex 0 over nonzero entries.
bool is_connected(const Graph& g);

}  // namespace perfect
