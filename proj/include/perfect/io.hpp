#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "perfect/colorings.hpp"
#include "perfect/graphs.hpp"
#include "perfect/numerics.hpp"

namespace perfect::io {

/// An exactly parsed complex scalar re + im i.
struct ExactScalar {
  Rational re;
  Rational im;
};

/// A matrix read from text, kept exact as separate real and imaginary parts.
struct ExactMatrix {
  RationalMatrix re;
  RationalMatrix im;

  bool is_real() const;
  ComplexMatrix to_complex() const;
};

/// "3", "-1/2", "0.25", "1e-3", "2+3i", "-i", "1/2-3/4i". Decimals are exact.
/// Throws Errc::parse.
Rational parse_rational(std::string_view token);
ExactScalar parse_scalar(std::string_view token);

/// "3", "-1/2" and "2+3i" style; reals print as exact rationals.
std::string format(const Rational& x);
std::string format(const ExactScalar& x);
/// Shortest round-trippable decimal for each part; imaginary parts below
/// `zero` in magnitude are dropped.
std::string format(const Complex& x, double zero = 0.0);

// Line-oriented readers. Blank lines and '#' comments are skipped; every
// parse error carries "<source>:<line>: ".

/// "matrix n" then n rows of n scalars, or "edges n m" then m lines "u v"
/// (1-based, u != v, no repeats) for a simple undirected graph.
ExactMatrix read_matrix_text(std::istream& in, const std::string& source);
/// Same as read_matrix_text but requires real entries.
Graph read_graph(std::istream& in, const std::string& source);
Graph read_graph_file(const std::string& path);
ExactMatrix read_matrix_file(const std::string& path);

/// A sequence of "matrix n" blocks, or "identity n" / "unity n" lines.
std::vector<ExactMatrix> read_factor_list_file(const std::string& path);

/// Either a color per vertex (1-based integers, any whitespace layout) or,
/// when a token contains '.' or '/', when the first line is "fractional", or
/// when there are several lines of equal width above one, n rows of k weights.
struct ColoringFile {
  std::optional<Coloring> coloring;
  std::optional<FractionalColoring> fractional;
};
ColoringFile read_coloring_file(const std::string& path);

/// "structure n k" then n rows of k scalars (P), optionally followed by
/// "parameters k" and k rows (S).
struct StructureFile {
  ExactMatrix structure;
  std::optional<ExactMatrix> parameters;
};
StructureFile read_structure_file(const std::string& path);

/// Whitespace-separated scalars, with an optional "vector n" header.
std::vector<ExactScalar> read_vector_file(const std::string& path);

/// "grid m l" then m rows of l scalars.
ExactMatrix read_grid_file(const std::string& path);

void write_matrix(std::ostream& out, const RationalMatrix& m, std::string_view header = "matrix");
void write_graph(std::ostream& out, const Graph& g);
void write_coloring(std::ostream& out, const Coloring& c);
void write_graph_file(const std::string& path, const Graph& g);
void write_coloring_file(const std::string& path, const Coloring& c);
void write_matrix_file(const std::string& path, const RationalMatrix& m);

}  // namespace perfect::io
