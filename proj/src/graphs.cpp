#include "perfect/graphs.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <queue>
#include <string>

#include "perfect/products.hpp"

namespace perfect {

namespace {

bool is_symmetric(const RationalMatrix& m) { return m.rows() == m.cols() && m == m.transpose(); }

Graph::Kind infer_kind(const RationalMatrix& m) {
  if (!is_symmetric(m)) return Graph::Kind::general;
  bool zero_one = true;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      const Rational& x = m(i, j);
      if (x < 0 || denominator(x) != 1) return Graph::Kind::general;
      if (x > 1 || (i == j && x != 0)) zero_one = false;
    }
  }
  return zero_one ? Graph::Kind::simple : Graph::Kind::multigraph;
}

void require(bool ok, const Family& f, const char* what) {
  if (!ok) throw Error(Errc::invalid_argument, f.name() + ": " + what);
}

RationalMatrix path_adjacency(Index n) {
  RationalMatrix m = RationalMatrix::Zero(n, n);
  for (Index i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = 1;
  return m;
}

RationalMatrix cycle_adjacency(Index n) {
  RationalMatrix m = path_adjacency(n);
  m(0, n - 1) = m(n - 1, 0) = 1;
  return m;
}

RationalMatrix complete_adjacency(Index n) {
  return unity<Rational>(n) - identity<Rational>(n);
}

RationalMatrix product_adjacency(ProductKind kind, const RationalMatrix& left,
                                 const RationalMatrix& right) {
  return build_product(named_product(kind, left, right));
}

RationalMatrix family_adjacency(const Family& f) {
  const auto& p = f.params;
  auto expect = [&](std::size_t count) {
    require(p.size() == count, f, "wrong number of parameters");
    for (int v : p) require(v >= 1, f, "parameters must be >= 1");
  };
  const RationalMatrix edge = complete_adjacency(2);
  switch (f.kind) {
    case FamilyKind::complete:
      expect(1);
      return complete_adjacency(p[0]);
    case FamilyKind::matching:
      expect(1);
      return product_adjacency(ProductKind::tensor, identity<Rational>(p[0]), edge);
    case FamilyKind::complete_bipartite:
      expect(1);
      return product_adjacency(ProductKind::tensor, edge, unity<Rational>(p[0]));
    case FamilyKind::complete_multipartite:
      expect(2);
      return product_adjacency(ProductKind::tensor, complete_adjacency(p[0]),
                               unity<Rational>(p[1]));
    case FamilyKind::hamming: {
      expect(2);
      const RationalMatrix letter = complete_adjacency(p[1]);
      RationalMatrix m = letter;
      for (int i = 1; i < p[0]; ++i) m = product_adjacency(ProductKind::cartesian, letter, m);
      return m;
    }
    case FamilyKind::path:
      expect(1);
      return path_adjacency(p[0]);
    case FamilyKind::cycle:
      expect(1);
      require(p[0] >= 3, f, "cycles need at least 3 vertices");
      return cycle_adjacency(p[0]);
    case FamilyKind::grid:
      expect(2);
      return product_adjacency(ProductKind::cartesian, path_adjacency(p[0]), path_adjacency(p[1]));
    case FamilyKind::torus:
      expect(2);
      require(p[0] >= 3 && p[1] >= 3, f, "torus cycles need at least 3 vertices");
      return product_adjacency(ProductKind::cartesian, cycle_adjacency(p[0]),
                               cycle_adjacency(p[1]));
    case FamilyKind::prism:
      expect(1);
      require(p[0] >= 3, f, "prisms need a cycle of at least 3 vertices");
      return product_adjacency(ProductKind::cartesian, cycle_adjacency(p[0]), edge);
    case FamilyKind::ladder:
      expect(1);
      return product_adjacency(ProductKind::cartesian, path_adjacency(p[0]), edge);
    case FamilyKind::double_graph:
      require(f.base != nullptr, f, "missing base graph");
      return product_adjacency(ProductKind::tensor, family_adjacency(*f.base),
                               unity<Rational>(2));
    case FamilyKind::bipartite_double:
      require(f.base != nullptr, f, "missing base graph");
      return product_adjacency(ProductKind::tensor, family_adjacency(*f.base), edge);
  }
  throw Error(Errc::invalid_argument, "unknown family");
}

using Term = Spectrum::Term;

Term exact_term(Rational value, std::vector<int> source = {}) {
  return {to_complex(value), std::move(value), std::move(source)};
}

// 2 cos(pi * num / den); exact when the angle makes the value an integer.
Term two_cos_pi(long long num, long long den, std::vector<int> source) {
  const long long g = std::gcd(num, den);
  long long a = num / g;
  long long b = den / g;
  if (b <= 3) {
    a %= 2 * b;  // angle a/b in [0, 2)
    const Rational cos_values[4][6] = {
        {0, 0, 0, 0, 0, 0},
        {2, -2, 0, 0, 0, 0},                        // a/1
        {2, 0, -2, 0, 0, 0},                        // a/2
        {2, 1, -1, -2, -1, 1},                      // a/3
    };
    return exact_term(cos_values[b][a], std::move(source));
  }
  const double value = 2.0 * std::cos(std::numbers::pi * static_cast<double>(num) /
                                      static_cast<double>(den));
  return {Complex(value, 0.0), std::nullopt, std::move(source)};
}

Term add_terms(const Term& a, const Term& b, std::vector<int> source) {
  if (a.exact && b.exact) return exact_term(*a.exact + *b.exact, std::move(source));
  return {a.value + b.value, std::nullopt, std::move(source)};
}

Term scale_term(const Term& a, long long factor) {
  if (a.exact) return exact_term(*a.exact * factor, a.source);
  return {a.value * static_cast<double>(factor), std::nullopt, a.source};
}

Term shift_term(const Term& a, long long by) {
  if (a.exact) return exact_term(*a.exact + by, a.source);
  return {a.value + static_cast<double>(by), std::nullopt, a.source};
}

void repeat(std::vector<Term>& out, const Term& t, long long times) {
  for (long long i = 0; i < times; ++i) out.push_back(t);
}

std::vector<Term> path_terms(int n) {
  std::vector<Term> out;
  for (int i = 1; i <= n; ++i) out.push_back(two_cos_pi(i, n + 1, {i}));
  return out;
}

std::vector<Term> cycle_terms(int n) {
  std::vector<Term> out;
  for (int i = 1; i <= n; ++i) out.push_back(two_cos_pi(2LL * i, n, {i}));
  return out;
}

std::vector<Term> sum_terms(const std::vector<Term>& first, const std::vector<Term>& second) {
  std::vector<Term> out;
  for (std::size_t i = 0; i < first.size(); ++i)
    for (std::size_t j = 0; j < second.size(); ++j)
      out.push_back(add_terms(first[i], second[j],
                              {static_cast<int>(i) + 1, static_cast<int>(j) + 1}));
  return out;
}

long long binomial(int n, int k) {
  long long out = 1;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

long long power(long long base, int exponent) {
  long long out = 1;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

std::vector<Term> closed_form_terms(const Family& f) {
  family_adjacency(f);  // validates parameters
  const auto& p = f.params;
  std::vector<Term> out;
  switch (f.kind) {
    case FamilyKind::complete:
      repeat(out, exact_term(-1), p[0] - 1);
      out.push_back(exact_term(p[0] - 1));
      break;
    case FamilyKind::matching:
      repeat(out, exact_term(-1), p[0]);
      repeat(out, exact_term(1), p[0]);
      break;
    case FamilyKind::complete_bipartite:
      out.push_back(exact_term(-p[0]));
      repeat(out, exact_term(0), 2LL * p[0] - 2);
      out.push_back(exact_term(p[0]));
      break;
    case FamilyKind::complete_multipartite: {
      const int parts = p[0];
      const int size = p[1];
      repeat(out, exact_term(-size), parts - 1);
      repeat(out, exact_term(0), static_cast<long long>(parts) * (size - 1));
      out.push_back(exact_term(static_cast<long long>(size) * (parts - 1)));
      break;
    }
    case FamilyKind::hamming: {
      const int n = p[0];
      const int q = p[1];
      for (int i = 0; i <= n; ++i)
        repeat(out, exact_term(static_cast<long long>(n) * (q - 1) - static_cast<long long>(q) * i, {i}),
               binomial(n, i) * power(q - 1, i));
      break;
    }
    case FamilyKind::path:
      out = path_terms(p[0]);
      break;
    case FamilyKind::cycle:
      out = cycle_terms(p[0]);
      break;
    case FamilyKind::grid:
      out = sum_terms(path_terms(p[0]), path_terms(p[1]));
      break;
    case FamilyKind::torus:
      out = sum_terms(cycle_terms(p[0]), cycle_terms(p[1]));
      break;
    case FamilyKind::prism:
      out = sum_terms(cycle_terms(p[0]), {exact_term(-1), exact_term(1)});
      break;
    case FamilyKind::ladder:
      out = sum_terms(path_terms(p[0]), {exact_term(-1), exact_term(1)});
      break;
    case FamilyKind::double_graph: {
      const std::vector<Term> base = closed_form_terms(*f.base);
      repeat(out, exact_term(0), static_cast<long long>(base.size()));
      for (const Term& t : base) out.push_back(scale_term(t, 2));
      break;
    }
    case FamilyKind::bipartite_double: {
      const std::vector<Term> base = closed_form_terms(*f.base);
      for (const Term& t : base) out.push_back(t);
      for (const Term& t : base) out.push_back(scale_term(t, -1));
      break;
    }
  }
  return out;
}

}  // namespace

std::string Family::name() const {
  switch (kind) {
    case FamilyKind::double_graph:
      return "double(" + (base ? base->name() : std::string("?")) + ")";
    case FamilyKind::bipartite_double:
      return "bipartite_double(" + (base ? base->name() : std::string("?")) + ")";
    default:
      break;
  }
  static const char* const names[] = {"complete", "matching", "complete_bipartite",
                                      "complete_multipartite", "hamming", "path", "cycle",
                                      "grid", "torus", "prism", "ladder"};
  std::string out = names[static_cast<int>(kind)];
  out += "(";
  for (std::size_t i = 0; i < params.size(); ++i) out += (i ? "," : "") + std::to_string(params[i]);
  return out + ")";
}

Index Family::order() const { return family_adjacency(*this).rows(); }

Graph::Graph(RationalMatrix adjacency) : adjacency_(std::move(adjacency)) {
  if (adjacency_.rows() != adjacency_.cols())
    throw Error(Errc::dimension_mismatch, "adjacency matrix must be square");
  if (adjacency_.rows() < 1) throw Error(Errc::invalid_argument, "graph needs a vertex");
  kind_ = infer_kind(adjacency_);
  directed_ = !is_symmetric(adjacency_);
}

Graph::Graph(RationalMatrix adjacency, Family family) : Graph(std::move(adjacency)) {
  const RationalMatrix expected = family_adjacency(family);
  if (expected.rows() != adjacency_.rows() || expected != adjacency_)
    throw Error(Errc::invalid_argument, "adjacency does not match family " + family.name());
  family_ = std::move(family);
}

Graph::Graph(RationalMatrix adjacency, Family family, Trusted) : Graph(std::move(adjacency)) {
  family_ = std::move(family);
}

Graph make_family(const Family& family) {
  return Graph(family_adjacency(family), family, Graph::Trusted{});
}

Spectrum closed_form_spectrum(const Family& family) {
  return Spectrum::from_terms(closed_form_terms(family));
}

Spectrum closed_form_spectrum(const Graph& g) {
  if (!g.family()) throw Error(Errc::no_closed_form, "graph carries no family tag");
  return closed_form_spectrum(*g.family());
}

Spectrum numeric_spectrum(const Graph& g, const EigenOptions& options) {
  return Spectrum::from_eigen(eig(g.adjacency(), options), options.cluster_radius);
}

RationalMatrix complement_adjacency(const Graph& g) {
  const Index n = g.order();
  return unity<Rational>(n) - g.adjacency() - identity<Rational>(n);
}

Spectrum complement_spectrum(const Graph& g, const EigenOptions& options) {
  const std::optional<Rational> degree = is_regular(g);
  if (!degree) throw Error(Errc::not_regular, "complement spectrum needs a regular graph");
  if (!is_connected(g)) throw Error(Errc::not_connected, "complement spectrum needs a connected graph");

  const Spectrum base = g.family() ? closed_form_spectrum(g) : numeric_spectrum(g, options);
  const Complex r = to_complex(*degree);
  std::vector<Spectrum::Term> terms;
  bool removed = false;
  for (const auto& e : base.entries()) {
    Index copies = e.multiplicity;
    if (!removed && std::abs(e.value - r) <= options.cluster_radius) {
      --copies;
      removed = true;
    }
    Spectrum::Term t;
    if (e.exact) {
      t = exact_term(-*e.exact - 1);
    } else {
      t = {-e.value - 1.0, std::nullopt, {}};
    }
    for (Index i = 0; i < copies; ++i) terms.push_back(t);
  }
  if (!removed) throw Error(Errc::numerical_failure, "degree not found in the spectrum");
  terms.push_back(exact_term(Rational(static_cast<long long>(g.order())) - *degree - 1));
  return Spectrum::from_terms(terms, options.cluster_radius);
}

std::optional<Rational> is_regular(const Graph& g) {
  const RationalMatrix& m = g.adjacency();
  if (!is_symmetric(m)) return std::nullopt;
  const Rational degree = m.row(0).sum();
  for (Index i = 1; i < m.rows(); ++i)
    if (m.row(i).sum() != degree) return std::nullopt;
  return degree;
}

bool is_connected(const Graph& g) {
  const RationalMatrix& m = g.adjacency();
  const Index n = m.rows();
  std::vector<bool> seen(n, false);
  std::queue<Index> frontier;
  frontier.push(0);
  seen[0] = true;
  Index reached = 1;
  while (!frontier.empty()) {
    const Index v = frontier.front();
    frontier.pop();
    for (Index w = 0; w < n; ++w) {
      if (seen[w] || (m(v, w) == 0 && m(w, v) == 0)) continue;
      seen[w] = true;
      ++reached;
      frontier.push(w);
    }
  }
  return reached == n;
}

}  // namespace perfect
