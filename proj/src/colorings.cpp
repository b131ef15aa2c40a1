#include "perfect/colorings.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace perfect {

namespace {

std::vector<Index> sizes_of(const std::vector<int>& colors, int k) {
  std::vector<Index> sizes(static_cast<std::size_t>(k), 0);
  for (int c : colors) ++sizes[static_cast<std::size_t>(c)];
  return sizes;
}

RationalMatrix diagonal_of(const std::vector<Index>& sizes) {
  const Index k = static_cast<Index>(sizes.size());
  RationalMatrix d = RationalMatrix::Zero(k, k);
  for (Index i = 0; i < k; ++i) d(i, i) = Rational(sizes[static_cast<std::size_t>(i)]);
  return d;
}

RationalMatrix checked_parameters(const Graph& g, const Coloring& c, const char* what) {
  std::optional<RationalMatrix> s = verify_coloring(g, c);
  if (!s) throw Error(Errc::not_verified, std::string(what) + " coloring is not perfect");
  return *std::move(s);
}

std::vector<std::vector<long long>> integer_adjacency(const Graph& g) {
  const Index n = g.order();
  std::vector<std::vector<long long>> a(static_cast<std::size_t>(n),
                                        std::vector<long long>(static_cast<std::size_t>(n)));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const Rational& x = g.adjacency()(i, j);
      if (x < 0 || boost::multiprecision::denominator(x) != 1)
        throw Error(Errc::invalid_argument, "census needs a nonnegative integer adjacency matrix");
      a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          boost::multiprecision::numerator(x).convert_to<long long>();
    }
  return a;
}

// Backtracking over vertices 0..n-1 in order. partial[v][j] counts the
// weighted color-j neighbors of v among colored vertices; ref[i] is the count
// vector of the first vertex of color i whose closed neighborhood is fully
// colored. Weights are nonnegative, so partial counts can only grow.
class CensusSearch {
 public:
  CensusSearch(const Graph& g, int k, std::uint64_t budget)
      : a_(integer_adjacency(g)),
        n_(static_cast<int>(g.order())),
        k_(k),
        budget_(budget),
        colors_(static_cast<std::size_t>(n_), -1),
        partial_(static_cast<std::size_t>(n_), std::vector<long long>(static_cast<std::size_t>(k), 0)),
        ref_(static_cast<std::size_t>(k)),
        completes_at_(static_cast<std::size_t>(n_)),
        neighbors_(static_cast<std::size_t>(n_)) {
    for (int v = 0; v < n_; ++v) {
      int last = v;
      for (int w = 0; w < n_; ++w)
        if (at(v, w) != 0) {
          neighbors_[static_cast<std::size_t>(w)].push_back(v);  // v sees w
          last = std::max(last, w);
        }
      completes_at_[static_cast<std::size_t>(last)].push_back(v);
    }
  }

  CensusResult run() {
    if (n_ > 0) descend(0, -1);
    return std::move(result_);
  }

 private:
  long long at(int i, int j) const { return a_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
  std::vector<long long>& partial(int v) { return partial_[static_cast<std::size_t>(v)]; }
  std::optional<std::vector<long long>>& ref(int c) { return ref_[static_cast<std::size_t>(c)]; }

  bool within(int v) {
    const auto& r = ref(colors_[static_cast<std::size_t>(v)]);
    if (!r) return true;
    for (int j = 0; j < k_; ++j)
      if (partial(v)[static_cast<std::size_t>(j)] > (*r)[static_cast<std::size_t>(j)]) return false;
    return true;
  }

  // Applies vertex t's color to the partial counts of every vertex that sees
  // it, then checks bounds and completed vertices. Returns the colors whose
  // reference was set here so the caller can undo them.
  bool apply(int t, std::vector<int>& new_refs) {
    const int c = colors_[static_cast<std::size_t>(t)];
    for (int v : neighbors_[static_cast<std::size_t>(t)]) partial(v)[static_cast<std::size_t>(c)] += at(v, t);
    for (int v : neighbors_[static_cast<std::size_t>(t)])
      if (v <= t && !within(v)) return false;
    if (!within(t)) return false;
    for (int v : completes_at_[static_cast<std::size_t>(t)]) {
      const int cv = colors_[static_cast<std::size_t>(v)];
      auto& r = ref(cv);
      if (r) {
        if (*r != partial(v)) return false;
        continue;
      }
      r = partial(v);
      new_refs.push_back(cv);
      for (int w = 0; w <= t; ++w)
        if (colors_[static_cast<std::size_t>(w)] == cv && !within(w)) return false;
    }
    return true;
  }

  void unapply(int t) {
    const int c = colors_[static_cast<std::size_t>(t)];
    for (int v : neighbors_[static_cast<std::size_t>(t)]) partial(v)[static_cast<std::size_t>(c)] -= at(v, t);
  }

  void descend(int t, int max_color) {
    if (result_.partial) return;
    if (t == n_) {
      if (max_color + 1 == k_) record();
      return;
    }
    // Colors still unused must fit into the remaining vertices.
    if ((k_ - max_color - 1) > (n_ - t)) return;
    const int top = std::min(max_color + 1, k_ - 1);
    for (int c = 0; c <= top; ++c) {
      if (result_.evaluations >= budget_) {
        result_.partial = true;
        return;
      }
      ++result_.evaluations;
      colors_[static_cast<std::size_t>(t)] = c;
      std::vector<int> new_refs;
      if (apply(t, new_refs)) descend(t + 1, std::max(max_color, c));
      for (int r : new_refs) ref(r).reset();
      unapply(t);
      colors_[static_cast<std::size_t>(t)] = -1;
      if (result_.partial) return;
    }
  }

  void record() {
    RationalMatrix s(k_, k_);
    for (int i = 0; i < k_; ++i)
      for (int j = 0; j < k_; ++j) s(i, j) = Rational((*ref(i))[static_cast<std::size_t>(j)]);
    result_.entries.push_back({Coloring(colors_), std::move(s)});
  }

  std::vector<std::vector<long long>> a_;
  int n_;
  int k_;
  std::uint64_t budget_;
  std::vector<int> colors_;
  std::vector<std::vector<long long>> partial_;
  std::vector<std::optional<std::vector<long long>>> ref_;
  std::vector<std::vector<int>> completes_at_;
  std::vector<std::vector<int>> neighbors_;  // neighbors_[w]: vertices v with a(v, w) != 0
  CensusResult result_;
};

}  // namespace

Coloring::Coloring(std::vector<int> colors) : colors_(std::move(colors)) {
  if (colors_.empty()) throw Error(Errc::invalid_argument, "coloring of an empty vertex set");
  const int top = *std::max_element(colors_.begin(), colors_.end());
  if (*std::min_element(colors_.begin(), colors_.end()) < 0)
    throw Error(Errc::invalid_argument, "negative color");
  k_ = top + 1;
  class_sizes_ = sizes_of(colors_, k_);
  for (int c = 0; c < k_; ++c)
    if (class_sizes_[static_cast<std::size_t>(c)] == 0)
      throw Error(Errc::invalid_argument,
                  "coloring is not surjective: color " + std::to_string(c + 1) + " is unused");
}

RationalMatrix Coloring::indicator() const {
  RationalMatrix p = RationalMatrix::Zero(order(), k_);
  for (Index v = 0; v < order(); ++v) p(v, color(v)) = 1;
  return p;
}

Coloring Coloring::canonical() const {
  std::vector<int> rename(static_cast<std::size_t>(k_), -1);
  std::vector<int> out;
  out.reserve(colors_.size());
  int next = 0;
  for (int c : colors_) {
    int& r = rename[static_cast<std::size_t>(c)];
    if (r < 0) r = next++;
    out.push_back(r);
  }
  return Coloring(std::move(out));
}

FractionalColoring::FractionalColoring(RationalMatrix weights) : weights_(std::move(weights)) {
  if (weights_.rows() == 0 || weights_.cols() == 0)
    throw Error(Errc::invalid_argument, "empty fractional coloring");
  for (Index i = 0; i < weights_.rows(); ++i) {
    Rational sum = 0;
    for (Index j = 0; j < weights_.cols(); ++j) {
      if (weights_(i, j) < 0)
        throw Error(Errc::invalid_argument, "negative weight in row " + std::to_string(i + 1));
      sum += weights_(i, j);
    }
    if (sum != 1)
      throw Error(Errc::invalid_argument, "row " + std::to_string(i + 1) + " sums to " + sum.str());
  }
}

std::optional<RationalMatrix> verify_coloring(const Graph& g, const Coloring& c) {
  const Index n = g.order();
  if (c.order() != n) throw Error(Errc::dimension_mismatch, "coloring length differs from graph order");
  const Index k = c.count();
  const RationalMatrix& m = g.adjacency();

  RationalMatrix counts = RationalMatrix::Zero(n, k);
  for (Index v = 0; v < n; ++v)
    for (Index w = 0; w < n; ++w)
      if (m(v, w) != 0) counts(v, c.color(w)) += m(v, w);

  RationalMatrix s(k, k);
  std::vector<bool> seen(static_cast<std::size_t>(k), false);
  for (Index v = 0; v < n; ++v) {
    const int i = c.color(v);
    if (!seen[static_cast<std::size_t>(i)]) {
      s.row(i) = counts.row(v);
      seen[static_cast<std::size_t>(i)] = true;
    } else if (s.row(i) != counts.row(v)) {
      return std::nullopt;
    }
  }

  const RationalMatrix p = c.indicator();
  if (m * p != p * s)
    throw Error(Errc::numerical_failure, "neighbor counts disagree with M P = P S");
  return s;
}

RationalMatrix complete_graph_parameters(const std::vector<Index>& class_sizes) {
  if (class_sizes.empty()) throw Error(Errc::invalid_argument, "no class sizes");
  for (Index s : class_sizes)
    if (s < 1) throw Error(Errc::invalid_argument, "class sizes must be positive");
  const Index k = static_cast<Index>(class_sizes.size());
  return unity<Rational>(k) * diagonal_of(class_sizes) - identity<Rational>(k);
}

bool check_covering(const Graph& g, const Graph& h, const std::vector<int>& phi) {
  if (static_cast<Index>(phi.size()) != g.order())
    throw Error(Errc::dimension_mismatch, "vertex map length differs from the covering graph order");
  std::vector<bool> hit(static_cast<std::size_t>(h.order()), false);
  for (int x : phi) {
    if (x < 0 || x >= h.order()) throw Error(Errc::invalid_argument, "vertex map leaves the covered graph");
    hit[static_cast<std::size_t>(x)] = true;
  }
  if (std::find(hit.begin(), hit.end(), false) != hit.end())
    throw Error(Errc::invalid_argument, "vertex map is not surjective");

  const std::optional<RationalMatrix> s = verify_coloring(g, Coloring(phi));
  return s && *s == h.adjacency();
}

std::optional<RationalMatrix> verify_fractional(const Graph& g, const FractionalColoring& w) {
  const RationalMatrix& weights = w.weights();
  const RationalMatrix& m = g.adjacency();
  if (weights.rows() != g.order())
    throw Error(Errc::dimension_mismatch, "weight rows differ from graph order");

  // W = B C with B the pivot columns of W and C the nonzero rows of rref(W).
  // M B = B S_B, so S = E S_B C solves M W = W S, where E picks the pivots
  // (C E = I). S is unique when W has full column rank.
  std::vector<Index> pivots;
  const RationalMatrix reduced = rref(weights, &pivots);
  const Index r = static_cast<Index>(pivots.size());
  RationalMatrix basis(weights.rows(), r);
  RationalMatrix pick = RationalMatrix::Zero(weights.cols(), r);
  for (Index i = 0; i < r; ++i) {
    basis.col(i) = weights.col(pivots[static_cast<std::size_t>(i)]);
    pick(pivots[static_cast<std::size_t>(i)], i) = 1;
  }
  RationalMatrix s_basis;
  try {
    s_basis = parameters_from_structure(m, basis);
  } catch (const Error& e) {
    if (e.code() == Errc::not_invariant) return std::nullopt;
    throw;
  }
  RationalMatrix s = pick * s_basis * reduced.topRows(r);
  if (m * weights != weights * s)
    throw Error(Errc::numerical_failure, "fractional parameters fail M W = W S");
  return s;
}

ProductColoring product_coloring(ProductKind kind, const Graph& left, const Coloring& left_coloring,
                                 const Graph& right, const Coloring& right_coloring) {
  const RationalMatrix s = checked_parameters(left, left_coloring, "left");
  const RationalMatrix t = checked_parameters(right, right_coloring, "right");
  const Index k1 = left_coloring.count();
  const Index k2 = right_coloring.count();
  const RationalMatrix i1 = identity<Rational>(k1);
  const RationalMatrix i2 = identity<Rational>(k2);

  RationalMatrix parameters;
  switch (kind) {
    case ProductKind::tensor: parameters = kron(s, t); break;
    case ProductKind::cartesian: parameters = kron(i1, t) + kron(s, i2); break;
    case ProductKind::normal: parameters = kron(s, i2) + kron(i1, t) + kron(s, t); break;
    case ProductKind::lexicographic:
      parameters =
          kron(s, RationalMatrix(unity<Rational>(k2) * diagonal_of(right_coloring.class_sizes()))) +
          kron(i1, t);
      break;
  }

  std::vector<int> colors;
  colors.reserve(static_cast<std::size_t>(left.order() * right.order()));
  for (Index v = 0; v < left.order(); ++v)
    for (Index u = 0; u < right.order(); ++u)
      colors.push_back(left_coloring.color(v) * static_cast<int>(k2) + right_coloring.color(u));

  ProductColoring out{graph_product(kind, left, right), Coloring(std::move(colors)),
                      std::move(parameters)};
  const std::optional<RationalMatrix> check = verify_coloring(out.graph, out.coloring);
  if (!check || *check != out.parameters)
    throw Error(Errc::numerical_failure, "product coloring does not reproduce its parameters");
  return out;
}

bool orthogonality_check(const Graph& g, const Coloring& p, const Coloring& r,
                         const EigenOptions& options) {
  const std::optional<Rational> degree = is_regular(g);
  if (!degree) throw Error(Errc::not_regular, "orthogonality needs a regular graph");
  if (!is_connected(g)) throw Error(Errc::not_connected, "orthogonality needs a connected graph");
  const RationalMatrix sp = checked_parameters(g, p, "first");
  const RationalMatrix sr = checked_parameters(g, r, "second");

  const std::vector<Complex> a = eig(sp, options).values;
  const std::vector<Complex> b = eig(sr, options).values;
  const Complex r_value = to_complex(*degree);
  for (const Complex& x : a) {
    if (std::abs(x - r_value) <= options.cluster_radius) continue;
    for (const Complex& y : b)
      if (std::abs(x - y) <= options.cluster_radius)
        throw Error(Errc::hypothesis_unmet,
                    "parameter spectra share a non-degree eigenvalue near " +
                        std::to_string(x.real()));
  }

  const RationalMatrix dots = p.indicator().transpose() * r.indicator();
  const Rational n(g.order());
  for (int i = 0; i < p.count(); ++i)
    for (int j = 0; j < r.count(); ++j) {
      const Rational expected = Rational(p.class_sizes()[static_cast<std::size_t>(i)]) *
                                Rational(r.class_sizes()[static_cast<std::size_t>(j)]) / n;
      if (dots(i, j) != expected) return false;
    }
  return true;
}

CensusResult census(const Graph& g, int k, std::uint64_t budget) {
  if (k < 1) throw Error(Errc::invalid_argument, "census needs at least one color");
  CensusResult result = CensusSearch(g, k, budget).run();
  for (const CensusEntry& e : result.entries) {
    const RationalMatrix p = e.coloring.indicator();
    if (g.adjacency() * p != p * e.parameters)
      throw Error(Errc::numerical_failure, "census entry fails M P = P S");
  }
  return result;
}

RationalMatrix canonical_parameters(const RationalMatrix& s) {
  if (s.rows() != s.cols()) throw Error(Errc::dimension_mismatch, "parameter matrix must be square");
  const Index k = s.rows();
  std::vector<Index> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  RationalMatrix best = s;
  auto less = [k](const RationalMatrix& x, const RationalMatrix& y) {
    for (Index i = 0; i < k; ++i)
      for (Index j = 0; j < k; ++j)
        if (x(i, j) != y(i, j)) return x(i, j) < y(i, j);
    return false;
  };
  RationalMatrix candidate(k, k);
  do {
    for (Index i = 0; i < k; ++i)
      for (Index j = 0; j < k; ++j)
        candidate(i, j) = s(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    if (less(candidate, best)) best = candidate;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace perfect
