#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>

#include "perfect/colorings.hpp"
#include "perfect/contraction.hpp"
#include "perfect/graphs.hpp"
#include "perfect/io.hpp"
#include "perfect/products.hpp"
#include "perfect/structures.hpp"

namespace perfect::cli {

namespace {

using nlohmann::json;

constexpr double kSpectrumAgreement = 1e-8;

struct Context {
  std::ostream& out;
  std::ostream& err;
  bool json = false;
  double tol = kDefaultTolerance;

  EigenOptions eigen() const {
    EigenOptions o;
    o.tolerance = tol;
    return o;
  }
};

// Thrown for conditions that are answers, not failures (exit 1).
struct Negative {
  std::string message;
};

std::string number(Complex x, double zero) {
  auto part = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
    return std::string(buf);
  };
  const double re = std::abs(x.real()) <= zero ? 0.0 : x.real();
  const double im = std::abs(x.imag()) <= zero ? 0.0 : x.imag();
  if (im == 0.0) return part(re);
  return part(re) + (im > 0 ? "+" : "") + part(im) + "i";
}

json matrix_json(const RationalMatrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(io::format(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json matrix_json(const ComplexMatrix& m, double zero) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(number(m(i, j), zero));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const ComplexVector& v, double zero) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(number(v(i), zero));
  return out;
}

json spectrum_json(const Spectrum& s, double zero) {
  json out = json::array();
  for (const SpectrumEntry& e : s.entries()) {
    json entry = {{"value", e.exact ? io::format(*e.exact) : number(e.value, zero)},
                  {"multiplicity", e.multiplicity}};
    out.push_back(std::move(entry));
  }
  return out;
}

json values_json(const std::vector<Complex>& values, double zero) {
  json out = json::array();
  for (const Complex& v : values) out.push_back(number(v, zero));
  return out;
}

void print_matrix(std::ostream& out, const json& m, const std::string& indent = "  ") {
  std::size_t width = 0;
  for (const json& row : m)
    for (const json& x : row) width = std::max(width, x.get<std::string>().size());
  for (const json& row : m) {
    out << indent;
    for (std::size_t j = 0; j < row.size(); ++j) {
      const std::string s = row[j].get<std::string>();
      out << (j ? " " : "") << std::string(width - s.size(), ' ') << s;
    }
    out << '\n';
  }
}

void print_spectrum(std::ostream& out, const json& spectrum) {
  for (const json& e : spectrum)
    out << "  " << e["value"].get<std::string>() << "  x" << e["multiplicity"].get<Index>() << '\n';
}

void print_list(std::ostream& out, const char* label, const json& values) {
  out << label << ':';
  for (const json& v : values) out << ' ' << (v.is_string() ? v.get<std::string>() : v.dump());
  out << '\n';
}

// Named families: "k4", "c6", "prism3", "hamming:3:2", or tokens such as
// {"hamming", "3", "2"} and {"double", "c5"}.

std::vector<std::string> split_compact(const std::vector<std::string>& tokens) {
  if (tokens.size() != 1) return tokens;
  const std::string& t = tokens[0];
  std::vector<std::string> parts;
  if (t.find(':') != std::string::npos) {
    std::size_t start = 0;
    for (std::size_t at; (at = t.find(':', start)) != std::string::npos; start = at + 1)
      parts.push_back(t.substr(start, at - start));
    parts.push_back(t.substr(start));
    return parts;
  }
  std::size_t letters = 0;
  while (letters < t.size() && std::isalpha(static_cast<unsigned char>(t[letters]))) ++letters;
  if (letters > 0 && letters < t.size() &&
      std::all_of(t.begin() + static_cast<std::ptrdiff_t>(letters), t.end(),
                  [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    return {t.substr(0, letters), t.substr(letters)};
  return tokens;
}

int to_int(const std::string& t) {
  int v = 0;
  auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || end != t.data() + t.size())
    throw Error(Errc::invalid_argument, "expected an integer, found '" + t + "'");
  return v;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string joined(const std::vector<std::string>& tokens) {
  std::string s;
  for (const std::string& t : tokens) s += (s.empty() ? "" : " ") + t;
  return s;
}

// Returns the family, or nullopt for the all-ones matrix "unity n" / "j2".
std::optional<Family> parse_family(const std::vector<std::string>& raw, Index* unity_order) {
  const std::vector<std::string> tokens = split_compact(raw);
  if (tokens.empty()) throw Error(Errc::invalid_argument, "missing graph");
  const std::string name = lower(tokens[0]);
  const std::vector<std::string> rest(tokens.begin() + 1, tokens.end());

  auto args = [&](std::size_t count) {
    if (rest.size() != count)
      throw Error(Errc::invalid_argument, "family '" + name + "' takes " + std::to_string(count) +
                                              " integer argument" + (count == 1 ? "" : "s"));
    std::vector<int> v;
    for (const std::string& t : rest) v.push_back(to_int(t));
    for (int x : v)
      if (x < 1) throw Error(Errc::invalid_argument, "family arguments must be positive");
    return v;
  };

  if (name == "double" || name == "d" || name == "bdouble" || name == "bipartite_double") {
    if (rest.empty()) throw Error(Errc::invalid_argument, "'" + name + "' needs a base family");
    Index ignored = 0;
    std::optional<Family> base = parse_family(rest, &ignored);
    if (!base) throw Error(Errc::invalid_argument, "doubling needs a named base family");
    return name == "double" || name == "d" ? Family::double_of(*base) : Family::bipartite_double_of(*base);
  }
  if (name == "unity" || name == "j") {
    *unity_order = args(1)[0];
    return std::nullopt;
  }
  if (name == "complete" || name == "k") return Family::complete(args(1)[0]);
  if (name == "matching" || name == "m") return Family::matching(args(1)[0]);
  if (name == "bipartite" || name == "knn") return Family::complete_bipartite(args(1)[0]);
  if (name == "multipartite") {
    const auto v = args(2);
    return Family::complete_multipartite(v[0], v[1]);
  }
  if (name == "hamming" || name == "h") {
    const auto v = args(2);
    return Family::hamming(v[0], v[1]);
  }
  if (name == "path" || name == "p") return Family::path(args(1)[0]);
  if (name == "cycle" || name == "c") return Family::cycle(args(1)[0]);
  if (name == "grid") {
    const auto v = args(2);
    return Family::grid(v[0], v[1]);
  }
  if (name == "torus") {
    const auto v = args(2);
    return Family::torus(v[0], v[1]);
  }
  if (name == "prism") return Family::prism(args(1)[0]);
  if (name == "ladder") return Family::ladder(args(1)[0]);
  throw Error(Errc::invalid_argument, "unknown graph or family '" + joined(raw) + "'");
}

bool is_file(const std::vector<std::string>& tokens) {
  return tokens.size() == 1 && std::filesystem::is_regular_file(tokens[0]);
}

Graph resolve_graph(const std::vector<std::string>& tokens) {
  if (is_file(tokens)) return io::read_graph_file(tokens[0]);
  Index unity_order = 0;
  std::optional<Family> family = parse_family(tokens, &unity_order);
  if (!family) return Graph(unity<Rational>(unity_order));
  return make_family(*family);
}

std::string describe(const Graph& g, const std::vector<std::string>& tokens) {
  return g.family() ? g.family()->name() : joined(tokens);
}

ComplexVector resolve_vector(const std::string& token) {
  std::vector<io::ExactScalar> entries;
  if (std::filesystem::is_regular_file(token)) {
    entries = io::read_vector_file(token);
  } else {
    std::size_t start = 0;
    for (std::size_t at;; start = at + 1) {
      at = token.find(',', start);
      entries.push_back(io::parse_scalar(token.substr(start, at - start)));
      if (at == std::string::npos) break;
    }
  }
  ComplexVector v(static_cast<Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i)
    v(static_cast<Index>(i)) = {to_double(entries[i].re), to_double(entries[i].im)};
  return v;
}

std::string first_token(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open " + path);
  for (std::string line; std::getline(in, line);) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    if (std::string w; words >> w) return w;
  }
  return {};
}

std::vector<Complex> parameter_eigenvalues(const ComplexMatrix& s, const Context& ctx, json& report) {
  try {
    return eig(s, ctx.eigen()).values;
  } catch (const Error& e) {
    report["eigenvalue_note"] = e.what();
    return {};
  }
}

int finish(const Context& ctx, const json& report, int code,
           const std::function<void()>& human) {
  if (ctx.json)
    ctx.out << report.dump(2) << '\n';
  else
    human();
  return code;
}

// verify ---------------------------------------------------------------

int cmd_verify(const Context& ctx, const std::string& graph_path, const std::string& target) {
  const io::ExactMatrix m = io::read_matrix_file(graph_path);
  json report = {{"graph", graph_path}, {"target", target}};
  std::optional<json> parameters;
  std::optional<ComplexMatrix> s_numeric;
  bool verified = false;
  bool nonsingular = false;

  if (first_token(target) == "structure") {
    const io::StructureFile file = io::read_structure_file(target);
    if (file.structure.re.rows() != m.re.rows())
      throw Error(Errc::dimension_mismatch, "structure has " + std::to_string(file.structure.re.rows()) +
                                                " rows, graph has order " + std::to_string(m.re.rows()));
    const bool exact = m.is_real() && file.structure.is_real() && (!file.parameters || file.parameters->is_real());
    report["kind"] = "structure";
    report["domain"] = exact ? "exact" : "complex";
    if (exact) {
      std::optional<RationalMatrix> s;
      if (file.parameters) {
        const RationalStructure st(m.re, file.structure.re, file.parameters->re);
        if (verify(st)) s = file.parameters->re;
      } else {
        try {
          s = parameters_from_structure(m.re, file.structure.re);
        } catch (const Error& e) {
          if (e.code() == Errc::rank_deficient)
            throw Error(Errc::invalid_argument, "structure matrix is rank-deficient; add a 'parameters' block");
          if (e.code() != Errc::not_invariant) throw;
        }
      }
      if (s) {
        verified = true;
        nonsingular = rank(file.structure.re) == file.structure.re.cols();
        parameters = matrix_json(*s);
        s_numeric = to_complex(*s);
      }
    } else {
      const ComplexMatrix mc = m.to_complex();
      const ComplexMatrix p = file.structure.to_complex();
      std::optional<ComplexMatrix> s;
      if (file.parameters) {
        const ComplexStructure st(mc, p, file.parameters->to_complex());
        report["residual"] = st.residual();
        if (verify(st, ctx.tol)) s = file.parameters->to_complex();
      } else {
        try {
          s = parameters_from_structure(mc, p, ctx.tol);
        } catch (const Error& e) {
          if (e.code() == Errc::rank_deficient)
            throw Error(Errc::invalid_argument, "structure matrix is rank-deficient; add a 'parameters' block");
          if (e.code() != Errc::not_invariant) throw;
        }
      }
      if (s) {
        verified = true;
        nonsingular = rank(p, ctx.tol) == p.cols();
        parameters = matrix_json(*s, ctx.tol);
        s_numeric = *s;
      }
    }
  } else {
    if (!m.is_real()) throw Error(Errc::invalid_argument, "colorings need a real adjacency matrix");
    const Graph g(m.re);
    const io::ColoringFile file = io::read_coloring_file(target);
    std::optional<RationalMatrix> s;
    if (file.coloring) {
      if (file.coloring->order() != g.order())
        throw Error(Errc::dimension_mismatch, "coloring has " + std::to_string(file.coloring->order()) +
                                                  " vertices, graph has " + std::to_string(g.order()));
      report["kind"] = "coloring";
      s = verify_coloring(g, *file.coloring);
      nonsingular = true;
    } else {
      const RationalMatrix& w = file.fractional->weights();
      if (w.rows() != g.order())
        throw Error(Errc::dimension_mismatch, "weights have " + std::to_string(w.rows()) +
                                                  " rows, graph has order " + std::to_string(g.order()));
      report["kind"] = "fractional";
      s = verify_fractional(g, *file.fractional);
      nonsingular = rank(w) == w.cols();
    }
    if (s) {
      verified = true;
      parameters = matrix_json(*s);
      s_numeric = to_complex(*s);
    } else {
      nonsingular = false;
    }
  }

  report["verified"] = verified;
  report["nonsingular"] = verified && nonsingular;
  if (parameters) {
    report["parameters"] = *parameters;
    report["eigenvalues"] = values_json(parameter_eigenvalues(*s_numeric, ctx, report), ctx.tol);
  }
  return finish(ctx, report, verified ? kSuccess : kNegative, [&] {
    if (!verified) {
      ctx.out << "not perfect\n";
      return;
    }
    ctx.out << "verified " << report["kind"].get<std::string>()
            << (report["nonsingular"].get<bool>() ? " (nonsingular)" : " (singular)") << '\n';
    ctx.out << "parameters:\n";
    print_matrix(ctx.out, report["parameters"]);
    print_list(ctx.out, "eigenvalues", report["eigenvalues"]);
  });
}

// spectrum -------------------------------------------------------------

enum class SpectrumMode { automatic, closed_form, numeric, both };

int cmd_spectrum(const Context& ctx, const std::vector<std::string>& tokens, SpectrumMode mode) {
  json report;
  std::optional<Spectrum> closed;
  std::optional<Spectrum> numeric;

  if (is_file(tokens)) {
    const io::ExactMatrix m = io::read_matrix_file(tokens[0]);
    report["graph"] = tokens[0];
    if (mode == SpectrumMode::closed_form || mode == SpectrumMode::both)
      throw Error(Errc::no_closed_form, "no closed form for a graph read from a file");
    numeric = m.is_real() ? numeric_spectrum(Graph(m.re), ctx.eigen())
                          : Spectrum::from_eigen(eig(m.to_complex(), ctx.eigen()));
  } else {
    const Graph g = resolve_graph(tokens);
    report["graph"] = describe(g, tokens);
    report["order"] = g.order();
    if (mode == SpectrumMode::automatic) mode = g.family() ? SpectrumMode::closed_form : SpectrumMode::numeric;
    if (mode == SpectrumMode::closed_form || mode == SpectrumMode::both) {
      if (!g.family()) throw Error(Errc::no_closed_form, "unknown family for a closed form: " + joined(tokens));
      closed = closed_form_spectrum(g);
    }
    if (mode == SpectrumMode::numeric || mode == SpectrumMode::both) numeric = numeric_spectrum(g, ctx.eigen());
  }

  const double zero = std::max(ctx.tol, 1e-12);
  if (closed) report["closed_form"] = spectrum_json(*closed, zero);
  if (numeric) report["numeric"] = spectrum_json(*numeric, zero);
  int code = kSuccess;
  if (closed && numeric) {
    const double d = max_discrepancy(*closed, *numeric);
    report["discrepancy"] = std::isfinite(d) ? json(d) : json("inf");
    if (!(d <= kSpectrumAgreement)) code = kNegative;
  }
  return finish(ctx, report, code, [&] {
    ctx.out << "graph: " << report["graph"].get<std::string>() << '\n';
    if (closed) {
      ctx.out << "closed form:\n";
      print_spectrum(ctx.out, report["closed_form"]);
    }
    if (numeric) {
      ctx.out << "numeric:\n";
      print_spectrum(ctx.out, report["numeric"]);
    }
    if (report.contains("discrepancy")) ctx.out << "max discrepancy: " << report["discrepancy"].dump() << '\n';
  });
}

// product --------------------------------------------------------------

struct ProductArgs {
  std::string kind;
  std::string left;
  std::string right;
  std::string grid;
  std::string output;
  std::string left_coloring;
  std::string right_coloring;
  std::string coloring_output;
  std::string parameters_output;
};

std::optional<ProductKind> product_kind(const std::string& name) {
  if (name == "tensor") return ProductKind::tensor;
  if (name == "cartesian") return ProductKind::cartesian;
  if (name == "normal") return ProductKind::normal;
  if (name == "lex" || name == "lexicographic") return ProductKind::lexicographic;
  return std::nullopt;
}

std::vector<RationalMatrix> resolve_factors(const std::string& token) {
  std::vector<RationalMatrix> out;
  if (std::filesystem::is_regular_file(token)) {
    for (io::ExactMatrix& m : io::read_factor_list_file(token)) {
      if (!m.is_real()) throw Error(Errc::invalid_argument, token + ": product factors must be real");
      out.push_back(std::move(m.re));
    }
  } else {
    out.push_back(resolve_graph({token}).adjacency());
  }
  return out;
}

int cmd_product(const Context& ctx, const ProductArgs& a) {
  json report = {{"kind", a.kind}, {"left", a.left}, {"right", a.right}};
  std::optional<ProductSpec<Rational>> spec;
  std::optional<ProductColoring> colored;
  const std::optional<ProductKind> kind = product_kind(a.kind);
  const bool with_colorings = !a.left_coloring.empty() || !a.right_coloring.empty();

  if (kind) {
    if (!a.grid.empty()) throw Error(Errc::invalid_argument, "--grid applies to general products only");
    const Graph left = resolve_graph({a.left});
    const Graph right = resolve_graph({a.right});
    spec.emplace(named_product(*kind, left.adjacency(), right.adjacency()));
    if (with_colorings) {
      if (a.left_coloring.empty() || a.right_coloring.empty())
        throw Error(Errc::invalid_argument, "give both --left-coloring and --right-coloring");
      if (*kind == ProductKind::lexicographic && !is_regular(right))
        throw Error(Errc::not_regular, "lexicographic product colorings need a regular right factor");
      const io::ColoringFile lc = io::read_coloring_file(a.left_coloring);
      const io::ColoringFile rc = io::read_coloring_file(a.right_coloring);
      if (!lc.coloring || !rc.coloring)
        throw Error(Errc::invalid_argument, "product colorings must be integer colorings");
      if (lc.coloring->order() != left.order() || rc.coloring->order() != right.order())
        throw Error(Errc::dimension_mismatch, "coloring length differs from its factor order");
      try {
        colored.emplace(product_coloring(*kind, left, *lc.coloring, right, *rc.coloring));
      } catch (const Error& e) {
        if (e.code() == Errc::not_verified) throw Negative{e.what()};
        throw;
      }
    }
  } else if (a.kind == "general") {
    if (a.grid.empty()) throw Error(Errc::invalid_argument, "general products need --grid");
    if (with_colorings) throw Error(Errc::invalid_argument, "product colorings need a named product");
    const io::ExactMatrix grid = io::read_grid_file(a.grid);
    if (!grid.is_real()) throw Error(Errc::invalid_argument, "grid coefficients must be real");
    spec.emplace(resolve_factors(a.left), resolve_factors(a.right), grid.re);
  } else {
    throw Error(Errc::invalid_argument, "unknown product '" + a.kind + "'");
  }

  const Graph product(build_product(*spec));
  report["order"] = product.order();
  try {
    report["spectrum"] = spectrum_json(product_spectrum(*spec, ctx.eigen()), std::max(ctx.tol, 1e-12));
  } catch (const Error& e) {
    report["spectrum_note"] = std::string("factor eigenbases do not consolidate: ") + e.what();
  }
  if (!a.output.empty()) {
    io::write_graph_file(a.output, product);
    report["output"] = a.output;
  }
  if (colored) {
    report["parameters"] = matrix_json(colored->parameters);
    report["colors"] = colored->coloring.count();
    if (!a.coloring_output.empty()) {
      io::write_coloring_file(a.coloring_output, colored->coloring);
      report["coloring_output"] = a.coloring_output;
    }
    if (!a.parameters_output.empty()) {
      io::write_matrix_file(a.parameters_output, colored->parameters);
      report["parameters_output"] = a.parameters_output;
    }
  }
  return finish(ctx, report, kSuccess, [&] {
    ctx.out << a.kind << " product of order " << product.order() << '\n';
    if (report.contains("spectrum")) {
      ctx.out << "spectrum:\n";
      print_spectrum(ctx.out, report["spectrum"]);
    } else {
      ctx.out << report["spectrum_note"].get<std::string>() << '\n';
    }
    if (colored) {
      ctx.out << "product coloring with " << colored->coloring.count() << " colors, parameters:\n";
      print_matrix(ctx.out, report["parameters"]);
    }
    if (!a.output.empty()) ctx.out << "wrote " << a.output << '\n';
  });
}

// contract -------------------------------------------------------------

struct ContractArgs {
  std::string kind;
  std::string h;
  std::string g;
  std::string left;
  std::string right;
  std::string product;
};

Complex rayleigh(const ComplexMatrix& m, const ComplexVector& v) {
  const double norm = v.squaredNorm();
  if (norm == 0.0) throw Error(Errc::invalid_argument, "zero vector has no eigenvalue");
  return v.dot(m * v) / norm;
}

int cmd_contract(const Context& ctx, const ContractArgs& a) {
  const std::optional<ProductKind> kind = product_kind(a.kind);
  if (!kind) throw Error(Errc::invalid_argument, "contraction needs tensor, cartesian, normal or lex");
  const Graph left = resolve_graph({a.left});
  const Graph right = resolve_graph({a.right});
  const ComplexVector h = resolve_vector(a.h);
  const ComplexVector g = resolve_vector(a.g);
  const ComplexMatrix product = build_product(named_product(*kind, to_complex(left.adjacency()),
                                                            to_complex(right.adjacency())));
  if (!a.product.empty()) {
    const Graph given = resolve_graph({a.product});
    if (given.adjacency() != graph_product(*kind, left, right).adjacency())
      throw Error(Errc::invalid_argument, a.product + " is not the " + a.kind + " product of the factors");
  }
  if (h.size() != product.rows() || g.size() != right.order())
    throw Error(Errc::dimension_mismatch, "h needs " + std::to_string(product.rows()) + " entries and g " +
                                              std::to_string(right.order()));

  const Complex nu = rayleigh(product, h);
  const Complex lambda = rayleigh(to_complex(right.adjacency()), g);
  NamedContraction c;
  try {
    c = contract_named(*kind, left, right, h, nu, g, lambda, ctx.tol);
  } catch (const Error& e) {
    if (e.code() == Errc::hypothesis_unmet || e.code() == Errc::numerical_failure) throw Negative{e.what()};
    throw;
  }

  const double zero = std::max(ctx.tol, 1e-12);
  json report = {{"kind", a.kind},        {"nu", number(nu, zero)},    {"lambda", number(lambda, zero)},
                 {"f", vector_json(c.f, zero)}, {"status", c.zero ? "zero" : "ok"}};
  if (!c.zero) {
    report["mu"] = number(c.mu, zero);
    report["residual"] = c.residual;
  }
  return finish(ctx, report, kSuccess, [&] {
    ctx.out << "status: " << report["status"].get<std::string>() << '\n';
    ctx.out << "nu: " << report["nu"].get<std::string>() << ", lambda: " << report["lambda"].get<std::string>()
            << '\n';
    print_list(ctx.out, "f", report["f"]);
    if (!c.zero) {
      ctx.out << "mu: " << report["mu"].get<std::string>() << '\n';
      ctx.out << "residual: " << c.residual << '\n';
    }
  });
}

// census ---------------------------------------------------------------

int cmd_census(const Context& ctx, const std::vector<std::string>& tokens, std::uint64_t budget) {
  if (tokens.size() < 2) throw Error(Errc::invalid_argument, "census needs a graph and a color count");
  const std::vector<std::string> graph_tokens(tokens.begin(), tokens.end() - 1);
  const int k = to_int(tokens.back());
  const Graph g = resolve_graph(graph_tokens);
  const CensusResult result = census(g, k, budget);

  struct Group {
    RationalMatrix parameters;
    std::vector<const CensusEntry*> members;
  };
  std::vector<Group> groups;
  std::map<std::string, std::size_t> index;
  for (const CensusEntry& e : result.entries) {
    const RationalMatrix key_matrix = canonical_parameters(e.parameters);
    const std::string key = matrix_json(key_matrix).dump();
    auto [it, inserted] = index.emplace(key, groups.size());
    if (inserted) groups.push_back({key_matrix, {}});
    groups[it->second].members.push_back(&e);
  }

  auto colors_json = [](const Coloring& c) {
    json out = json::array();
    for (int x : c.colors()) out.push_back(x + 1);
    return out;
  };
  json classes = json::array();
  for (const Group& grp : groups) {
    json colorings = json::array();
    for (const CensusEntry* e : grp.members) colorings.push_back(colors_json(e->coloring));
    classes.push_back({{"parameters", matrix_json(grp.members.front()->parameters)},
                       {"count", grp.members.size()},
                       {"representative", colors_json(grp.members.front()->coloring)},
                       {"colorings", std::move(colorings)}});
  }
  json report = {{"graph", describe(g, graph_tokens)},
                 {"colors", k},
                 {"partial", result.partial},
                 {"evaluations", result.evaluations},
                 {"colorings", result.entries.size()},
                 {"classes", std::move(classes)}};
  if (result.partial)
    ctx.err << "warning: budget of " << budget << " assignments exhausted; results are partial\n";
  return finish(ctx, report, result.partial ? kResourceLimit : kSuccess, [&] {
    ctx.out << "graph: " << report["graph"].get<std::string>() << ", colors: " << k << '\n';
    ctx.out << result.entries.size() << " perfect coloring(s) up to renaming, " << groups.size()
            << " parameter matri" << (groups.size() == 1 ? "x" : "ces") << '\n';
    for (const json& c : report["classes"]) {
      ctx.out << "parameters (" << c["count"].get<std::size_t>() << " coloring"
              << (c["count"].get<std::size_t>() == 1 ? "" : "s") << "):\n";
      print_matrix(ctx.out, c["parameters"]);
      print_list(ctx.out, "  representative", c["representative"]);
    }
  });
}

int exit_code(Errc code) {
  switch (code) {
    case Errc::parse:
    case Errc::io:
    case Errc::invalid_argument:
    case Errc::dimension_mismatch:
    case Errc::no_closed_form:
    case Errc::excluded_eigenvalue:
    case Errc::not_regular:
    case Errc::not_connected:
    case Errc::chaining_mismatch:
      return kInputError;
    default:
      return kNegative;
  }
}

std::optional<double> env_tolerance(std::ostream& err) {
  const char* text = std::getenv("PERFECT_TOL");
  if (!text || !*text) return kDefaultTolerance;
  const std::string s(text);
  double v = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || !(v > 0.0) || !std::isfinite(v)) {
    err << "error: PERFECT_TOL must be a positive number, got '" << s << "'\n";
    return std::nullopt;
  }
  return v;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const std::optional<double> tol = env_tolerance(err);
  if (!tol) return kInputError;
  Context ctx{out, err, false, *tol};

  CLI::App app{"Perfect structures, graph products and perfect colorings", "perfect"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", ctx.json, "Print a JSON report");
  app.add_option("--tol", ctx.tol, "Numeric tolerance (default from PERFECT_TOL or 1e-9)")
      ->check(CLI::PositiveNumber);

  std::string verify_graph, verify_target;
  CLI::App* verify = app.add_subcommand("verify", "Check a structure or coloring against a graph");
  verify->add_option("graph", verify_graph, "Graph file")->required();
  verify->add_option("target", verify_target, "Structure or coloring file")->required();

  std::vector<std::string> spectrum_target;
  bool closed_flag = false, numeric_flag = false, both_flag = false;
  CLI::App* spectrum = app.add_subcommand("spectrum", "Spectrum of a named family or graph file");
  spectrum->add_option("graph", spectrum_target, "Family (k4, cycle 5, hamming 3 2, ...) or file")->required();
  auto* closed_opt = spectrum->add_flag("--closed-form", closed_flag, "Closed-form spectrum");
  auto* numeric_opt = spectrum->add_flag("--numeric", numeric_flag, "Numeric eigenvalues");
  auto* both_opt = spectrum->add_flag("--both", both_flag, "Both, with their max discrepancy");
  closed_opt->excludes(numeric_opt)->excludes(both_opt);
  numeric_opt->excludes(both_opt);

  ProductArgs pa;
  CLI::App* product = app.add_subcommand("product", "Build a graph product");
  product->add_option("kind", pa.kind, "tensor, cartesian, normal, lex or general")->required();
  product->add_option("left", pa.left, "Left factor (family or file; factor list for general)")->required();
  product->add_option("right", pa.right, "Right factor (family or file; factor list for general)")->required();
  product->add_option("--grid", pa.grid, "Coefficient grid file (general)");
  product->add_option("-o,--output", pa.output, "Write the product graph");
  product->add_option("--left-coloring", pa.left_coloring, "Coloring of the left factor");
  product->add_option("--right-coloring", pa.right_coloring, "Coloring of the right factor");
  product->add_option("--coloring-output", pa.coloring_output, "Write the product coloring");
  product->add_option("--parameters-output", pa.parameters_output, "Write the product parameter matrix");

  ContractArgs ca;
  CLI::App* contract = app.add_subcommand("contract", "Contract a product eigenvector against a right one");
  contract->add_option("kind", ca.kind, "tensor, cartesian, normal or lex")->required();
  contract->add_option("h_vector", ca.h, "Product eigenvector (file or comma list)")->required();
  contract->add_option("g_vector", ca.g, "Right-factor eigenvector (file or comma list)")->required();
  contract->add_option("--left", ca.left, "Left factor")->required();
  contract->add_option("--right", ca.right, "Right factor")->required();
  contract->add_option("--product", ca.product, "Product graph file, checked against the factors");

  std::vector<std::string> census_target;
  std::uint64_t budget = kDefaultCensusBudget;
  CLI::App* census_cmd = app.add_subcommand("census", "All perfect k-colorings up to renaming");
  census_cmd->add_option("graph_and_k", census_target, "Graph (family or file) followed by k")->required();
  census_cmd->add_option("--budget", budget, "Maximum color assignments");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }

  try {
    if (*verify) return cmd_verify(ctx, verify_graph, verify_target);
    if (*spectrum) {
      SpectrumMode mode = SpectrumMode::automatic;
      if (closed_flag) mode = SpectrumMode::closed_form;
      if (numeric_flag) mode = SpectrumMode::numeric;
      if (both_flag) mode = SpectrumMode::both;
      return cmd_spectrum(ctx, spectrum_target, mode);
    }
    if (*product) return cmd_product(ctx, pa);
    if (*contract) return cmd_contract(ctx, ca);
    if (*census_cmd) return cmd_census(ctx, census_target, budget);
  } catch (const Negative& n) {
    err << "not satisfied: " << n.message << '\n';
    return kNegative;
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace perfect::cli
