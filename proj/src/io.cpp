#include "perfect/io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

namespace perfect::io {

namespace {

struct Line {
  int number;
  std::vector<std::string> tokens;
};

class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : source_(std::move(source)) {
    std::string text;
    int number = 0;
    while (std::getline(in, text)) {
      ++number;
      if (auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
      std::istringstream words(text);
      Line line{number, {}};
      for (std::string w; words >> w;) line.tokens.push_back(std::move(w));
      if (!line.tokens.empty()) lines_.push_back(std::move(line));
    }
    last_line_ = number;
  }

  bool done() const { return next_ >= lines_.size(); }
  const Line& peek() const { return lines_[next_]; }

  const Line& take(const char* expected) {
    if (done()) fail(last_line_, std::string("unexpected end of input, expected ") + expected);
    return lines_[next_++];
  }

  [[noreturn]] void fail(int line, const std::string& message) const {
    throw Error(Errc::parse, source_ + ":" + std::to_string(line) + ": " + message);
  }

  const std::vector<Line>& lines() const { return lines_; }

 private:
  std::string source_;
  std::vector<Line> lines_;
  std::size_t next_ = 0;
  int last_line_ = 0;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io, "cannot write " + path);
  return out;
}

long long parse_count(const LineReader& r, const Line& line, std::size_t at, const char* what) {
  if (at >= line.tokens.size()) r.fail(line.number, std::string("missing ") + what);
  const std::string& t = line.tokens[at];
  long long value = 0;
  auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || end != t.data() + t.size() || value < 0)
    r.fail(line.number, std::string("bad ") + what + " '" + t + "'");
  return value;
}

void expect_header(const LineReader& r, const Line& line, std::string_view keyword,
                   std::size_t arity) {
  if (line.tokens[0] != keyword)
    r.fail(line.number, "expected '" + std::string(keyword) + "' header, found '" + line.tokens[0] + "'");
  if (line.tokens.size() != arity + 1)
    r.fail(line.number, "header '" + std::string(keyword) + "' takes " + std::to_string(arity) +
                            " numbers");
}

ExactScalar scalar_at(const LineReader& r, const Line& line, std::size_t at) {
  try {
    return parse_scalar(line.tokens[at]);
  } catch (const Error& e) {
    r.fail(line.number, e.what());
  }
}

ExactMatrix read_rows(LineReader& r, Index rows, Index cols, const char* what) {
  ExactMatrix m{RationalMatrix(rows, cols), RationalMatrix(rows, cols)};
  for (Index i = 0; i < rows; ++i) {
    const Line& line = r.take(what);
    if (static_cast<Index>(line.tokens.size()) != cols)
      r.fail(line.number, std::string(what) + " row has " + std::to_string(line.tokens.size()) +
                              " entries, expected " + std::to_string(cols));
    for (Index j = 0; j < cols; ++j) {
      ExactScalar x = scalar_at(r, line, static_cast<std::size_t>(j));
      m.re(i, j) = std::move(x.re);
      m.im(i, j) = std::move(x.im);
    }
  }
  return m;
}

ExactMatrix real_matrix(RationalMatrix m) {
  RationalMatrix zero = RationalMatrix::Zero(m.rows(), m.cols());
  return {std::move(m), std::move(zero)};
}

ExactMatrix read_edges(LineReader& r, const Line& header) {
  expect_header(r, header, "edges", 2);
  const long long n = parse_count(r, header, 1, "vertex count");
  const long long count = parse_count(r, header, 2, "edge count");
  if (n < 1) r.fail(header.number, "graph needs at least one vertex");
  RationalMatrix m = RationalMatrix::Zero(n, n);
  std::set<std::pair<long long, long long>> seen;
  for (long long e = 0; e < count; ++e) {
    const Line& line = r.take("edge");
    if (line.tokens.size() != 2) r.fail(line.number, "edge line needs two vertices");
    const long long u = parse_count(r, line, 0, "vertex");
    const long long v = parse_count(r, line, 1, "vertex");
    if (u < 1 || u > n || v < 1 || v > n) r.fail(line.number, "vertex out of range 1.." + std::to_string(n));
    if (u == v) r.fail(line.number, "loop at vertex " + std::to_string(u));
    if (!seen.insert(std::minmax(u, v)).second)
      r.fail(line.number, "duplicate edge " + std::to_string(u) + " " + std::to_string(v));
    m(u - 1, v - 1) = 1;
    m(v - 1, u - 1) = 1;
  }
  return real_matrix(std::move(m));
}

ExactMatrix read_square_block(LineReader& r, const Line& header) {
  expect_header(r, header, "matrix", 1);
  const long long n = parse_count(r, header, 1, "order");
  if (n < 1) r.fail(header.number, "matrix order must be positive");
  return read_rows(r, n, n, "matrix");
}

void expect_end(const LineReader& r) {
  if (!r.done()) r.fail(r.peek().number, "trailing content '" + r.peek().tokens[0] + "'");
}

// GMP reads a leading 0 as an octal prefix, so strip it first.
boost::multiprecision::mpz_int decimal_integer(std::string_view digits) {
  const std::size_t first = digits.find_first_not_of('0');
  if (first == std::string_view::npos) return 0;
  return boost::multiprecision::mpz_int(std::string(digits.substr(first)));
}

bool is_integer_token(const std::string& t) {
  return !t.empty() && t.find_first_of("./ieE") == std::string::npos;
}

}  // namespace

bool ExactMatrix::is_real() const { return im.isZero(); }

ComplexMatrix ExactMatrix::to_complex() const {
  ComplexMatrix out(re.rows(), re.cols());
  for (Index i = 0; i < re.rows(); ++i)
    for (Index j = 0; j < re.cols(); ++j) out(i, j) = {to_double(re(i, j)), to_double(im(i, j))};
  return out;
}

Rational parse_rational(std::string_view token) {
  auto bad = [&]() -> Error { return Error(Errc::parse, "bad number '" + std::string(token) + "'"); };
  if (token.empty()) throw bad();

  if (auto slash = token.find('/'); slash != std::string_view::npos) {
    const Rational num = parse_rational(token.substr(0, slash));
    const std::string_view den_text = token.substr(slash + 1);
    if (den_text.empty() || den_text.find_first_not_of("0123456789") != std::string_view::npos ||
        boost::multiprecision::denominator(num) != 1)
      throw bad();
    const Rational den{decimal_integer(den_text)};
    if (den == 0) throw Error(Errc::parse, "zero denominator in '" + std::string(token) + "'");
    return num / den;
  }

  std::size_t pos = 0;
  bool negative = false;
  if (token[pos] == '+' || token[pos] == '-') negative = token[pos++] == '-';
  std::string digits;
  long long scale = 0;
  bool any_digit = false;
  for (; pos < token.size() && token[pos] >= '0' && token[pos] <= '9'; ++pos, any_digit = true)
    digits += token[pos];
  if (pos < token.size() && token[pos] == '.') {
    for (++pos; pos < token.size() && token[pos] >= '0' && token[pos] <= '9'; ++pos, any_digit = true) {
      digits += token[pos];
      --scale;
    }
  }
  if (!any_digit) throw bad();
  if (pos < token.size() && (token[pos] == 'e' || token[pos] == 'E')) {
    const std::string_view exp = token.substr(pos + 1);
    long long e = 0;
    const char* first = exp.data();
    if (!exp.empty() && exp[0] == '+') ++first;
    auto [end, ec] = std::from_chars(first, exp.data() + exp.size(), e);
    if (ec != std::errc() || end != exp.data() + exp.size() || e > 4096 || e < -4096) throw bad();
    scale += e;
    pos = token.size();
  }
  if (pos != token.size()) throw bad();

  Rational value{decimal_integer(digits)};
  const Rational ten(10);
  for (; scale > 0; --scale) value *= ten;
  for (; scale < 0; ++scale) value /= ten;
  return negative ? Rational(-value) : value;
}

ExactScalar parse_scalar(std::string_view token) {
  if (token.empty()) throw Error(Errc::parse, "empty number");
  if (token.back() != 'i') return {parse_rational(token), Rational(0)};

  const std::string_view body = token.substr(0, token.size() - 1);
  // Split at the last sign that is neither leading nor part of an exponent.
  std::size_t split = 0;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  const std::string_view real_text = body.substr(0, split);
  std::string_view imag_text = body.substr(split);
  ExactScalar out{Rational(0), Rational(0)};
  if (!real_text.empty()) out.re = parse_rational(real_text);
  if (imag_text.empty() || imag_text == "+")
    out.im = 1;
  else if (imag_text == "-")
    out.im = -1;
  else
    out.im = parse_rational(imag_text);
  return out;
}

std::string format(const Rational& x) { return x.str(); }

std::string format(const ExactScalar& x) {
  if (x.im == 0) return format(x.re);
  std::string out = x.re == 0 ? std::string() : format(x.re);
  if (x.im == 1) return out + (out.empty() ? "i" : "+i");
  if (x.im == -1) return out + "-i";
  if (x.im > 0 && !out.empty()) out += '+';
  return out + format(x.im) + "i";
}

std::string format(const Complex& x, double zero) {
  auto shortest = [](double v) {
    if (v == 0.0) v = 0.0;  // drop negative zero
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
  };
  const double im = std::abs(x.imag()) <= zero ? 0.0 : x.imag();
  if (im == 0.0) return shortest(x.real());
  std::string out = shortest(x.real());
  if (im > 0) out += '+';
  return out + shortest(im) + "i";
}

ExactMatrix read_matrix_text(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  const Line& header = r.take("'matrix' or 'edges' header");
  ExactMatrix m = header.tokens[0] == "edges" ? read_edges(r, header) : read_square_block(r, header);
  expect_end(r);
  return m;
}

Graph read_graph(std::istream& in, const std::string& source) {
  ExactMatrix m = read_matrix_text(in, source);
  if (!m.is_real()) throw Error(Errc::parse, source + ": graph entries must be real");
  return Graph(std::move(m.re));
}

Graph read_graph_file(const std::string& path) {
  std::ifstream in = open_input(path);
  return read_graph(in, path);
}

ExactMatrix read_matrix_file(const std::string& path) {
  std::ifstream in = open_input(path);
  return read_matrix_text(in, path);
}

std::vector<ExactMatrix> read_factor_list_file(const std::string& path) {
  std::ifstream in = open_input(path);
  LineReader r(in, path);
  std::vector<ExactMatrix> out;
  while (!r.done()) {
    const Line& header = r.take("factor header");
    const std::string& kind = header.tokens[0];
    if (kind == "matrix") {
      out.push_back(read_square_block(r, header));
    } else if (kind == "edges") {
      out.push_back(read_edges(r, header));
    } else if (kind == "identity" || kind == "unity") {
      expect_header(r, header, kind, 1);
      const long long n = parse_count(r, header, 1, "order");
      if (n < 1) r.fail(header.number, "order must be positive");
      out.push_back(real_matrix(kind == "identity" ? identity<Rational>(n) : unity<Rational>(n)));
    } else {
      r.fail(header.number, "unknown factor header '" + kind + "'");
    }
  }
  if (out.empty()) throw Error(Errc::parse, path + ": no factors");
  return out;
}

ColoringFile read_coloring_file(const std::string& path) {
  std::ifstream in = open_input(path);
  LineReader r(in, path);
  if (r.done()) throw Error(Errc::parse, path + ": empty coloring");
  const std::vector<Line>& lines = r.lines();

  bool fractional = lines.front().tokens.size() == 1 && lines.front().tokens[0] == "fractional";
  std::size_t first = fractional ? 1 : 0;
  if (!fractional) {
    bool uniform = lines.size() > 1 && lines.front().tokens.size() > 1;
    for (const Line& line : lines) {
      uniform = uniform && line.tokens.size() == lines.front().tokens.size();
      for (const std::string& t : line.tokens) fractional = fractional || !is_integer_token(t);
    }
    fractional = fractional || uniform;
  }

  ColoringFile out;
  if (!fractional) {
    std::vector<int> colors;
    for (const Line& line : lines)
      for (std::size_t t = 0; t < line.tokens.size(); ++t) {
        const long long c = parse_count(r, line, t, "color");
        if (c < 1) r.fail(line.number, "colors start at 1");
        colors.push_back(static_cast<int>(c - 1));
      }
    try {
      out.coloring.emplace(std::move(colors));
    } catch (const Error& e) {
      throw Error(Errc::parse, path + ": " + e.what());
    }
    return out;
  }

  if (first >= lines.size()) throw Error(Errc::parse, path + ": no weight rows");
  const std::size_t k = lines[first].tokens.size();
  RationalMatrix w(static_cast<Index>(lines.size() - first), static_cast<Index>(k));
  for (std::size_t i = first; i < lines.size(); ++i) {
    if (lines[i].tokens.size() != k)
      r.fail(lines[i].number, "weight row has " + std::to_string(lines[i].tokens.size()) +
                                  " entries, expected " + std::to_string(k));
    for (std::size_t j = 0; j < k; ++j) {
      ExactScalar x = scalar_at(r, lines[i], j);
      if (x.im != 0) r.fail(lines[i].number, "weights must be real");
      w(static_cast<Index>(i - first), static_cast<Index>(j)) = std::move(x.re);
    }
  }
  try {
    out.fractional.emplace(std::move(w));
  } catch (const Error& e) {
    throw Error(Errc::parse, path + ": " + e.what());
  }
  return out;
}

StructureFile read_structure_file(const std::string& path) {
  std::ifstream in = open_input(path);
  LineReader r(in, path);
  const Line& header = r.take("'structure' header");
  expect_header(r, header, "structure", 2);
  const long long n = parse_count(r, header, 1, "row count");
  const long long k = parse_count(r, header, 2, "column count");
  if (n < 1 || k < 1) r.fail(header.number, "structure dimensions must be positive");
  StructureFile out{read_rows(r, n, k, "structure"), std::nullopt};
  if (!r.done()) {
    const Line& params = r.take("'parameters' header");
    expect_header(r, params, "parameters", 1);
    if (parse_count(r, params, 1, "order") != k)
      r.fail(params.number, "parameter matrix must be " + std::to_string(k) + " x " + std::to_string(k));
    out.parameters = read_rows(r, k, k, "parameters");
  }
  expect_end(r);
  return out;
}

std::vector<ExactScalar> read_vector_file(const std::string& path) {
  std::ifstream in = open_input(path);
  LineReader r(in, path);
  std::vector<ExactScalar> out;
  std::optional<long long> declared;
  for (const Line& line : r.lines()) {
    std::size_t t = 0;
    if (line.tokens[0] == "vector") {
      if (declared || !out.empty()) r.fail(line.number, "'vector' header must come first");
      expect_header(r, line, "vector", 1);
      declared = parse_count(r, line, 1, "length");
      continue;
    }
    for (; t < line.tokens.size(); ++t) out.push_back(scalar_at(r, line, t));
  }
  if (out.empty()) throw Error(Errc::parse, path + ": empty vector");
  if (declared && *declared != static_cast<long long>(out.size()))
    throw Error(Errc::parse, path + ": header declares " + std::to_string(*declared) + " entries, found " +
                                 std::to_string(out.size()));
  return out;
}

ExactMatrix read_grid_file(const std::string& path) {
  std::ifstream in = open_input(path);
  LineReader r(in, path);
  const Line& header = r.take("'grid' header");
  expect_header(r, header, "grid", 2);
  const long long m = parse_count(r, header, 1, "row count");
  const long long l = parse_count(r, header, 2, "column count");
  if (m < 1 || l < 1) r.fail(header.number, "grid dimensions must be positive");
  ExactMatrix grid = read_rows(r, m, l, "grid");
  expect_end(r);
  return grid;
}

void write_matrix(std::ostream& out, const RationalMatrix& m, std::string_view header) {
  out << header << ' ' << m.rows();
  if (header == "structure" || header == "grid") out << ' ' << m.cols();
  out << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << format(m(i, j));
    out << '\n';
  }
}

void write_graph(std::ostream& out, const Graph& g) { write_matrix(out, g.adjacency()); }

void write_coloring(std::ostream& out, const Coloring& c) {
  for (int color : c.colors()) out << color + 1 << '\n';
}

void write_graph_file(const std::string& path, const Graph& g) {
  std::ofstream out = open_output(path);
  write_graph(out, g);
}

void write_coloring_file(const std::string& path, const Coloring& c) {
  std::ofstream out = open_output(path);
  write_coloring(out, c);
}

void write_matrix_file(const std::string& path, const RationalMatrix& m) {
  std::ofstream out = open_output(path);
  write_matrix(out, m);
}

}  // namespace perfect::io
