#include "icore/sequence.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "icore/error.hpp"

namespace icore {

// ---------------------------------------------------------------------------
// SequenceWindow

SequenceWindow::SequenceWindow(std::size_t dim, WindowShape shape, std::vector<double> coords,
                               std::string source)
    : dim_(dim), shape_(shape), coords_(std::move(coords)), source_(std::move(source)) {
  if (dim_ == 0) throw ParameterError("window dimension must be >= 1");
  if (shape_.scale == 0) throw ParameterError("window scale must be >= 1");
  if (coords_.size() != shape_.size() * dim_)
    throw ParameterError("window holds " + std::to_string(coords_.size()) +
                         " coordinates, expected " + std::to_string(shape_.size() * dim_));
  for (std::size_t i = 0; i < coords_.size(); ++i)
    if (!std::isfinite(coords_[i]))
      throw ParameterError("non-finite coordinate at flat index " + std::to_string(i / dim_));
}

std::span<const double> SequenceWindow::at(std::size_t n) const {
  if (arity() != Arity::single) throw ParameterError("at(n) on a double window");
  if (n < 1 || n > scale()) throw ParameterError("index outside window");
  return point(n - 1);
}

std::span<const double> SequenceWindow::at(std::size_t n, std::size_t m) const {
  if (arity() != Arity::dual) throw ParameterError("at(n,m) on a single window");
  if (n < 1 || n > scale() || m < 1 || m > scale()) throw ParameterError("index outside window");
  return point((n - 1) * scale() + (m - 1));
}

std::vector<double> SequenceWindow::projection(std::span<const double> u) const {
  if (u.size() != dim_) throw ParameterError("projection direction has wrong dimension");
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double s = 0.0;
    for (std::size_t a = 0; a < dim_; ++a) s += u[a] * coords_[i * dim_ + a];
    out[i] = s;
  }
  return out;
}

std::vector<double> SequenceWindow::component(std::size_t axis) const {
  if (axis >= dim_) throw ParameterError("component axis out of range");
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = coords_[i * dim_ + axis];
  return out;
}

SequenceWindow SequenceWindow::with_coords(std::vector<double> coords, std::string source) const {
  return SequenceWindow(dim_, shape_, std::move(coords), std::move(source));
}

// ---------------------------------------------------------------------------
// Generator spec parsing

namespace {

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

class GeneratorParser {
 public:
  explicit GeneratorParser(std::string_view text) : text_(text) {}

  GeneratorSpec parse() {
    GeneratorSpec spec;
    spec.name = identifier();
    if (peek('(')) arguments(spec);
    while (consume('+')) {
      const std::string noise = identifier();
      expect('(');
      spec.noise.amplitude = number();
      expect(',');
      const double seed = number();
      expect(')');
      if (seed < 0 || seed != std::floor(seed)) fail("noise seed must be a non-negative integer");
      spec.noise.seed = static_cast<std::uint64_t>(seed);
      if (noise == "noise")
        spec.noise.kind = NoiseKind::uniform;
      else if (noise == "decay_noise")
        spec.noise.kind = NoiseKind::decay;
      else if (noise == "sparse_noise")
        spec.noise.kind = NoiseKind::sparse;
      else
        fail("unknown noise '" + noise + "'");
      if (!(spec.noise.amplitude >= 0.0) || !std::isfinite(spec.noise.amplitude))
        fail("noise amplitude must be finite and >= 0");
    }
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters");
    return spec;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParameterError("generator spec '" + std::string(text_) + "': " + what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool consume(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }

  std::string identifier() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (start == pos_) fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  double number() {
    skip_ws();
    double v = 0.0;
    const char* first = text_.data() + pos_;
    if (pos_ < text_.size() && text_[pos_] == '+') ++first;
    auto res = std::from_chars(first, text_.data() + text_.size(), v);
    if (res.ec != std::errc()) fail("expected a number");
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    return v;
  }

  Point tuple() {
    Point p;
    if (consume('(')) {
      p.push_back(number());
      while (consume(',')) p.push_back(number());
      expect(')');
    } else {
      p.push_back(number());
    }
    return p;
  }

  void arguments(GeneratorSpec& spec) {
    expect('(');
    if (spec.name == "sparse_spike") {
      spec.index_family = identifier();
    } else if (spec.name == "cycle" || spec.name == "dcycle") {
      spec.points.push_back(tuple());
      while (consume(',')) spec.points.push_back(tuple());
    } else {
      spec.params.push_back(number());
      while (consume(',')) spec.params.push_back(number());
    }
    expect(')');
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

bool in_family(const std::string& family, std::size_t n) {
  if (family == "squares") return is_perfect_square(n);
  if (family == "cubes") {
    auto c = static_cast<std::size_t>(std::llround(std::cbrt(static_cast<double>(n))));
    for (std::size_t r = (c > 0 ? c - 1 : 0); r <= c + 1; ++r)
      if (r * r * r == n) return true;
    return false;
  }
  // pow2
  return n != 0 && (n & (n - 1)) == 0;
}

std::size_t generator_dim(const GeneratorSpec& spec) {
  const std::string& n = spec.name;
  if (n == "const" || n == "dconst") return spec.params.size();
  if (n == "cycle" || n == "dcycle") return spec.points.front().size();
  return 1;
}

void validate(const GeneratorSpec& spec) {
  static const std::vector<std::string> single = {"alt",   "alt_decay",    "alt_linear",
                                                  "const", "sparse_spike", "cycle"};
  static const std::vector<std::string> dual = {"dalt",    "row_alt", "col_alt",
                                                "inv_sum", "dconst",  "dcycle"};
  const bool known = std::find(single.begin(), single.end(), spec.name) != single.end() ||
                     std::find(dual.begin(), dual.end(), spec.name) != dual.end();
  if (!known) throw ParameterError("unknown generator '" + spec.name + "'");
  const bool takes_params = spec.name == "const" || spec.name == "dconst";
  if (takes_params && spec.params.empty())
    throw ParameterError(spec.name + " needs at least one coordinate");
  if (!takes_params && !spec.params.empty())
    throw ParameterError(spec.name + " takes no numeric parameters");
  for (double v : spec.params)
    if (!std::isfinite(v)) throw ParameterError(spec.name + ": non-finite parameter");
  if (spec.name == "cycle" || spec.name == "dcycle") {
    if (spec.points.empty()) throw ParameterError(spec.name + " needs at least one point");
    for (const auto& p : spec.points) {
      if (p.size() != spec.points.front().size())
        throw ParameterError(spec.name + ": points have different dimensions");
      for (double v : p)
        if (!std::isfinite(v)) throw ParameterError(spec.name + ": non-finite point");
    }
  } else if (!spec.points.empty()) {
    throw ParameterError(spec.name + " takes no points");
  }
  if (spec.name == "sparse_spike") {
    const auto& f = spec.index_family;
    if (!f.empty() && f != "squares" && f != "cubes" && f != "pow2")
      throw ParameterError("sparse_spike family must be squares, cubes or pow2");
  } else if (!spec.index_family.empty()) {
    throw ParameterError(spec.name + " takes no index family");
  }
  if (spec.noise.kind != NoiseKind::none &&
      (!(spec.noise.amplitude >= 0.0) || !std::isfinite(spec.noise.amplitude)))
    throw ParameterError("noise amplitude must be finite and >= 0");
}

double sign_power(std::size_t e) { return (e % 2 == 0) ? 1.0 : -1.0; }

// Uniform on [-1, 1] from the top 53 bits; independent of the standard
// library's distribution implementation.
double symmetric_uniform(std::mt19937_64& rng) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

}  // namespace

GeneratorSpec parse_generator(std::string_view text) {
  auto spec = GeneratorParser(text).parse();
  validate(spec);
  return spec;
}

std::string to_string(const GeneratorSpec& spec) {
  std::string s = spec.name;
  if (!spec.index_family.empty()) s += "(" + spec.index_family + ")";
  if (!spec.params.empty()) {
    s += "(";
    for (std::size_t i = 0; i < spec.params.size(); ++i)
      s += (i ? "," : "") + format_number(spec.params[i]);
    s += ")";
  }
  if (!spec.points.empty()) {
    s += "(";
    for (std::size_t i = 0; i < spec.points.size(); ++i) {
      if (i) s += ",";
      const auto& p = spec.points[i];
      if (p.size() == 1) {
        s += format_number(p[0]);
      } else {
        s += "(";
        for (std::size_t a = 0; a < p.size(); ++a) s += (a ? "," : "") + format_number(p[a]);
        s += ")";
      }
    }
    s += ")";
  }
  switch (spec.noise.kind) {
    case NoiseKind::none:
      break;
    case NoiseKind::uniform:
      s += "+noise(";
      break;
    case NoiseKind::decay:
      s += "+decay_noise(";
      break;
    case NoiseKind::sparse:
      s += "+sparse_noise(";
      break;
  }
  if (spec.noise.kind != NoiseKind::none)
    s += format_number(spec.noise.amplitude) + "," + std::to_string(spec.noise.seed) + ")";
  return s;
}

bool is_double_generator(const GeneratorSpec& spec) {
  return spec.name == "dalt" || spec.name == "row_alt" || spec.name == "col_alt" ||
         spec.name == "inv_sum" || spec.name == "dconst" || spec.name == "dcycle";
}

bool is_perfect_square(std::size_t n) {
  auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r * r == n;
}

SequenceWindow generate(const GeneratorSpec& spec, std::size_t scale) {
  validate(spec);
  if (scale == 0) throw ParameterError("scale must be >= 1");
  const std::size_t k = generator_dim(spec);
  const bool dual = is_double_generator(spec);
  const WindowShape shape{dual ? Arity::dual : Arity::single, scale};
  const std::size_t count = shape.size();
  std::vector<double> coords(count * k, 0.0);
  const std::string family = spec.index_family.empty() ? "squares" : spec.index_family;
  const std::string& name = spec.name;

  for (std::size_t i = 0; i < count; ++i) {
    double* x = coords.data() + i * k;
    if (!dual) {
      const std::size_t n = i + 1;
      if (name == "alt") {
        x[0] = sign_power(n);
      } else if (name == "alt_decay") {
        x[0] = sign_power(n) + 1.0 / static_cast<double>(n);
      } else if (name == "alt_linear") {
        x[0] = sign_power(n) * static_cast<double>(n);
      } else if (name == "const") {
        std::copy(spec.params.begin(), spec.params.end(), x);
      } else if (name == "sparse_spike") {
        x[0] = in_family(family, n) ? 1.0 : 0.0;
      } else {  // cycle
        const auto& p = spec.points[(n - 1) % spec.points.size()];
        std::copy(p.begin(), p.end(), x);
      }
    } else {
      const std::size_t n = i / scale + 1;
      const std::size_t m = i % scale + 1;
      if (name == "dalt") {
        x[0] = sign_power(n + m);
      } else if (name == "row_alt") {
        x[0] = sign_power(n);
      } else if (name == "col_alt") {
        x[0] = sign_power(m);
      } else if (name == "inv_sum") {
        x[0] = 1.0 / static_cast<double>(n + m);
      } else if (name == "dconst") {
        std::copy(spec.params.begin(), spec.params.end(), x);
      } else {  // dcycle
        const auto& p = spec.points[(n + m) % spec.points.size()];
        std::copy(p.begin(), p.end(), x);
      }
    }
  }

  if (spec.noise.kind != NoiseKind::none) {
    std::mt19937_64 rng(spec.noise.seed);
    for (std::size_t i = 0; i < count; ++i) {
      double weight = spec.noise.amplitude;
      if (!dual) {
        const std::size_t n = i + 1;
        if (spec.noise.kind == NoiseKind::decay) weight /= std::sqrt(static_cast<double>(n));
        if (spec.noise.kind == NoiseKind::sparse && !is_perfect_square(n)) weight = 0.0;
      } else {
        const std::size_t n = i / scale + 1;
        const std::size_t m = i % scale + 1;
        if (spec.noise.kind == NoiseKind::decay)
          weight /= std::sqrt(static_cast<double>(std::min(n, m)));
        if (spec.noise.kind == NoiseKind::sparse && n != m) weight = 0.0;
      }
      for (std::size_t a = 0; a < k; ++a) coords[i * k + a] += weight * symmetric_uniform(rng);
    }
  }
  return SequenceWindow(k, shape, std::move(coords), to_string(spec));
}

SequenceWindow generate(std::string_view spec, std::size_t scale) {
  return generate(parse_generator(spec), scale);
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    auto field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    while (!field.empty() && std::isspace(static_cast<unsigned char>(field.front())))
      field.remove_prefix(1);
    while (!field.empty() && std::isspace(static_cast<unsigned char>(field.back())))
      field.remove_suffix(1);
    out.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_field(std::string_view field, std::size_t line) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size())
    throw ParseError(line, "cannot parse '" + std::string(field) + "' as a number");
  if (!std::isfinite(v)) throw ParseError(line, "non-finite value in row " + std::to_string(line));
  return v;
}

std::size_t parse_index(std::string_view field, std::size_t line) {
  std::size_t v = 0;
  auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size() || v == 0)
    throw ParseError(line, "bad 1-based index '" + std::string(field) + "'");
  return v;
}

}  // namespace

SequenceWindow ingest_csv(const std::filesystem::path& path, std::size_t dim, Arity arity) {
  if (dim == 0) throw ParameterError("dimension must be >= 1");
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open '" + path.string() + "'");

  std::vector<double> coords;
  std::vector<std::pair<IndexPair, std::size_t>> keyed;  // (n,m) -> row offset
  std::string raw;
  std::size_t line_no = 0;
  std::size_t rows = 0;
  const std::size_t width = arity == Arity::single ? dim : dim + 2;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') continue;
    auto fields = split_fields(line);
    if (fields.size() != width)
      throw ParseError(line_no, "expected " + std::to_string(width) + " fields, got " +
                                    std::to_string(fields.size()));
    if (arity == Arity::single) {
      for (auto f : fields) coords.push_back(parse_field(f, line_no));
    } else {
      IndexPair key{parse_index(fields[0], line_no), parse_index(fields[1], line_no)};
      keyed.push_back({key, coords.size()});
      for (std::size_t a = 2; a < fields.size(); ++a)
        coords.push_back(parse_field(fields[a], line_no));
    }
    ++rows;
  }
  if (rows == 0) throw ParseError(line_no, "no data rows in '" + path.string() + "'");

  if (arity == Arity::single)
    return SequenceWindow(dim, {Arity::single, rows}, std::move(coords), path.string());

  const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(rows))));
  if (side * side != rows)
    throw ParseError(line_no, "double window has " + std::to_string(rows) +
                                  " rows, not a complete square");
  std::vector<double> ordered(rows * dim);
  std::vector<char> seen(rows, 0);
  for (const auto& [key, offset] : keyed) {
    if (key.row > side || key.col > side)
      throw ParseError(line_no, "index (" + std::to_string(key.row) + "," +
                                    std::to_string(key.col) + ") outside [1," +
                                    std::to_string(side) + "]^2");
    const std::size_t flat = (key.row - 1) * side + (key.col - 1);
    if (seen[flat])
      throw ParseError(line_no, "duplicate index (" + std::to_string(key.row) + "," +
                                    std::to_string(key.col) + ")");
    seen[flat] = 1;
    std::copy_n(coords.begin() + static_cast<std::ptrdiff_t>(offset), dim,
                ordered.begin() + static_cast<std::ptrdiff_t>(flat * dim));
  }
  return SequenceWindow(dim, {Arity::dual, side}, std::move(ordered), path.string());
}

void export_csv(const SequenceWindow& window, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write '" + path.string() + "'");
  for (std::size_t i = 0; i < window.size(); ++i) {
    std::string row;
    if (window.arity() == Arity::dual)
      row = std::to_string(i / window.scale() + 1) + "," + std::to_string(i % window.scale() + 1) +
            ",";
    auto p = window.point(i);
    for (std::size_t a = 0; a < p.size(); ++a) row += (a ? "," : "") + format_number(p[a]);
    out << row << '\n';
  }
}

}  // namespace icore
