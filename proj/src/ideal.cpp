#include "icore/ideal.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <variant>

#include "icore/error.hpp"

namespace icore {

namespace ideal_detail {

struct FinNode {};
struct DensityNode {
  double theta;
  double burn_in;
};
struct PringsheimNode {
  double theta;
};
struct DoubleDensityNode {
  double theta;
  double burn_in;
};
struct ProductNode {
  FiniteIdealModel rows;
  FiniteIdealModel sections;
};
struct TransposeNode {
  FiniteIdealModel base;
};

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace ideal_detail

using namespace ideal_detail;

struct FiniteIdealModel::Node {
  std::variant<FinNode, DensityNode, PringsheimNode, DoubleDensityNode, ProductNode,
               TransposeNode>
      kind;
  Arity arity;
};

namespace {

using Node = FiniteIdealModel::Node;

std::size_t fin_tail_start(std::size_t n) { return n / 2; }

std::size_t density_start(double burn_in, std::size_t n) {
  return static_cast<std::size_t>(std::floor(burn_in * static_cast<double>(n)));
}

std::size_t corner_start(double fraction, std::size_t m) {
  auto b = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(m)));
  return std::clamp<std::size_t>(b, 1, m);
}

void check_single_bounds(std::span<const std::size_t> idx, std::size_t n) {
  for (auto i : idx)
    if (i < 1 || i > n)
      throw ParameterError("index " + std::to_string(i) + " outside [1," + std::to_string(n) +
                           "]");
}

void check_dual_bounds(std::span<const IndexPair> idx, std::size_t m) {
  for (auto p : idx)
    if (p.row < 1 || p.row > m || p.col < 1 || p.col > m)
      throw ParameterError("index pair outside [1," + std::to_string(m) + "]^2");
}

bool small_single_list(const Node& node, std::span<const std::size_t> idx, std::size_t n);
bool small_dual_list(const Node& node, std::span<const IndexPair> idx, std::size_t m);

bool small_single_list(const Node& node, std::span<const std::size_t> idx, std::size_t n) {
  if (const auto* d = std::get_if<DensityNode>(&node.kind)) {
    const std::size_t start = density_start(d->burn_in, n);
    const auto hits = std::count_if(idx.begin(), idx.end(), [&](auto i) { return i > start; });
    return static_cast<double>(hits) < d->theta * static_cast<double>(n - start);
  }
  // Fin
  const std::size_t start = fin_tail_start(n);
  return std::none_of(idx.begin(), idx.end(), [&](auto i) { return i > start; });
}

bool small_single_pred(const Node& node, const IndexSet& set, std::size_t n) {
  if (const auto* d = std::get_if<DensityNode>(&node.kind)) {
    const std::size_t start = density_start(d->burn_in, n);
    std::size_t hits = 0;
    for (std::size_t i = start + 1; i <= n; ++i) hits += set.contains(i) ? 1 : 0;
    return static_cast<double>(hits) < d->theta * static_cast<double>(n - start);
  }
  for (std::size_t i = fin_tail_start(n) + 1; i <= n; ++i)
    if (set.contains(i)) return false;
  return true;
}

bool small_dual_list(const Node& node, std::span<const IndexPair> idx, std::size_t m) {
  return std::visit(
      [&](const auto& k) -> bool {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, PringsheimNode>) {
          const std::size_t b = corner_start(k.theta, m);
          return std::none_of(idx.begin(), idx.end(),
                              [&](auto p) { return p.row >= b && p.col >= b; });
        } else if constexpr (std::is_same_v<K, DoubleDensityNode>) {
          const std::size_t b = corner_start(k.burn_in, m);
          const auto hits = std::count_if(idx.begin(), idx.end(),
                                          [&](auto p) { return p.row >= b && p.col >= b; });
          const double side = static_cast<double>(m - b + 1);
          return static_cast<double>(hits) < k.theta * side * side;
        } else if constexpr (std::is_same_v<K, ProductNode>) {
          std::vector<IndexPair> sorted(idx.begin(), idx.end());
          std::sort(sorted.begin(), sorted.end());
          std::vector<std::size_t> bad_rows;
          std::vector<std::size_t> section;
          for (std::size_t lo = 0; lo < sorted.size();) {
            std::size_t hi = lo;
            section.clear();
            while (hi < sorted.size() && sorted[hi].row == sorted[lo].row)
              section.push_back(sorted[hi++].col);
            if (!small_single_list(k.sections.node(), section, m))
              bad_rows.push_back(sorted[lo].row);
            lo = hi;
          }
          return small_single_list(k.rows.node(), bad_rows, m);
        } else if constexpr (std::is_same_v<K, TransposeNode>) {
          std::vector<IndexPair> swapped;
          swapped.reserve(idx.size());
          for (auto p : idx) swapped.push_back({p.col, p.row});
          return small_dual_list(k.base.node(), swapped, m);
        } else {
          throw ParameterError("single-arity model applied to a double index set");
        }
      },
      node.kind);
}

bool small_dual_pred(const Node& node, const IndexSet2& set, std::size_t m) {
  return std::visit(
      [&](const auto& k) -> bool {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, PringsheimNode>) {
          const std::size_t b = corner_start(k.theta, m);
          for (std::size_t n = b; n <= m; ++n)
            for (std::size_t c = b; c <= m; ++c)
              if (set.contains(n, c)) return false;
          return true;
        } else if constexpr (std::is_same_v<K, DoubleDensityNode>) {
          const std::size_t b = corner_start(k.burn_in, m);
          std::size_t hits = 0;
          for (std::size_t n = b; n <= m; ++n)
            for (std::size_t c = b; c <= m; ++c) hits += set.contains(n, c) ? 1 : 0;
          const double side = static_cast<double>(m - b + 1);
          return static_cast<double>(hits) < k.theta * side * side;
        } else if constexpr (std::is_same_v<K, ProductNode>) {
          std::vector<std::size_t> bad_rows;
          for (std::size_t row = 1; row <= m; ++row) {
            auto section =
                IndexSet::from_predicate([&set, row](std::size_t c) { return set.contains(row, c); });
            if (!k.sections.is_small(section, m)) bad_rows.push_back(row);
          }
          return small_single_list(k.rows.node(), bad_rows, m);
        } else if constexpr (std::is_same_v<K, TransposeNode>) {
          return k.base.is_small(set.transposed(), m);
        } else {
          throw ParameterError("single-arity model applied to a double index set");
        }
      },
      node.kind);
}

FiniteIdealModel make(Node node) {
  return FiniteIdealModel(std::make_shared<const Node>(std::move(node)));
}

void check_fraction(double v, double lo, double hi, const char* what) {
  if (!(v > lo && v < hi))
    throw ParameterError(std::string(what) + " must lie in (" + format_number(lo) + ", " +
                         format_number(hi) + "), got " + format_number(v));
}

}  // namespace

// ---------------------------------------------------------------------------
// Index sets

IndexSet::IndexSet() : pred_([](std::size_t) { return false; }) {
  list_ = std::make_shared<const std::vector<std::size_t>>();
}

IndexSet IndexSet::from_predicate(Predicate pred) {
  IndexSet s;
  s.pred_ = std::move(pred);
  s.list_.reset();
  return s;
}

IndexSet IndexSet::from_list(std::vector<std::size_t> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  IndexSet s;
  auto list = std::make_shared<const std::vector<std::size_t>>(std::move(indices));
  s.pred_ = [list](std::size_t n) { return std::binary_search(list->begin(), list->end(), n); };
  s.list_ = std::move(list);
  return s;
}

IndexSet2::IndexSet2() : pred_([](std::size_t, std::size_t) { return false; }) {
  list_ = std::make_shared<const std::vector<IndexPair>>();
}

IndexSet2 IndexSet2::from_predicate(Predicate pred) {
  IndexSet2 s;
  s.pred_ = std::move(pred);
  s.list_.reset();
  return s;
}

IndexSet2 IndexSet2::from_list(std::vector<IndexPair> pairs) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  IndexSet2 s;
  auto list = std::make_shared<const std::vector<IndexPair>>(std::move(pairs));
  s.pred_ = [list](std::size_t n, std::size_t m) {
    return std::binary_search(list->begin(), list->end(), IndexPair{n, m});
  };
  s.list_ = std::move(list);
  return s;
}

IndexSet2 IndexSet2::transposed() const {
  if (list_) {
    std::vector<IndexPair> swapped;
    swapped.reserve(list_->size());
    for (auto p : *list_) swapped.push_back({p.col, p.row});
    return from_list(std::move(swapped));
  }
  auto pred = pred_;
  return from_predicate([pred](std::size_t n, std::size_t m) { return pred(m, n); });
}

// ---------------------------------------------------------------------------
// Models

FiniteIdealModel::FiniteIdealModel(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Arity FiniteIdealModel::arity() const { return node_->arity; }

std::string FiniteIdealModel::name() const {
  return std::visit(
      [](const auto& k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, FinNode>) {
          return "fin";
        } else if constexpr (std::is_same_v<K, DensityNode>) {
          std::string s = "density(" + format_number(k.theta);
          if (k.burn_in != kDefaultDensityBurnIn) s += "," + format_number(k.burn_in);
          return s + ")";
        } else if constexpr (std::is_same_v<K, PringsheimNode>) {
          return "pringsheim(" + format_number(k.theta) + ")";
        } else if constexpr (std::is_same_v<K, DoubleDensityNode>) {
          std::string s = "double-density(" + format_number(k.theta);
          if (k.burn_in != kDefaultDoubleDensityBurnIn) s += "," + format_number(k.burn_in);
          return s + ")";
        } else if constexpr (std::is_same_v<K, ProductNode>) {
          return "product(" + k.rows.name() + "," + k.sections.name() + ")";
        } else {
          return "transpose(" + k.base.name() + ")";
        }
      },
      node_->kind);
}

bool FiniteIdealModel::is_small(const IndexSet& set, std::size_t n) const {
  if (arity() != Arity::single)
    throw ParameterError("model '" + name() + "' is double-arity; got a single index set");
  if (n == 0) throw ParameterError("scale must be >= 1");
  if (set.has_list()) {
    check_single_bounds(set.list(), n);
    return small_single_list(*node_, set.list(), n);
  }
  return small_single_pred(*node_, set, n);
}

bool FiniteIdealModel::is_small(const IndexSet2& set, std::size_t m) const {
  if (arity() != Arity::dual)
    throw ParameterError("model '" + name() + "' is single-arity; got a double index set");
  if (m == 0) throw ParameterError("scale must be >= 1");
  if (set.has_list()) {
    check_dual_bounds(set.list(), m);
    return small_dual_list(*node_, set.list(), m);
  }
  return small_dual_pred(*node_, set, m);
}

bool FiniteIdealModel::is_small_flat(std::span<const std::size_t> flat,
                                     const WindowShape& shape) const {
  if (shape.arity != arity())
    throw ParameterError("window arity does not match model '" + name() + "'");
  if (shape.scale == 0) throw ParameterError("scale must be >= 1");
  const std::size_t total = shape.size();
  if (shape.arity == Arity::single) {
    std::vector<std::size_t> idx;
    idx.reserve(flat.size());
    for (auto i : flat) {
      if (i >= total) throw ParameterError("flat index outside window");
      idx.push_back(i + 1);
    }
    return small_single_list(*node_, idx, shape.scale);
  }
  std::vector<IndexPair> idx;
  idx.reserve(flat.size());
  for (auto i : flat) {
    if (i >= total) throw ParameterError("flat index outside window");
    idx.push_back({i / shape.scale + 1, i % shape.scale + 1});
  }
  return small_dual_list(*node_, idx, shape.scale);
}

FiniteIdealModel make_fin() { return make(Node{FinNode{}, Arity::single}); }

FiniteIdealModel make_density_zero(double theta, double burn_in) {
  check_fraction(theta, 0.0, 1.0, "density threshold");
  if (!(burn_in >= 0.0 && burn_in < 1.0))
    throw ParameterError("burn-in fraction must lie in [0, 1)");
  return make(Node{DensityNode{theta, burn_in}, Arity::single});
}

FiniteIdealModel make_pringsheim(double theta_p) {
  check_fraction(theta_p, 0.0, 0.5, "Pringsheim threshold");
  return make(Node{PringsheimNode{theta_p}, Arity::dual});
}

FiniteIdealModel make_double_density(double theta, double burn_in) {
  check_fraction(theta, 0.0, 1.0, "double density threshold");
  if (!(burn_in > 0.0 && burn_in < 1.0))
    throw ParameterError("burn-in fraction must lie in (0, 1)");
  return make(Node{DoubleDensityNode{theta, burn_in}, Arity::dual});
}

FiniteIdealModel fubini_product(const FiniteIdealModel& i, const FiniteIdealModel& j) {
  if (i.arity() != Arity::single || j.arity() != Arity::single)
    throw ParameterError("Fubini product needs two single-arity models");
  return make(Node{ProductNode{i, j}, Arity::dual});
}

FiniteIdealModel transpose(const FiniteIdealModel& i) {
  if (i.arity() != Arity::dual) throw ParameterError("transpose needs a double-arity model");
  // transpose(transpose(I)) is I itself
  if (const auto* t = std::get_if<TransposeNode>(&i.node().kind)) return t->base;
  return make(Node{TransposeNode{i}, Arity::dual});
}

FiniteIdealModel make_e_ideal() { return transpose(fubini_product(make_fin(), make_fin())); }

// ---------------------------------------------------------------------------
// Spec parsing

namespace {

class IdealParser {
 public:
  explicit IdealParser(std::string_view text) : text_(text) {}

  FiniteIdealModel parse() {
    auto model = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters");
    return model;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParameterError("ideal spec '" + std::string(text_) + "': " + what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
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
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '-' ||
            text_[pos_] == '_'))
      ++pos_;
    if (start == pos_) fail("expected a model name");
    return std::string(text_.substr(start, pos_ - start));
  }

  double number() {
    skip_ws();
    double v = 0.0;
    auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (res.ec != std::errc()) fail("expected a number");
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    return v;
  }

  std::vector<double> numbers() {
    std::vector<double> out;
    if (!consume('(')) return out;
    out.push_back(number());
    while (consume(',')) out.push_back(number());
    expect(')');
    return out;
  }

  FiniteIdealModel expr() {
    const std::string id = identifier();
    if (id == "fin" || id == "Fin") {
      return make_fin();
    }
    if (id == "density" || id == "Z") {
      auto a = numbers();
      if (a.size() > 2) fail("density takes at most two parameters");
      return make_density_zero(a.size() > 0 ? a[0] : kDefaultDensityTheta,
                               a.size() > 1 ? a[1] : kDefaultDensityBurnIn);
    }
    if (id == "pringsheim" || id == "IP") {
      auto a = numbers();
      if (a.size() > 1) fail("pringsheim takes one parameter");
      return make_pringsheim(a.empty() ? kDefaultPringsheimTheta : a[0]);
    }
    if (id == "double-density" || id == "ZP") {
      auto a = numbers();
      if (a.size() > 2) fail("double-density takes at most two parameters");
      return make_double_density(a.size() > 0 ? a[0] : kDefaultDensityTheta,
                                 a.size() > 1 ? a[1] : kDefaultDoubleDensityBurnIn);
    }
    if (id == "Ie" || id == "e") {
      return make_e_ideal();
    }
    if (id == "product") {
      expect('(');
      auto i = expr();
      expect(',');
      auto j = expr();
      expect(')');
      return fubini_product(i, j);
    }
    if (id == "transpose") {
      expect('(');
      auto i = expr();
      expect(')');
      return transpose(i);
    }
    fail("unknown model '" + id + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

FiniteIdealModel parse_ideal(std::string_view spec) { return IdealParser(spec).parse(); }

}  // namespace icore
