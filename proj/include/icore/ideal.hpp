#ifndef ICORE_IDEAL_HPP
#define ICORE_IDEAL_HPP

// Finite-scale models of ideals on the positive integers and on pairs of
// positive integers. A model answers one question: is a given index set
// "small" when only the window [1,N] (or [1,M]^2) is observed?

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace icore {

enum class Arity { single, dual };

struct IndexPair {
  std::size_t row = 0;
  std::size_t col = 0;

  friend bool operator==(const IndexPair&, const IndexPair&) = default;
  friend auto operator<=>(const IndexPair&, const IndexPair&) = default;
};

// Shape of an observed window: scale N for single sequences, side M for
// double sequences on [1,M]^2.
struct WindowShape {
  Arity arity = Arity::single;
  std::size_t scale = 0;

  std::size_t size() const { return arity == Arity::single ? scale : scale * scale; }
};

// Subset of [1,N]. Either a membership predicate, or an explicit sorted
// list (the predicate is then a binary search over the list).
class IndexSet {
 public:
  using Predicate = std::function<bool(std::size_t)>;

  IndexSet();
  static IndexSet from_predicate(Predicate pred);
  static IndexSet from_list(std::vector<std::size_t> indices);

  bool contains(std::size_t n) const { return pred_(n); }
  bool has_list() const { return list_ != nullptr; }
  const std::vector<std::size_t>& list() const { return *list_; }

 private:
  Predicate pred_;
  std::shared_ptr<const std::vector<std::size_t>> list_;
};

// Subset of [1,M]^2, same two representations as IndexSet. Lists are kept
// in row-major order.
class IndexSet2 {
 public:
  using Predicate = std::function<bool(std::size_t, std::size_t)>;

  IndexSet2();
  static IndexSet2 from_predicate(Predicate pred);
  static IndexSet2 from_list(std::vector<IndexPair> pairs);

  bool contains(std::size_t n, std::size_t m) const { return pred_(n, m); }
  bool has_list() const { return list_ != nullptr; }
  const std::vector<IndexPair>& list() const { return *list_; }

  // {(n,m) : (m,n) in this}
  IndexSet2 transposed() const;

 private:
  Predicate pred_;
  std::shared_ptr<const std::vector<IndexPair>> list_;
};

// Immutable handle to a finite ideal model; cheap to copy and safe to share
// between threads.
class FiniteIdealModel {
 public:
  struct Node;

  Arity arity() const;

  // Canonical spec string, parseable by parse_ideal().
  std::string name() const;

  bool is_small(const IndexSet& set, std::size_t n) const;
  bool is_small(const IndexSet2& set, std::size_t m) const;

  // Indices are 0-based flat positions inside a window of the given shape:
  // i <-> n = i+1 for single windows, i <-> (i/M + 1, i%M + 1) for double.
  // Order is irrelevant; duplicates are tolerated.
  bool is_small_flat(std::span<const std::size_t> flat, const WindowShape& shape) const;

  const Node& node() const { return *node_; }

  explicit FiniteIdealModel(std::shared_ptr<const Node> node);

 private:
  std::shared_ptr<const Node> node_;
};

// Default thresholds.
inline constexpr double kDefaultDensityTheta = 0.05;
inline constexpr double kDefaultDensityBurnIn = 0.5;
inline constexpr double kDefaultPringsheimTheta = 0.1;
inline constexpr double kDefaultDoubleDensityBurnIn = 0.1;

// A small at N iff A misses the tail (floor(N/2), N].
FiniteIdealModel make_fin();

// A small at N iff |A ∩ (N0, N]| / (N - N0) < theta, N0 = floor(burn_in * N).
FiniteIdealModel make_density_zero(double theta = kDefaultDensityTheta,
                                   double burn_in = kDefaultDensityBurnIn);

// A small at M iff A misses the corner [b,M]^2, b = ceil(theta_p * M).
FiniteIdealModel make_pringsheim(double theta_p = kDefaultPringsheimTheta);

// A small at M iff |A ∩ [b,M]^2| / (M-b+1)^2 < theta, b = ceil(burn_in * M).
FiniteIdealModel make_double_density(double theta = kDefaultDensityTheta,
                                     double burn_in = kDefaultDoubleDensityBurnIn);

// A small iff the rows whose section is not J-small form an I-small set.
FiniteIdealModel fubini_product(const FiniteIdealModel& i, const FiniteIdealModel& j);

// A small iff A^T is small under the argument.
FiniteIdealModel transpose(const FiniteIdealModel& i);

// transpose(fubini_product(fin, fin)), the e-convergence ideal.
FiniteIdealModel make_e_ideal();

// Grammar:
//   fin | density[(theta[,burn])] | pringsheim[(theta)] |
//   double-density[(theta[,burn])] | product(I,J) | transpose(I)
// plus the aliases Z, IP, ZP, Ie.
FiniteIdealModel parse_ideal(std::string_view spec);

}  // namespace icore

#endif  // ICORE_IDEAL_HPP
