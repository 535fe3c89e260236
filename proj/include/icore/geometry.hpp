#ifndef ICORE_GEOMETRY_HPP
#define ICORE_GEOMETRY_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "icore/error.hpp"
#include "icore/lp.hpp"
#include "icore/sequence.hpp"

namespace icore {

// {z : <u,z> <= b}, |u| = 1.
struct Halfspace {
  Point u;
  double b = 0.0;
};

class NonMembershipError : public Error {
 public:
  NonMembershipError(const std::string& what, Halfspace separator)
      : Error(what), separator_(std::move(separator)) {}
  const Halfspace& separator() const { return separator_; }

 private:
  Halfspace separator_;
};

// Deterministic quasi-uniform unit vectors: k=1 {+1,-1}; k=2 equally spaced
// angles; k=3 Fibonacci sphere; k>=4 an additive recurrence in the cube,
// normalized. For k>=3 the coordinate axes (both signs) are appended.
std::vector<Point> direction_set(std::size_t k, std::size_t count);
inline std::size_t default_direction_count(std::size_t k) { return 64 * k; }

// Convex polytope. For k <= 3 the vertex list is exact. For k > 3 a polytope
// built from points keeps the points as generators and one built from
// halfspaces keeps only the halfspaces; support values are then evaluated on
// demand.
class Polytope {
 public:
  static Polytope empty(std::size_t dim);
  // Halfspaces: exact edges for k <= 2, supporting halfspaces over
  // direction_set(k, directions) otherwise (0 picks the default count).
  static Polytope from_points(std::vector<Point> points, std::size_t directions = 0);
  // Must describe a bounded set. Offsets are tightened so every halfspace
  // touches the polytope.
  static Polytope from_halfspaces(std::size_t dim, std::vector<Halfspace> halfspaces);

  std::size_t dim() const { return dim_; }
  bool is_empty() const { return empty_; }
  bool has_vertices() const { return vertices_exact_; }
  // True when the halfspace list describes the set exactly.
  bool halfspaces_exact() const { return halfspaces_exact_; }
  const std::vector<Point>& vertices() const { return points_; }
  const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }

  double support(std::span<const double> u) const;
  bool contains(std::span<const double> p, double tol = 1e-9) const;
  double diameter() const;
  std::pair<Point, Point> bounding_box() const;

 private:
  std::size_t dim_ = 0;
  bool empty_ = true;
  bool vertices_exact_ = false;
  bool halfspaces_exact_ = false;
  std::vector<Point> points_;
  std::vector<Halfspace> halfspaces_;
};

// max_{s in S} <u, s>
double support_value(const std::vector<Point>& s, std::span<const double> u);

struct HullMembership {
  bool inside = false;
  // inside: convex weights, one per point of S, at most k+1 nonzero.
  std::vector<double> weights;
  // outside: <u,p> < b <= <u,s> for all s in S.
  std::optional<Halfspace> separator;
  double margin = 0.0;
  bool exact = false;
};

HullMembership hull_membership(std::span<const double> p, const std::vector<Point>& s,
                               Arithmetic arithmetic = Arithmetic::automatic);

// Wolfe's minimum-norm-point algorithm on S - p.
struct NearestPoint {
  double distance = 0.0;
  Point point;
  std::vector<double> weights;
};
NearestPoint nearest_in_hull(std::span<const double> p, const std::vector<Point>& s);
double point_to_hull_distance(std::span<const double> p, const std::vector<Point>& s);

// Vertex-to-hull distances for k <= 3, support-function gap over the default
// direction set otherwise.
double hausdorff_distance(const Polytope& a, const Polytope& b);
// sup_{z in a} dist(z, b)
double directed_hausdorff(const Polytope& a, const Polytope& b);

struct ConvexCombination {
  std::vector<Point> supports;
  std::vector<double> weights;
};

// Drops supports while they are affinely dependent, then refits the weights
// on the remaining affinely independent set.
ConvexCombination reduce_to_affinely_independent(std::span<const double> p,
                                                 ConvexCombination combo);

double reconstruction_error(std::span<const double> p, const ConvexCombination& combo);

}  // namespace icore

#endif  // ICORE_GEOMETRY_HPP
