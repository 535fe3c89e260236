#ifndef ICORE_CORE_HPP
#define ICORE_CORE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "icore/cluster.hpp"
#include "icore/geometry.hpp"
#include "icore/ideal.hpp"
#include "icore/parallel.hpp"
#include "icore/scalar_limits.hpp"
#include "icore/sequence.hpp"

namespace icore {

enum class Construction { support, cluster_hull, ball };
enum class CoreState { ok, empty, unbounded };

std::string to_string(Construction c);
std::string to_string(CoreState s);

inline constexpr std::size_t kDefaultRefineRounds = 6;
inline constexpr std::size_t kDefaultWindowCenters = 64;

struct CoreParams {
  double delta = kDefaultDelta;
  double eps_final = kDefaultEpsFinal;
  std::size_t rounds = kDefaultRounds;
  // 0 selects default_direction_count(k).
  std::size_t directions = 0;
  // Extra directions added around polytope vertices that overshoot the
  // sampled support by more than delta.
  std::size_t refine_rounds = kDefaultRefineRounds;
  // Direction-based ball centers; 0 selects the direction count.
  std::size_t centers = 0;
  std::size_t window_centers = kDefaultWindowCenters;
  std::optional<double> bound = kDefaultBound;
  std::optional<std::pair<Point, Point>> box;
  Execution exec = Execution::parallel;

  std::size_t direction_count(std::size_t k) const;
  ClusterOptions cluster_options() const;
};

struct CoreReport {
  std::string model;
  Construction construction = Construction::support;
  CoreState state = CoreState::ok;
  Polytope result;
  CoreParams params;
  std::size_t scale = 0;
  std::size_t dim = 0;
  // Number of halfspaces / centers actually used.
  std::size_t sample_count = 0;
};

// Supporting offset in direction u: the I-limsup of <u, x_n>.
double support_offset(const SequenceWindow& x, const FiniteIdealModel& ideal,
                      std::span<const double> u, double delta);

CoreReport core_by_support(const SequenceWindow& x, const FiniteIdealModel& ideal,
                           const CoreParams& params = {});

// Like core_by_support but without adaptive refinement and with the
// offsets evaluated one direction at a time; used as the serial reference.
std::vector<Halfspace> support_halfspaces_reference(const SequenceWindow& x,
                                                    const FiniteIdealModel& ideal,
                                                    const std::vector<Point>& directions,
                                                    double delta);
std::vector<Halfspace> support_halfspaces(const SequenceWindow& x, const FiniteIdealModel& ideal,
                                          const std::vector<Point>& directions, double delta,
                                          Execution exec);

CoreReport core_by_cluster_hull(const SequenceWindow& x, const FiniteIdealModel& ideal,
                                const CoreParams& params = {});
CoreReport core_from_clusters(const ClusterSet& clusters, const CoreParams& params);

// Balls B(y, r(y)) with r(y) the I-limsup of |x_n - y|.
struct BallFamily {
  std::size_t dim = 0;
  double delta = 0.0;
  // Far centers sit at origin - reach * u.
  Point origin;
  double reach = 0.0;
  std::vector<Point> centers;
  std::vector<double> radii;

  // |p - y| <= r(y) + delta for every center; on failure the first
  // violated center is written to witness.
  bool contains(std::span<const double> p, std::size_t* witness = nullptr) const;
  // max over centers of |p - y| - r(y).
  double excess(std::span<const double> p) const;
};

// Centers: far and moderate offsets c - R u along the direction set, a
// stride sample of window points, and any extra centers supplied.
BallFamily make_ball_family(const SequenceWindow& x, const FiniteIdealModel& ideal,
                            const CoreParams& params, const std::vector<Point>& extra = {});

struct BallMembership {
  bool inside = false;
  std::optional<Point> witness;
  double witness_radius = 0.0;
};

BallMembership core_membership_by_balls(const SequenceWindow& x, const FiniteIdealModel& ideal,
                                        std::span<const double> p, const CoreParams& params = {});

// Adds a far center along the mean active normal at each vertex of
// `current` when that ball cuts the vertex by more than 2 * delta. Returns the number of centers added.
std::size_t refine_ball_family(BallFamily& family, const SequenceWindow& x,
                               const FiniteIdealModel& ideal, const Polytope& current,
                               Execution exec);

// Intersection of the supporting halfspaces of the far balls (centers at
// least reach/2 from the origin). Each contains its ball and differs from it
// by at most D^2 / (2 * reach) over the window extent D.
Polytope ball_core_polytope(const BallFamily& family);
CoreReport core_by_balls(const SequenceWindow& x, const FiniteIdealModel& ideal,
                         const CoreParams& params = {});

// At most k+1 cluster points with weights reconstructing p. Throws
// NonMembershipError when p is outside the hull.
ConvexCombination caratheodory_decompose(std::span<const double> p, const ClusterSet& clusters);

// Discrete probability measure on the cluster points with barycenter p:
// the average of `spread` LP vertex solutions under seeded objectives.
ConvexCombination choquet_measure(std::span<const double> p, const ClusterSet& clusters,
                                  std::size_t spread = 1, std::uint64_t seed = 0);

// Barycenter error of a measure; weights must be >= 0 and sum to 1.
bool is_valid_measure(std::span<const double> p, const ConvexCombination& measure, double tol);

// Center of the bounding box of core_by_support when its diameter is <= tol.
std::optional<Point> is_ideal_convergent(const SequenceWindow& x, const FiniteIdealModel& ideal,
                                         double tol, const CoreParams& params = {});

}  // namespace icore

#endif  // ICORE_CORE_HPP
