#ifndef ICORE_CLUSTER_HPP
#define ICORE_CLUSTER_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "icore/ideal.hpp"
#include "icore/parallel.hpp"
#include "icore/scalar_limits.hpp"
#include "icore/sequence.hpp"

namespace icore {

inline constexpr double kDefaultEpsFinal = 1e-2;
inline constexpr std::size_t kDefaultRounds = 16;

struct ClusterOptions {
  double eps_final = kDefaultEpsFinal;
  std::size_t rounds = kDefaultRounds;
  std::optional<double> bound = kDefaultBound;
  // Restrict the search to a box, e.g. for unbounded windows.
  std::optional<std::pair<Point, Point>> box;
  Execution exec = Execution::parallel;
};

// Cell centers whose closed l-infinity ball of radius `radius` catches a
// non-small index set.
struct ClusterSet {
  std::size_t dim = 0;
  std::vector<Point> points;
  double radius = 0.0;
  std::size_t scale = 0;
  std::string model;
};

// Grid of l-infinity cells: level-L centers are origin + eps_L * m for
// integer vectors m, eps_L = eps0 / 2^L, every cell a cube of half-side eps_L.
struct CellGrid {
  Point origin;
  double eps0 = 0.0;

  double eps(std::size_t level) const;
  Point center(std::span<const long long> m, std::size_t level) const;
  // Closed test |x - center|_inf <= eps_L.
  bool covers(std::span<const long long> m, std::size_t level, std::span<const double> x) const;
};

// Hit lists for a batch of cells. The scan version tests every point
// against every cell; the bucketed version assigns each point to the cells
// that contain it and runs the cells in parallel when asked.
std::vector<std::vector<std::size_t>> cell_hits_scan(const SequenceWindow& x, const CellGrid& grid,
                                                     std::size_t level,
                                                     const std::vector<std::vector<long long>>& cells);
std::vector<std::vector<std::size_t>> cell_hits_bucketed(
    const SequenceWindow& x, const CellGrid& grid, std::size_t level,
    const std::vector<std::vector<long long>>& cells, Execution exec);

ClusterSet estimate_clusters(const SequenceWindow& x, const FiniteIdealModel& ideal,
                             const ClusterOptions& options = {});

// Same refinement, every round tested with cell_hits_scan.
ClusterSet estimate_clusters_reference(const SequenceWindow& x, const FiniteIdealModel& ideal,
                                       const ClusterOptions& options = {});

bool is_cluster_point(const SequenceWindow& x, const FiniteIdealModel& ideal,
                      std::span<const double> p, double eps,
                      std::optional<double> bound = kDefaultBound);

}  // namespace icore

#endif  // ICORE_CLUSTER_HPP
