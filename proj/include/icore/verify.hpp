#ifndef ICORE_VERIFY_HPP
#define ICORE_VERIFY_HPP

// Invariant suite run per corpus item by `icore verify` and by the
// acceptance binary.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "icore/core.hpp"
#include "icore/corpus.hpp"

namespace icore {

struct VerifyOptions {
  double delta = kDefaultDelta;
  double eps_final = kDefaultEpsFinal;
  // 0 selects 3 * max(delta, eps_final).
  double tol_equiv = 0.0;
  // Grid step used for the probe comparison of ball and support membership.
  double probe_delta = 1e-3;
  std::size_t probes = 1000;
  std::size_t samples = 50;
  double perturb_amplitude = 5.0;
  std::uint64_t seed = 1;
  Execution exec = Execution::parallel;

  double equiv() const;
  CoreParams core_params() const;
};

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double limit = 0.0;
  std::string detail;
};

struct ItemAnalysis {
  SequenceWindow window;
  FiniteIdealModel ideal;
  CoreReport support;
  ClusterSet clusters;
  CoreReport cluster_hull;
  CoreReport ball;
};

ItemAnalysis analyze(const SequenceWindow& x, const FiniteIdealModel& ideal,
                     const VerifyOptions& options);

// Cell-centered grid over the bounding box of p inflated by 25%:
// 1000 points for k=1, 32^2 for k=2, 10^3 for k=3.
std::vector<Point> probe_grid(const Polytope& p, std::size_t count = 1000);

// Random convex combinations of random subsets of the points.
std::vector<Point> sample_hull_points(const std::vector<Point>& points, std::size_t count,
                                      std::uint64_t seed);

// Bounded noise added on a random part of an index set the model declares
// small: the first half for single windows, rows below ceil(M/10) for
// double windows.
struct Perturbation {
  SequenceWindow window;
  std::vector<std::size_t> support;
};
Perturbation perturb_on_small_set(const SequenceWindow& x, const FiniteIdealModel& ideal,
                                  double amplitude, std::uint64_t seed);

// Signed distance to the boundary of p: negative inside.
double boundary_distance(const Polytope& p, std::span<const double> z);

Check check_equivalence(const ItemAnalysis& a, const VerifyOptions& options);
Check check_probe_agreement(const ItemAnalysis& a, const VerifyOptions& options);
Check check_caratheodory(const ItemAnalysis& a, const VerifyOptions& options);
Check check_choquet(const ItemAnalysis& a, const VerifyOptions& options);
Check check_cluster_inclusion(const ItemAnalysis& a, const VerifyOptions& options);
Check check_perturbation(const ItemAnalysis& a, const VerifyOptions& options);

std::vector<Check> verify_item(const CorpusItem& item, const VerifyOptions& options);

}  // namespace icore

#endif  // ICORE_VERIFY_HPP
