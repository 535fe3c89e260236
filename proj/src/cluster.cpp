#include "icore/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "icore/error.hpp"

namespace icore {

using CellKey = std::vector<long long>;

double CellGrid::eps(std::size_t level) const { return std::ldexp(eps0, -static_cast<int>(level)); }

Point CellGrid::center(std::span<const long long> m, std::size_t level) const {
  const double e = eps(level);
  Point c(origin.size());
  for (std::size_t a = 0; a < c.size(); ++a) c[a] = origin[a] + e * static_cast<double>(m[a]);
  return c;
}

bool CellGrid::covers(std::span<const long long> m, std::size_t level,
                      std::span<const double> x) const {
  const double e = eps(level);
  for (std::size_t a = 0; a < origin.size(); ++a)
    if (!(std::abs(x[a] - (origin[a] + e * static_cast<double>(m[a]))) <= e)) return false;
  return true;
}

namespace {

using Buckets = std::map<CellKey, std::vector<std::size_t>>;

// Level 0 centers sit on even m, finer levels on odd m.
bool right_parity(long long m, std::size_t level) {
  const bool odd = (m % 2) != 0;
  return level == 0 ? !odd : odd;
}

Buckets bucket_points(const SequenceWindow& x, const CellGrid& grid, std::size_t level) {
  const std::size_t k = x.dim();
  const double e = grid.eps(level);
  Buckets buckets;
  std::vector<std::vector<long long>> axis(k);
  CellKey key(k);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto p = x.point(i);
    bool any = true;
    for (std::size_t a = 0; a < k; ++a) {
      axis[a].clear();
      const double v = (p[a] - grid.origin[a]) / e;
      if (!std::isfinite(v) || std::abs(v) > 4e18) {
        any = false;
        break;
      }
      const auto base = static_cast<long long>(std::floor(v));
      for (long long m = base - 1; m <= base + 2; ++m)
        if (right_parity(m, level) &&
            std::abs(p[a] - (grid.origin[a] + e * static_cast<double>(m))) <= e)
          axis[a].push_back(m);
      if (axis[a].empty()) {
        any = false;
        break;
      }
    }
    if (!any) continue;
    // Cartesian product of the per-axis candidates (one entry except on
    // cell boundaries).
    std::vector<std::size_t> pos(k, 0);
    while (true) {
      for (std::size_t a = 0; a < k; ++a) key[a] = axis[a][pos[a]];
      buckets[key].push_back(i);
      std::size_t a = 0;
      while (a < k && ++pos[a] == axis[a].size()) pos[a++] = 0;
      if (a == k) break;
    }
  }
  return buckets;
}

std::vector<CellKey> initial_cells(const CellGrid& grid, const Point& lo, const Point& hi) {
  const std::size_t k = lo.size();
  std::vector<long long> reach(k);
  for (std::size_t a = 0; a < k; ++a)
    reach[a] = static_cast<long long>(std::ceil(0.5 * (hi[a] - lo[a]) / (2.0 * grid.eps0)));
  std::vector<CellKey> cells;
  CellKey j(k);
  for (std::size_t a = 0; a < k; ++a) j[a] = -reach[a];
  while (true) {
    CellKey m(k);
    for (std::size_t a = 0; a < k; ++a) m[a] = 2 * j[a];
    cells.push_back(std::move(m));
    std::size_t a = 0;
    for (; a < k && ++j[a] > reach[a]; ++a) j[a] = -reach[a];
    if (a == k) break;
  }
  return cells;
}

// Children of every survivor plus a one-cell halo at the child level.
std::vector<CellKey> refine(const std::vector<CellKey>& survivors, std::size_t k) {
  std::set<CellKey> next;
  std::size_t children = std::size_t{1} << k;
  std::size_t halo = 1;
  for (std::size_t a = 0; a < k; ++a) halo *= 3;
  CellKey child(k), cell(k);
  for (const auto& s : survivors)
    for (std::size_t c = 0; c < children; ++c) {
      for (std::size_t a = 0; a < k; ++a) child[a] = 2 * s[a] + (((c >> a) & 1) ? 1 : -1);
      for (std::size_t h = 0; h < halo; ++h) {
        std::size_t t = h;
        for (std::size_t a = 0; a < k; ++a) {
          cell[a] = child[a] + 2 * (static_cast<long long>(t % 3) - 1);
          t /= 3;
        }
        next.insert(cell);
      }
    }
  return {next.begin(), next.end()};
}

struct SearchBox {
  Point lo, hi;
  bool empty = false;
};

SearchBox search_box(const SequenceWindow& x, const ClusterOptions& options) {
  const std::size_t k = x.dim();
  SearchBox box{Point(k, std::numeric_limits<double>::infinity()),
                Point(k, -std::numeric_limits<double>::infinity())};
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto p = x.point(i);
    if (options.box) {
      bool inside = true;
      for (std::size_t a = 0; a < k; ++a)
        if (p[a] < options.box->first[a] || p[a] > options.box->second[a]) inside = false;
      if (!inside) continue;
    }
    for (std::size_t a = 0; a < k; ++a) {
      box.lo[a] = std::min(box.lo[a], p[a]);
      box.hi[a] = std::max(box.hi[a], p[a]);
    }
  }
  for (std::size_t a = 0; a < k; ++a)
    if (!(box.lo[a] <= box.hi[a])) box.empty = true;
  return box;
}

void check_options(const SequenceWindow& x, const ClusterOptions& options) {
  if (!(options.eps_final > 0.0) || !std::isfinite(options.eps_final))
    throw ParameterError("eps_final must be > 0");
  if (options.box) {
    if (options.box->first.size() != x.dim() || options.box->second.size() != x.dim())
      throw ParameterError("box dimension does not match the window");
    for (std::size_t a = 0; a < x.dim(); ++a)
      if (!(options.box->first[a] <= options.box->second[a]))
        throw ParameterError("box lower corner exceeds upper corner");
  }
}

template <class TestCells>
ClusterSet refine_clusters(const SequenceWindow& x, const FiniteIdealModel& ideal,
                           const ClusterOptions& options, TestCells&& test) {
  check_options(x, options);
  if (options.bound) require_ideal_bounded(x, ideal, *options.bound);
  ClusterSet out;
  out.dim = x.dim();
  out.scale = x.scale();
  out.model = ideal.name();
  out.radius = options.eps_final;
  const auto box = search_box(x, options);
  if (box.empty) return out;
  const std::size_t k = x.dim();
  CellGrid grid;
  grid.origin.resize(k);
  double extent = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    grid.origin[a] = 0.5 * (box.lo[a] + box.hi[a]);
    extent = std::max(extent, box.hi[a] - box.lo[a]);
  }
  grid.eps0 = std::max(extent / 8.0, options.eps_final);

  std::size_t level = 0;
  auto cells = initial_cells(grid, box.lo, box.hi);
  auto keep = [&](const std::vector<CellKey>& batch) {
    const auto large = test(grid, level, batch);
    std::vector<CellKey> s;
    for (std::size_t c = 0; c < batch.size(); ++c)
      if (large[c]) s.push_back(batch[c]);
    return s;
  };
  auto survivors = keep(cells);
  for (std::size_t round = 0;
       round < options.rounds && grid.eps(level) > options.eps_final && !survivors.empty(); ++round) {
    cells = refine(survivors, k);
    ++level;
    survivors = keep(cells);
  }
  out.radius = grid.eps(level);
  for (const auto& s : survivors) out.points.push_back(grid.center(s, level));
  return out;
}

}  // namespace

std::vector<std::vector<std::size_t>> cell_hits_scan(const SequenceWindow& x, const CellGrid& grid,
                                                     std::size_t level,
                                                     const std::vector<CellKey>& cells) {
  std::vector<std::vector<std::size_t>> hits(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (std::size_t i = 0; i < x.size(); ++i)
      if (grid.covers(cells[c], level, x.point(i))) hits[c].push_back(i);
  return hits;
}

std::vector<std::vector<std::size_t>> cell_hits_bucketed(const SequenceWindow& x,
                                                         const CellGrid& grid, std::size_t level,
                                                         const std::vector<CellKey>& cells,
                                                         Execution exec) {
  const auto buckets = bucket_points(x, grid, level);
  std::vector<std::vector<std::size_t>> hits(cells.size());
  for_each_index(cells.size(), exec, [&](std::size_t c) {
    auto it = buckets.find(cells[c]);
    if (it != buckets.end()) hits[c] = it->second;
  });
  return hits;
}

ClusterSet estimate_clusters(const SequenceWindow& x, const FiniteIdealModel& ideal,
                             const ClusterOptions& options) {
  return refine_clusters(x, ideal, options,
                         [&](const CellGrid& grid, std::size_t level,
                             const std::vector<CellKey>& cells) {
                           const auto buckets = bucket_points(x, grid, level);
                           std::vector<char> large(cells.size(), 0);
                           const std::vector<std::size_t> none;
                           for_each_index(cells.size(), options.exec, [&](std::size_t c) {
                             auto it = buckets.find(cells[c]);
                             const auto& hits = it == buckets.end() ? none : it->second;
                             large[c] = !ideal.is_small_flat(hits, x.shape());
                           });
                           return large;
                         });
}

ClusterSet estimate_clusters_reference(const SequenceWindow& x, const FiniteIdealModel& ideal,
                                       const ClusterOptions& options) {
  return refine_clusters(x, ideal, options,
                         [&](const CellGrid& grid, std::size_t level,
                             const std::vector<CellKey>& cells) {
                           const auto hits = cell_hits_scan(x, grid, level, cells);
                           std::vector<char> large(cells.size(), 0);
                           for (std::size_t c = 0; c < cells.size(); ++c)
                             large[c] = !ideal.is_small_flat(hits[c], x.shape());
                           return large;
                         });
}

bool is_cluster_point(const SequenceWindow& x, const FiniteIdealModel& ideal,
                      std::span<const double> p, double eps, std::optional<double> bound) {
  if (p.size() != x.dim()) throw ParameterError("point dimension does not match the window");
  if (!(eps > 0.0)) throw ParameterError("eps must be > 0");
  if (bound) require_ideal_bounded(x, ideal, *bound);
  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto q = x.point(i);
    bool inside = true;
    for (std::size_t a = 0; a < p.size(); ++a)
      if (!(std::abs(q[a] - p[a]) <= eps)) inside = false;
    if (inside) hits.push_back(i);
  }
  return !ideal.is_small_flat(hits, x.shape());
}

}  // namespace icore
