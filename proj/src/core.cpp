#include "icore/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "icore/error.hpp"

namespace icore {

std::string to_string(Construction c) {
  switch (c) {
    case Construction::support: return "support";
    case Construction::cluster_hull: return "cluster_hull";
    case Construction::ball: return "ball";
  }
  return "?";
}

std::string to_string(CoreState s) {
  switch (s) {
    case CoreState::ok: return "ok";
    case CoreState::empty: return "empty";
    case CoreState::unbounded: return "unbounded";
  }
  return "?";
}

std::size_t CoreParams::direction_count(std::size_t k) const {
  return directions ? directions : default_direction_count(k);
}

ClusterOptions CoreParams::cluster_options() const {
  ClusterOptions o;
  o.eps_final = eps_final;
  o.rounds = rounds;
  o.bound = bound;
  o.box = box;
  o.exec = exec;
  return o;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

void check_params(const CoreParams& params) {
  if (!(params.delta > 0.0) || !std::isfinite(params.delta))
    throw ParameterError("delta must be > 0");
  if (!(params.eps_final > 0.0) || !std::isfinite(params.eps_final))
    throw ParameterError("eps_final must be > 0");
}

// Bounded check: throws when enabled, otherwise reports the state.
CoreState bounded_state(const SequenceWindow& x, const FiniteIdealModel& ideal,
                        const CoreParams& params) {
  if (params.bound) {
    require_ideal_bounded(x, ideal, *params.bound);
    return CoreState::ok;
  }
  return is_ideal_bounded(x, ideal, kDefaultBound) ? CoreState::ok : CoreState::unbounded;
}

CoreReport blank_report(const SequenceWindow& x, const FiniteIdealModel& ideal,
                        Construction c, const CoreParams& params) {
  CoreReport r;
  r.model = ideal.name();
  r.construction = c;
  r.params = params;
  r.scale = x.scale();
  r.dim = x.dim();
  r.result = Polytope::empty(x.dim());
  return r;
}

// Window bounding box center and diagonal, restricted to the box if given.
std::pair<Point, double> window_extent(const SequenceWindow& x, const CoreParams& params) {
  const std::size_t k = x.dim();
  Point lo(k, std::numeric_limits<double>::infinity());
  Point hi(k, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto p = x.point(i);
    if (params.box) {
      bool inside = true;
      for (std::size_t a = 0; a < k; ++a)
        if (p[a] < params.box->first[a] || p[a] > params.box->second[a]) inside = false;
      if (!inside) continue;
    }
    for (std::size_t a = 0; a < k; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  }
  Point c(k, 0.0);
  double diag = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    if (!(lo[a] <= hi[a])) return {Point(k, 0.0), 1.0};
    c[a] = 0.5 * (lo[a] + hi[a]);
    diag += (hi[a] - lo[a]) * (hi[a] - lo[a]);
  }
  diag = std::sqrt(diag);
  return {c, diag > 0.0 ? diag : 1.0};
}

std::vector<double> ball_radii(const SequenceWindow& x, const FiniteIdealModel& ideal,
                               const std::vector<Point>& centers, double delta, Execution exec) {
  std::vector<double> radii(centers.size(), 0.0);
  for_each_index(centers.size(), exec, [&](std::size_t j) {
    std::vector<double> d(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) d[i] = dist(x.point(i), centers[j]);
    radii[j] = limsup_of_values(d, x.shape(), ideal, delta);
  });
  return radii;
}

}  // namespace

double support_offset(const SequenceWindow& x, const FiniteIdealModel& ideal,
                      std::span<const double> u, double delta) {
  const auto proj = x.projection(u);
  return limsup_of_values(proj, x.shape(), ideal, delta);
}

std::vector<Halfspace> support_halfspaces_reference(const SequenceWindow& x,
                                                    const FiniteIdealModel& ideal,
                                                    const std::vector<Point>& directions,
                                                    double delta) {
  std::vector<Halfspace> hs;
  for (const auto& u : directions) {
    const auto proj = x.projection(u);
    hs.push_back({u, limsup_by_grid_scan(proj, x.shape(), ideal, delta)});
  }
  return hs;
}

std::vector<Halfspace> support_halfspaces(const SequenceWindow& x, const FiniteIdealModel& ideal,
                                          const std::vector<Point>& directions, double delta,
                                          Execution exec) {
  std::vector<Halfspace> hs(directions.size());
  for_each_index(directions.size(), exec, [&](std::size_t i) {
    hs[i] = {directions[i], support_offset(x, ideal, directions[i], delta)};
  });
  return hs;
}

CoreReport core_by_support(const SequenceWindow& x, const FiniteIdealModel& ideal,
                           const CoreParams& params) {
  check_params(params);
  auto report = blank_report(x, ideal, Construction::support, params);
  report.state = bounded_state(x, ideal, params);
  const std::size_t k = x.dim();
  auto hs = support_halfspaces(x, ideal, direction_set(k, params.direction_count(k)),
                               params.delta, params.exec);
  auto poly = Polytope::from_halfspaces(k, hs);
  for (std::size_t round = 0; k >= 2 && round < params.refine_rounds && !poly.is_empty(); ++round) {
    // One new direction per vertex: the mean of its active normals.
    std::vector<Point> fresh;
    std::vector<Point> at;
    double scale = 1.0;
    for (const auto& v : poly.vertices())
      for (double c : v) scale = std::max(scale, std::abs(c));
    for (const auto& v : poly.vertices()) {
      Point w(k, 0.0);
      for (const auto& h : poly.halfspaces())
        if (dot(h.u, v) >= h.b - 1e-9 * scale)
          for (std::size_t a = 0; a < k; ++a) w[a] += h.u[a];
      const double n = std::sqrt(dot(w, w));
      if (!(n > 1e-12)) continue;
      for (double& c : w) c /= n;
      bool known = false;
      for (const auto& h : hs)
        if (dot(h.u, w) > 1.0 - 1e-12) known = true;
      for (const auto& f : fresh)
        if (dot(f, w) > 1.0 - 1e-12) known = true;
      if (known) continue;
      fresh.push_back(std::move(w));
      at.push_back(v);
    }
    if (fresh.empty()) break;
    auto extra = support_halfspaces(x, ideal, fresh, params.delta, params.exec);
    bool added = false;
    for (std::size_t i = 0; i < extra.size(); ++i)
      if (dot(extra[i].u, at[i]) > extra[i].b + params.delta) {
        hs.push_back(std::move(extra[i]));
        added = true;
      }
    if (!added) break;
    poly = Polytope::from_halfspaces(k, hs);
  }
  report.sample_count = hs.size();
  report.result = std::move(poly);
  if (report.result.is_empty() && report.state == CoreState::ok) report.state = CoreState::empty;
  return report;
}

CoreReport core_from_clusters(const ClusterSet& clusters, const CoreParams& params) {
  CoreReport r;
  r.model = clusters.model;
  r.construction = Construction::cluster_hull;
  r.params = params;
  r.scale = clusters.scale;
  r.dim = clusters.dim;
  r.sample_count = clusters.points.size();
  if (clusters.points.empty()) {
    r.result = Polytope::empty(clusters.dim);
    r.state = CoreState::empty;
    return r;
  }
  r.result = Polytope::from_points(clusters.points, params.direction_count(clusters.dim));
  return r;
}

CoreReport core_by_cluster_hull(const SequenceWindow& x, const FiniteIdealModel& ideal,
                                const CoreParams& params) {
  check_params(params);
  const auto state = bounded_state(x, ideal, params);
  auto r = core_from_clusters(estimate_clusters(x, ideal, params.cluster_options()), params);
  if (state == CoreState::unbounded) r.state = state;
  return r;
}

bool BallFamily::contains(std::span<const double> p, std::size_t* witness) const {
  for (std::size_t i = 0; i < centers.size(); ++i)
    if (dist(p, centers[i]) > radii[i] + delta) {
      if (witness) *witness = i;
      return false;
    }
  return true;
}

double BallFamily::excess(std::span<const double> p) const {
  double e = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < centers.size(); ++i) e = std::max(e, dist(p, centers[i]) - radii[i]);
  return e;
}

BallFamily make_ball_family(const SequenceWindow& x, const FiniteIdealModel& ideal,
                            const CoreParams& params, const std::vector<Point>& extra) {
  check_params(params);
  const std::size_t k = x.dim();
  BallFamily family;
  family.dim = k;
  family.delta = params.delta;
  const auto [c, diam] = window_extent(x, params);
  family.origin = c;
  family.reach = 1e4 * diam;
  const auto dirs = direction_set(k, params.centers ? params.centers : params.direction_count(k));
  for (double reach : {1e4 * diam, 2.0 * diam})
    for (const auto& u : dirs) {
      Point y(k);
      for (std::size_t a = 0; a < k; ++a) y[a] = c[a] - reach * u[a];
      family.centers.push_back(std::move(y));
    }
  const std::size_t want = std::min(params.window_centers, x.size());
  for (std::size_t j = 0; j < want; ++j) {
    const auto p = x.point(x.size() - 1 - j * (x.size() / want));
    family.centers.emplace_back(p.begin(), p.end());
  }
  for (const auto& e : extra) {
    if (e.size() != k) throw ParameterError("extra center dimension mismatch");
    family.centers.push_back(e);
  }
  family.radii = ball_radii(x, ideal, family.centers, params.delta, params.exec);
  return family;
}

std::size_t refine_ball_family(BallFamily& family, const SequenceWindow& x,
                               const FiniteIdealModel& ideal, const Polytope& current,
                               Execution exec) {
  const std::size_t k = family.dim;
  if (k < 2 || current.is_empty() || !current.has_vertices()) return 0;
  double scale = 1.0;
  for (const auto& v : current.vertices())
    for (double c : v) scale = std::max(scale, std::abs(c));
  std::vector<Point> fresh;
  std::vector<Point> at;
  for (const auto& v : current.vertices()) {
    Point w(k, 0.0);
    for (const auto& h : current.halfspaces())
      if (dot(h.u, v) >= h.b - 1e-9 * scale)
        for (std::size_t a = 0; a < k; ++a) w[a] += h.u[a];
    const double n = std::sqrt(dot(w, w));
    if (!(n > 1e-12)) continue;
    Point y(k);
    for (std::size_t a = 0; a < k; ++a) y[a] = family.origin[a] - family.reach * w[a] / n;
    bool known = false;
    for (const auto& c : family.centers)
      if (dist(c, y) < 1e-9 * family.reach) known = true;
    for (const auto& c : fresh)
      if (dist(c, y) < 1e-9 * family.reach) known = true;
    if (known) continue;
    fresh.push_back(std::move(y));
    at.push_back(v);
  }
  const auto radii = ball_radii(x, ideal, fresh, family.delta, exec);
  std::size_t added = 0;
  for (std::size_t i = 0; i < fresh.size(); ++i)
    if (dist(at[i], fresh[i]) > radii[i] + 2.0 * family.delta) {
      family.centers.push_back(std::move(fresh[i]));
      family.radii.push_back(radii[i]);
      ++added;
    }
  return added;
}

BallMembership core_membership_by_balls(const SequenceWindow& x, const FiniteIdealModel& ideal,
                                        std::span<const double> p, const CoreParams& params) {
  if (p.size() != x.dim()) throw ParameterError("point dimension does not match the window");
  bounded_state(x, ideal, params);
  const auto family = make_ball_family(x, ideal, params);
  BallMembership out;
  std::size_t w = 0;
  out.inside = family.contains(p, &w);
  if (!out.inside) {
    out.witness = family.centers[w];
    out.witness_radius = family.radii[w];
  }
  return out;
}

Polytope ball_core_polytope(const BallFamily& family) {
  if (family.centers.empty()) throw ParameterError("ball family has no centers");
  const std::size_t k = family.dim;
  // Far balls enter through their supporting halfspaces facing the origin.
  std::vector<Halfspace> hs;
  for (std::size_t j = 0; j < family.centers.size(); ++j) {
    const auto& y = family.centers[j];
    const double d = dist(family.origin, y);
    if (d < 0.5 * family.reach) continue;
    Halfspace h{Point(k), 0.0};
    for (std::size_t a = 0; a < k; ++a) h.u[a] = (family.origin[a] - y[a]) / d;
    h.b = dot(h.u, y) + family.radii[j] + family.delta;
    hs.push_back(std::move(h));
  }
  if (hs.empty()) throw ParameterError("ball family has no far centers");
  return Polytope::from_halfspaces(k, std::move(hs));
}

CoreReport core_by_balls(const SequenceWindow& x, const FiniteIdealModel& ideal,
                         const CoreParams& params) {
  check_params(params);
  auto report = blank_report(x, ideal, Construction::ball, params);
  report.state = bounded_state(x, ideal, params);
  const auto family = make_ball_family(x, ideal, params);
  report.sample_count = family.centers.size();
  auto family_ = family;
  auto poly = ball_core_polytope(family_);
  for (std::size_t round = 0; x.dim() >= 2 && round < params.refine_rounds && !poly.is_empty();
       ++round) {
    if (refine_ball_family(family_, x, ideal, poly, params.exec) == 0) break;
    poly = ball_core_polytope(family_);
  }
  report.sample_count = family_.centers.size();
  report.result = std::move(poly);
  if (report.result.is_empty() && report.state == CoreState::ok) report.state = CoreState::empty;
  return report;
}

namespace {

// Exact LP verdict, except that points within rounding distance of the
// hull are accepted with the nearest-point weights.
std::vector<double> hull_weights(std::span<const double> p, const ClusterSet& clusters) {
  if (clusters.points.empty()) throw ParameterError("empty cluster set");
  auto hm = hull_membership(p, clusters.points);
  if (hm.inside) return hm.weights;
  double scale = 1.0;
  for (const auto& q : clusters.points)
    for (double c : q) scale = std::max(scale, std::abs(c));
  auto near = nearest_in_hull(p, clusters.points);
  if (near.distance <= 1e-12 * scale) return near.weights;
  Halfspace h = *hm.separator;
  for (double& c : h.u) c = -c;
  h.b = -h.b;
  throw NonMembershipError("point lies outside the hull of the cluster set", std::move(h));
}

ConvexCombination from_weights(const ClusterSet& clusters, const std::vector<double>& w) {
  ConvexCombination combo;
  for (std::size_t j = 0; j < w.size(); ++j)
    if (w[j] > 0.0) {
      combo.supports.push_back(clusters.points[j]);
      combo.weights.push_back(w[j]);
    }
  return combo;
}

}  // namespace

ConvexCombination caratheodory_decompose(std::span<const double> p, const ClusterSet& clusters) {
  return reduce_to_affinely_independent(p, from_weights(clusters, hull_weights(p, clusters)));
}

ConvexCombination choquet_measure(std::span<const double> p, const ClusterSet& clusters,
                                  std::size_t spread, std::uint64_t seed) {
  std::vector<double> total = hull_weights(p, clusters);
  const std::size_t n = clusters.points.size(), k = p.size();
  std::size_t used = 1;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t s = 1; s < spread; ++s) {
    LinearProgram lp;
    lp.num_vars = n;
    for (std::size_t j = 0; j < n; ++j) lp.objective.push_back(unit(rng));
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<double> row(n);
      for (std::size_t j = 0; j < n; ++j) row[j] = clusters.points[j][i];
      lp.add_row(std::move(row), Sense::equal, p[i]);
    }
    lp.add_row(std::vector<double>(n, 1.0), Sense::equal, 1.0);
    const auto sol = lp_solve(lp);
    if (sol.status != LpStatus::optimal) continue;
    for (std::size_t j = 0; j < n; ++j) total[j] += std::max(0.0, sol.x[j]);
    ++used;
  }
  for (double& w : total) w /= static_cast<double>(used);
  return from_weights(clusters, total);
}

bool is_valid_measure(std::span<const double> p, const ConvexCombination& measure, double tol) {
  if (measure.supports.size() != measure.weights.size() || measure.supports.empty()) return false;
  for (double w : measure.weights)
    if (!(w >= 0.0)) return false;
  return reconstruction_error(p, measure) <= tol;
}

std::optional<Point> is_ideal_convergent(const SequenceWindow& x, const FiniteIdealModel& ideal,
                                         double tol, const CoreParams& params) {
  if (!(tol >= 0.0)) throw ParameterError("tolerance must be >= 0");
  const auto report = core_by_support(x, ideal, params);
  if (report.result.is_empty() || report.result.diameter() > tol) return std::nullopt;
  const auto [lo, hi] = report.result.bounding_box();
  Point mid(lo.size());
  for (std::size_t a = 0; a < lo.size(); ++a) mid[a] = 0.5 * (lo[a] + hi[a]);
  return mid;
}

}  // namespace icore
