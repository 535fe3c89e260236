#include "icore/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "icore/error.hpp"

namespace icore {

double VerifyOptions::equiv() const {
  return tol_equiv > 0.0 ? tol_equiv : 3.0 * std::max(delta, eps_final);
}

CoreParams VerifyOptions::core_params() const {
  CoreParams p;
  p.delta = delta;
  p.eps_final = eps_final;
  p.exec = exec;
  return p;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::string format(const char* fmt, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

Check make_check(std::string name, double value, double limit, std::string detail = {}) {
  Check c;
  c.name = std::move(name);
  c.value = value;
  c.limit = limit;
  c.passed = value <= limit;
  c.detail = std::move(detail);
  return c;
}

}  // namespace

ItemAnalysis analyze(const SequenceWindow& x, const FiniteIdealModel& ideal,
                     const VerifyOptions& options) {
  const auto params = options.core_params();
  auto support = core_by_support(x, ideal, params);
  auto clusters = estimate_clusters(x, ideal, params.cluster_options());
  auto hull = core_from_clusters(clusters, params);
  auto ball = core_by_balls(x, ideal, params);
  return ItemAnalysis{x, ideal, std::move(support), std::move(clusters), std::move(hull),
                      std::move(ball)};
}

std::vector<Point> probe_grid(const Polytope& p, std::size_t count) {
  if (p.is_empty()) return {};
  const std::size_t k = p.dim();
  const auto side = static_cast<std::size_t>(
      std::max(1.0, std::round(std::pow(static_cast<double>(count), 1.0 / static_cast<double>(k)))));
  auto [lo, hi] = p.bounding_box();
  for (std::size_t a = 0; a < k; ++a) {
    const double mid = 0.5 * (lo[a] + hi[a]);
    const double half = std::max(0.625 * (hi[a] - lo[a]), 0.5);
    lo[a] = mid - half;
    hi[a] = mid + half;
  }
  std::vector<Point> grid;
  std::vector<std::size_t> idx(k, 0);
  while (true) {
    Point z(k);
    for (std::size_t a = 0; a < k; ++a)
      z[a] = lo[a] + (static_cast<double>(idx[a]) + 0.5) * (hi[a] - lo[a]) / static_cast<double>(side);
    grid.push_back(std::move(z));
    std::size_t a = 0;
    for (; a < k && ++idx[a] == side; ++a) idx[a] = 0;
    if (a == k) break;
  }
  return grid;
}

std::vector<Point> sample_hull_points(const std::vector<Point>& points, std::size_t count,
                                      std::uint64_t seed) {
  if (points.empty()) return {};
  const std::size_t k = points[0].size();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point> out;
  const std::size_t max_subset = std::min(points.size(), k + 2);
  for (std::size_t s = 0; s < count; ++s) {
    const std::size_t m = 1 + static_cast<std::size_t>(unit(rng) * static_cast<double>(max_subset)) %
                                  max_subset;
    Point z(k, 0.0);
    std::vector<double> w(m);
    std::vector<std::size_t> pick(m);
    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      pick[j] = static_cast<std::size_t>(unit(rng) * static_cast<double>(points.size())) %
                points.size();
      w[j] = -std::log(1.0 - unit(rng));
      total += w[j];
    }
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t a = 0; a < k; ++a) z[a] += w[j] / total * points[pick[j]][a];
    out.push_back(std::move(z));
  }
  return out;
}

Perturbation perturb_on_small_set(const SequenceWindow& x, const FiniteIdealModel& ideal,
                                  double amplitude, std::uint64_t seed) {
  std::vector<std::size_t> candidates;
  if (x.arity() == Arity::single) {
    for (std::size_t i = 0; i < x.scale() / 2; ++i) candidates.push_back(i);
  } else {
    const std::size_t m = x.scale();
    const auto b = static_cast<std::size_t>(std::ceil(0.1 * static_cast<double>(m)));
    for (std::size_t i = 0; i < x.size(); ++i)
      if (i / m + 1 < b) candidates.push_back(i);
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<std::size_t> support;
  for (std::size_t i : candidates)
    if (unit(rng) > 0.0) support.push_back(i);
  if (!ideal.is_small_flat(support, x.shape()))
    throw ParameterError("perturbation support is not small under " + ideal.name());
  std::vector<double> coords(x.coords().begin(), x.coords().end());
  for (std::size_t i : support)
    for (std::size_t a = 0; a < x.dim(); ++a) coords[i * x.dim() + a] += amplitude * unit(rng);
  return {x.with_coords(std::move(coords), x.source() + "+perturbed"), std::move(support)};
}

double boundary_distance(const Polytope& p, std::span<const double> z) {
  if (p.is_empty()) return std::numeric_limits<double>::infinity();
  double slack = std::numeric_limits<double>::infinity();
  double violation = 0.0;
  for (const auto& h : p.halfspaces()) {
    const double s = h.b - dot(h.u, z);
    slack = std::min(slack, s);
    violation = std::max(violation, -s);
  }
  const bool inside = p.contains(z, 0.0);
  if (inside) return -std::max(slack, 0.0);
  if (!p.vertices().empty()) return point_to_hull_distance(z, p.vertices());
  return violation;
}

Check check_equivalence(const ItemAnalysis& a, const VerifyOptions& options) {
  const auto& s = a.support.result;
  const auto& c = a.cluster_hull.result;
  if (s.is_empty() || c.is_empty()) {
    const bool same = s.is_empty() == c.is_empty();
    return make_check("support-vs-cluster-hull", same ? 0.0 : std::numeric_limits<double>::infinity(), options.equiv(),
                      same ? "both empty" : "exactly one construction is empty");
  }
  return make_check("support-vs-cluster-hull", hausdorff_distance(s, c), options.equiv(),
                    format("cluster candidates %g, radius %g",
                           static_cast<double>(a.clusters.points.size()), a.clusters.radius));
}

Check check_probe_agreement(const ItemAnalysis& a, const VerifyOptions& options) {
  auto params = options.core_params();
  params.delta = options.probe_delta;
  const auto support = core_by_support(a.window, a.ideal, params);
  const auto& poly = support.result;
  if (poly.is_empty()) return make_check("ball-probe-agreement", 0.0, 0.01, "empty support core");
  // Far centers along every support normal, refined ones included.
  const auto [lo, hi] = poly.bounding_box();
  Point c(lo.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
  const double reach = 1e4 * std::max(1.0, poly.diameter());
  std::vector<Point> extra;
  for (const auto& h : poly.halfspaces()) {
    Point y(c);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] -= reach * h.u[i];
    extra.push_back(std::move(y));
  }
  const auto family = make_ball_family(a.window, a.ideal, params, extra);
  const auto probes = probe_grid(poly, options.probes);
  std::size_t disagree = 0;
  double worst = 0.0;
  for (const auto& p : probes) {
    if (poly.contains(p, 0.0) == family.contains(p)) continue;
    ++disagree;
    worst = std::max(worst, std::abs(boundary_distance(poly, p)));
  }
  const double fraction = static_cast<double>(disagree) / static_cast<double>(probes.size());
  Check check = make_check("ball-probe-agreement", fraction, 0.01,
                           format("max disagreement distance %g (shell %g)", worst, options.equiv()));
  check.passed = fraction <= 0.01 && worst <= options.equiv();
  return check;
}

Check check_caratheodory(const ItemAnalysis& a, const VerifyOptions& options) {
  const auto& pts = a.clusters.points;
  if (pts.empty()) return make_check("caratheodory", 0.0, 1e-9, "no cluster candidates");
  const std::size_t k = a.window.dim();
  double worst = 0.0;
  std::size_t most = 0;
  bool members = true;
  for (const auto& p : sample_hull_points(pts, options.samples, options.seed)) {
    const auto combo = caratheodory_decompose(p, a.clusters);
    worst = std::max(worst, reconstruction_error(p, combo));
    most = std::max(most, combo.supports.size());
    for (const auto& s : combo.supports)
      if (std::find(pts.begin(), pts.end(), s) == pts.end()) members = false;
  }
  Check check = make_check("caratheodory", worst, 1e-9,
                           format("max supports %g (bound %g)", static_cast<double>(most),
                                  static_cast<double>(k + 1)));
  check.passed = worst <= 1e-9 && most <= k + 1 && members;
  return check;
}

Check check_choquet(const ItemAnalysis& a, const VerifyOptions& options) {
  const auto& pts = a.clusters.points;
  if (pts.empty()) return make_check("choquet", 0.0, 1e-9, "no cluster candidates");
  double worst = 0.0;
  bool valid = true;
  const auto samples = sample_hull_points(pts, options.samples, options.seed);
  for (const auto& p : samples) {
    const auto combo = caratheodory_decompose(p, a.clusters);
    valid = valid && is_valid_measure(p, combo, 1e-9);
    worst = std::max(worst, reconstruction_error(p, combo));
  }
  const auto extra = sample_hull_points(pts, options.samples, options.seed + 1);
  for (std::size_t i = 0; i < extra.size(); ++i) {
    const auto m = choquet_measure(extra[i], a.clusters, 4, options.seed + i);
    valid = valid && is_valid_measure(extra[i], m, 1e-9);
    worst = std::max(worst, reconstruction_error(extra[i], m));
  }
  Check check = make_check("choquet", worst, 1e-9,
                           format("%g certificates and %g LP measures",
                                  static_cast<double>(samples.size()),
                                  static_cast<double>(extra.size())));
  check.passed = valid && worst <= 1e-9;
  return check;
}

Check check_cluster_inclusion(const ItemAnalysis& a, const VerifyOptions& options) {
  const auto family = make_ball_family(a.window, a.ideal, options.core_params());
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& c : a.clusters.points) {
    worst = std::max(worst, boundary_distance(a.support.result, c));
    worst = std::max(worst, family.excess(c));
  }
  if (a.clusters.points.empty()) worst = 0.0;
  return make_check("clusters-inside-cores", std::max(worst, 0.0), options.equiv(),
                    format("%g candidates", static_cast<double>(a.clusters.points.size())));
}

Check check_perturbation(const ItemAnalysis& a, const VerifyOptions& options) {
  const auto pert = perturb_on_small_set(a.window, a.ideal, options.perturb_amplitude, options.seed);
  const auto b = analyze(pert.window, a.ideal, options);
  double worst = 0.0;
  std::string detail;
  auto compare = [&](const char* name, const Polytope& p, const Polytope& q) {
    double d = 0.0;
    if (p.is_empty() != q.is_empty())
      d = std::numeric_limits<double>::infinity();
    else if (!p.is_empty())
      d = hausdorff_distance(p, q);
    worst = std::max(worst, d);
    detail += std::string(detail.empty() ? "" : ", ") + name + format(" %g", d);
  };
  compare("support", a.support.result, b.support.result);
  compare("cluster_hull", a.cluster_hull.result, b.cluster_hull.result);
  compare("ball", a.ball.result, b.ball.result);
  detail += format("; %g perturbed indices", static_cast<double>(pert.support.size()));
  return make_check("small-perturbation", worst, options.equiv(), detail);
}

std::vector<Check> verify_item(const CorpusItem& item, const VerifyOptions& options) {
  const auto a = analyze(item.window(), item.model(), options);
  return {check_equivalence(a, options),  check_probe_agreement(a, options),
          check_caratheodory(a, options), check_choquet(a, options),
          check_cluster_inclusion(a, options), check_perturbation(a, options)};
}

}  // namespace icore
