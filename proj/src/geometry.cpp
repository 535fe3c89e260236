#include "icore/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

namespace icore {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

void check_dim(std::span<const double> p, const std::vector<Point>& s) {
  if (s.empty()) throw ParameterError("empty point set");
  for (const auto& q : s)
    if (q.size() != p.size()) throw ParameterError("dimension mismatch");
}

double point_scale(const std::vector<Point>& pts) {
  double m = 0.0;
  for (const auto& p : pts)
    for (double c : p) m = std::max(m, std::abs(c));
  return m;
}

// Greedy merge of points closer than tol.
std::vector<Point> dedupe(std::vector<Point> pts, double tol) {
  std::sort(pts.begin(), pts.end());
  std::vector<Point> out;
  for (auto& p : pts) {
    bool dup = false;
    for (const auto& q : out)
      if (distance(p, q) <= tol) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(std::move(p));
  }
  return out;
}

double cross(const Point& o, const Point& a, const Point& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Counter-clockwise, collinear points dropped.
std::vector<Point> monotone_chain(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> hull(2 * pts.size());
  std::size_t h = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (h >= 2 && cross(hull[h - 2], hull[h - 1], pts[i]) <= 0) --h;
    hull[h++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, lower = h + 1; i-- > 0;) {
    while (h >= lower && cross(hull[h - 2], hull[h - 1], pts[i]) <= 0) --h;
    hull[h++] = pts[i];
  }
  hull.resize(h - 1);
  return hull;
}

std::vector<Point> extreme_points(std::vector<Point> pts) {
  if (pts.size() <= 2) return pts;
  const std::size_t k = pts[0].size();
  if (k == 2) return monotone_chain(std::move(pts));
  std::vector<Point> kept;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<Point> others;
    others.reserve(pts.size() - 1);
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (j != i) others.push_back(pts[j]);
    if (!hull_membership(pts[i], others, Arithmetic::floating).inside) kept.push_back(pts[i]);
  }
  return kept;
}

// Points where the tight halfspaces have full rank.
std::vector<Point> tight_vertices(std::vector<Point> pts, const std::vector<Halfspace>& hs,
                                  double tol) {
  const std::size_t k = hs.empty() ? 0 : hs[0].u.size();
  std::vector<Point> kept;
  for (auto& p : pts) {
    std::vector<const Point*> tight;
    for (const auto& h : hs)
      if (std::abs(dot(h.u, p) - h.b) <= tol) tight.push_back(&h.u);
    if (tight.size() < k) continue;
    Eigen::MatrixXd a(tight.size(), k);
    for (std::size_t i = 0; i < tight.size(); ++i)
      for (std::size_t j = 0; j < k; ++j) a(i, j) = (*tight[i])[j];
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    lu.setThreshold(1e-9);
    if (lu.rank() == static_cast<Eigen::Index>(k)) kept.push_back(std::move(p));
  }
  return kept;
}

std::vector<Halfspace> support_halfspaces(const std::vector<Point>& pts, std::size_t directions) {
  const std::size_t k = pts[0].size();
  std::vector<Halfspace> hs;
  for (auto& u : direction_set(k, directions ? directions : default_direction_count(k))) {
    const double b = support_value(pts, u);
    hs.push_back({std::move(u), b});
  }
  return hs;
}

std::vector<Halfspace> polygon_edges(const std::vector<Point>& ccw) {
  std::vector<Halfspace> hs;
  if (ccw.size() == 1) {
    for (double sx : {1.0, -1.0})
      for (std::size_t axis = 0; axis < 2; ++axis) {
        Point u(2, 0.0);
        u[axis] = sx;
        hs.push_back({u, dot(u, ccw[0])});
      }
    return hs;
  }
  if (ccw.size() == 2) {
    Point d{ccw[1][0] - ccw[0][0], ccw[1][1] - ccw[0][1]};
    const double len = norm(d);
    d[0] /= len;
    d[1] /= len;
    for (const Point& u : {Point{d[1], -d[0]}, Point{-d[1], d[0]}})
      hs.push_back({u, dot(u, ccw[0])});
    hs.push_back({d, dot(d, ccw[1])});
    hs.push_back({Point{-d[0], -d[1]}, -dot(d, ccw[0])});
    return hs;
  }
  for (std::size_t i = 0; i < ccw.size(); ++i) {
    const Point& a = ccw[i];
    const Point& b = ccw[(i + 1) % ccw.size()];
    const double dx = b[0] - a[0], dy = b[1] - a[1];
    const double len = std::hypot(dx, dy);
    Point u{dy / len, -dx / len};
    hs.push_back({u, std::max(dot(u, a), dot(u, b))});
  }
  return hs;
}

Point normalized(Point u) {
  const double n = norm(u);
  if (!(n > 0.0) || !std::isfinite(n)) throw ParameterError("zero or non-finite normal");
  for (double& c : u) c /= n;
  return u;
}

// 2-D polygon clipped by a*s + b*t <= c (Sutherland-Hodgman, one edge).
using Vec2 = std::array<double, 2>;
std::vector<Vec2> clip(const std::vector<Vec2>& poly, double a, double b, double c) {
  std::vector<Vec2> out;
  const std::size_t n = poly.size();
  const double slack = 1e-12 * (1.0 + std::abs(c));
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    const double fp = a * p[0] + b * p[1] - c;
    const double fq = a * q[0] + b * q[1] - c;
    const bool pin = fp <= slack, qin = fq <= slack;
    if (pin) out.push_back(p);
    if (pin != qin) {
      const double t = fp / (fp - fq);
      out.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
    }
  }
  return out;
}

// Box [lo, hi] from axis halfspaces when all 2k are present, else by LP.
std::optional<std::pair<Point, Point>> halfspace_box(std::size_t k,
                                                     const std::vector<Halfspace>& hs) {
  Point lo(k, -std::numeric_limits<double>::infinity());
  Point hi(k, std::numeric_limits<double>::infinity());
  for (const auto& h : hs)
    for (std::size_t i = 0; i < k; ++i) {
      if (h.u[i] > 1.0 - 1e-12) hi[i] = std::min(hi[i], h.b);
      if (h.u[i] < -1.0 + 1e-12) lo[i] = std::max(lo[i], -h.b);
    }
  for (std::size_t i = 0; i < k; ++i) {
    for (double sign : {1.0, -1.0}) {
      double& slot = sign > 0 ? hi[i] : lo[i];
      if (std::isfinite(slot)) continue;
      LinearProgram lp;
      lp.num_vars = k;
      lp.objective.assign(k, 0.0);
      lp.objective[i] = sign;
      lp.free_vars.assign(k, true);
      for (const auto& h : hs) lp.add_row(h.u, Sense::less_equal, h.b);
      auto sol = lp_solve(lp, Arithmetic::floating);
      if (sol.status == LpStatus::infeasible) return std::nullopt;
      if (sol.status == LpStatus::unbounded) throw ParameterError("halfspaces are unbounded");
      slot = sign * sol.objective;
    }
  }
  for (std::size_t i = 0; i < k; ++i)
    if (lo[i] > hi[i] + 1e-12 * (1.0 + std::abs(hi[i]))) return std::nullopt;
  return std::make_pair(lo, hi);
}

std::vector<Point> polygon_from_halfspaces(const std::vector<Halfspace>& hs, const Point& lo,
                                           const Point& hi) {
  std::vector<Vec2> poly{{lo[0], lo[1]}, {hi[0], lo[1]}, {hi[0], hi[1]}, {lo[0], hi[1]}};
  for (const auto& h : hs) {
    poly = clip(poly, h.u[0], h.u[1], h.b);
    if (poly.empty()) break;
  }
  std::vector<Point> pts;
  for (const auto& v : poly) pts.push_back({v[0], v[1]});
  return pts;
}

std::vector<Point> vertices_3d(const std::vector<Halfspace>& hs, const Point& lo, const Point& hi) {
  std::vector<Halfspace> all = hs;
  for (std::size_t i = 0; i < 3; ++i) {
    Point e(3, 0.0);
    e[i] = 1.0;
    all.push_back({e, hi[i]});
    e[i] = -1.0;
    all.push_back({e, -lo[i]});
  }
  Point center(3);
  double diag = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    center[i] = 0.5 * (lo[i] + hi[i]);
    diag += (hi[i] - lo[i]) * (hi[i] - lo[i]);
  }
  const double half = std::sqrt(diag) + 1.0;
  std::vector<Point> pts;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const Point& u = all[i].u;
    // Orthonormal basis of the plane <u,z> = b.
    Point a = std::abs(u[0]) < 0.9 ? Point{1, 0, 0} : Point{0, 1, 0};
    const double ua = dot(u, a);
    for (std::size_t c = 0; c < 3; ++c) a[c] -= ua * u[c];
    a = normalized(a);
    Point b{u[1] * a[2] - u[2] * a[1], u[2] * a[0] - u[0] * a[2], u[0] * a[1] - u[1] * a[0]};
    Point o(3);
    const double shift = all[i].b - dot(u, center);
    for (std::size_t c = 0; c < 3; ++c) o[c] = center[c] + shift * u[c];
    std::vector<Vec2> poly{{-half, -half}, {half, -half}, {half, half}, {-half, half}};
    for (std::size_t j = 0; j < all.size() && !poly.empty(); ++j) {
      if (j == i) continue;
      poly = clip(poly, dot(all[j].u, a), dot(all[j].u, b), all[j].b - dot(all[j].u, o));
    }
    for (const auto& v : poly)
      pts.push_back({o[0] + v[0] * a[0] + v[1] * b[0], o[1] + v[0] * a[1] + v[1] * b[1],
                     o[2] + v[0] * a[2] + v[1] * b[2]});
  }
  return pts;
}

}  // namespace

std::vector<Point> direction_set(std::size_t k, std::size_t count) {
  if (k == 0) throw ParameterError("dimension must be >= 1");
  std::vector<Point> dirs;
  if (k == 1) return {Point{1.0}, Point{-1.0}};
  count = std::max(count, 2 * k);
  if (k == 2) {
    for (std::size_t i = 0; i < count; ++i) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
      dirs.push_back({std::cos(a), std::sin(a)});
    }
    return dirs;
  }
  if (k == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < count; ++i) {
      const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(count);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * static_cast<double>(i);
      dirs.push_back({r * std::cos(phi), r * std::sin(phi), z});
    }
  } else {
    // R_d sequence: phi_d is the positive root of x^(d+1) = x + 1.
    double phi = 2.0;
    for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / static_cast<double>(k + 1));
    Point alpha(k);
    for (std::size_t j = 0; j < k; ++j) alpha[j] = std::pow(1.0 / phi, static_cast<double>(j + 1));
    for (std::size_t i = 1; dirs.size() < count; ++i) {
      Point u(k);
      for (std::size_t j = 0; j < k; ++j) {
        const double f = 0.5 + alpha[j] * static_cast<double>(i);
        u[j] = 2.0 * (f - std::floor(f)) - 1.0;
      }
      if (norm(u) < 0.25) continue;
      dirs.push_back(normalized(std::move(u)));
    }
  }
  for (std::size_t j = 0; j < k; ++j)
    for (double s : {1.0, -1.0}) {
      Point e(k, 0.0);
      e[j] = s;
      dirs.push_back(std::move(e));
    }
  return dirs;
}

double support_value(const std::vector<Point>& s, std::span<const double> u) {
  if (s.empty()) throw ParameterError("empty point set");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p : s) {
    if (p.size() != u.size()) throw ParameterError("dimension mismatch");
    best = std::max(best, dot(p, u));
  }
  return best;
}

Polytope Polytope::empty(std::size_t dim) {
  Polytope p;
  p.dim_ = dim;
  return p;
}

Polytope Polytope::from_points(std::vector<Point> points, std::size_t directions) {
  if (points.empty()) throw ParameterError("from_points needs at least one point");
  const std::size_t k = points[0].size();
  for (const auto& p : points) {
    if (p.size() != k) throw ParameterError("dimension mismatch");
    for (double c : p)
      if (!std::isfinite(c)) throw ParameterError("non-finite coordinate");
  }
  Polytope poly;
  poly.dim_ = k;
  poly.empty_ = false;
  if (k == 1) {
    auto [lo, hi] = std::minmax_element(points.begin(), points.end());
    poly.points_ = {*lo};
    if ((*hi)[0] != (*lo)[0]) poly.points_.push_back(*hi);
    poly.halfspaces_ = {{Point{1.0}, (*hi)[0]}, {Point{-1.0}, -(*lo)[0]}};
    poly.vertices_exact_ = poly.halfspaces_exact_ = true;
    return poly;
  }
  const double tol = 1e-12 * (1.0 + point_scale(points));
  points = dedupe(std::move(points), tol);
  if (k == 2) {
    poly.points_ = monotone_chain(std::move(points));
    poly.halfspaces_ = polygon_edges(poly.points_);
    poly.vertices_exact_ = poly.halfspaces_exact_ = true;
    return poly;
  }
  poly.points_ = k == 3 ? extreme_points(std::move(points)) : std::move(points);
  poly.vertices_exact_ = k == 3;
  poly.halfspaces_ = support_halfspaces(poly.points_, directions);
  return poly;
}

Polytope Polytope::from_halfspaces(std::size_t dim, std::vector<Halfspace> halfspaces) {
  if (dim == 0) throw ParameterError("dimension must be >= 1");
  for (auto& h : halfspaces) {
    if (h.u.size() != dim) throw ParameterError("dimension mismatch");
    const double n = norm(h.u);
    h.u = normalized(std::move(h.u));
    h.b /= n;
  }
  Polytope poly;
  poly.dim_ = dim;
  auto box = halfspace_box(dim, halfspaces);
  if (!box) return poly;
  const auto& [lo, hi] = *box;
  poly.empty_ = false;
  poly.halfspaces_exact_ = true;
  if (dim > 3) {
    poly.halfspaces_ = std::move(halfspaces);
    return poly;
  }
  std::vector<Point> pts;
  if (dim == 1) {
    pts = {Point{lo[0]}};
    if (hi[0] > lo[0]) pts.push_back(Point{hi[0]});
  } else if (dim == 2) {
    pts = monotone_chain(polygon_from_halfspaces(halfspaces, lo, hi));
  } else {
    double scale = 1.0;
    for (std::size_t i = 0; i < 3; ++i) scale = std::max({scale, std::abs(lo[i]), std::abs(hi[i])});
    pts = tight_vertices(dedupe(vertices_3d(halfspaces, lo, hi), 1e-9 * scale), halfspaces,
                         1e-8 * scale);
  }
  if (pts.empty()) return Polytope::empty(dim);
  for (auto& h : halfspaces) h.b = support_value(pts, h.u);
  poly.points_ = std::move(pts);
  poly.vertices_exact_ = true;
  poly.halfspaces_ = std::move(halfspaces);
  return poly;
}

double Polytope::support(std::span<const double> u) const {
  if (empty_) return -std::numeric_limits<double>::infinity();
  if (u.size() != dim_) throw ParameterError("dimension mismatch");
  if (!points_.empty()) return support_value(points_, u);
  LinearProgram lp;
  lp.num_vars = dim_;
  lp.objective.assign(u.begin(), u.end());
  lp.free_vars.assign(dim_, true);
  for (const auto& h : halfspaces_) lp.add_row(h.u, Sense::less_equal, h.b);
  auto sol = lp_solve(lp, Arithmetic::floating);
  if (sol.status != LpStatus::optimal) throw ParameterError("support LP failed");
  return sol.objective;
}

bool Polytope::contains(std::span<const double> p, double tol) const {
  if (p.size() != dim_) throw ParameterError("dimension mismatch");
  if (empty_) return false;
  if (halfspaces_exact_) {
    for (const auto& h : halfspaces_)
      if (dot(h.u, p) > h.b + tol) return false;
    return true;
  }
  return point_to_hull_distance(p, points_) <= tol;
}

double Polytope::diameter() const {
  if (empty_) return 0.0;
  double d = 0.0;
  if (!points_.empty()) {
    for (std::size_t i = 0; i < points_.size(); ++i)
      for (std::size_t j = i + 1; j < points_.size(); ++j)
        d = std::max(d, distance(points_[i], points_[j]));
    return d;
  }
  for (const auto& u : direction_set(dim_, default_direction_count(dim_))) {
    Point v(u);
    for (double& c : v) c = -c;
    d = std::max(d, support(u) + support(v));
  }
  return d;
}

std::pair<Point, Point> Polytope::bounding_box() const {
  if (empty_) throw ParameterError("bounding box of an empty polytope");
  Point lo(dim_), hi(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    Point e(dim_, 0.0);
    e[i] = 1.0;
    hi[i] = support(e);
    e[i] = -1.0;
    lo[i] = -support(e);
  }
  return {lo, hi};
}

NearestPoint nearest_in_hull(std::span<const double> p, const std::vector<Point>& s) {
  check_dim(p, s);
  const std::size_t n = s.size(), k = p.size();
  Eigen::MatrixXd q(k, n);
  double maxsq = 0.0;
  std::size_t start = 0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < k; ++i) q(i, j) = s[j][i] - p[i];
    const double sq = q.col(j).squaredNorm();
    if (sq < q.col(start).squaredNorm()) start = j;
    maxsq = std::max(maxsq, sq);
  }
  std::vector<std::size_t> active{start};
  std::vector<double> lambda{1.0};
  Eigen::VectorXd x = q.col(start);
  const double tol = 1e-14 * std::max(maxsq, 1e-300);

  auto affine_min = [&](const std::vector<std::size_t>& idx) {
    const std::size_t m = idx.size();
    Eigen::VectorXd mu(m);
    if (m == 1) {
      mu(0) = 1.0;
      return mu;
    }
    Eigen::MatrixXd e(k, m - 1);
    for (std::size_t c = 1; c < m; ++c) e.col(c - 1) = q.col(idx[c]) - q.col(idx[0]);
    Eigen::VectorXd t = e.completeOrthogonalDecomposition().solve(-q.col(idx[0]));
    mu(0) = 1.0 - t.sum();
    mu.tail(m - 1) = t;
    return mu;
  };

  for (std::size_t iter = 0; iter < 50 * (n + k) + 100; ++iter) {
    if (x.squaredNorm() <= tol) break;
    std::size_t j = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < n; ++c) {
      const double v = x.dot(q.col(c));
      if (v < best) {
        best = v;
        j = c;
      }
    }
    if (x.squaredNorm() - best <= 1e-12 * std::max(maxsq, 1e-300)) break;
    if (std::find(active.begin(), active.end(), j) != active.end()) break;
    active.push_back(j);
    lambda.push_back(0.0);
    while (true) {
      Eigen::VectorXd mu = affine_min(active);
      bool interior = true;
      for (Eigen::Index c = 0; c < mu.size(); ++c)
        if (mu(c) <= 1e-14) interior = false;
      if (interior) {
        for (std::size_t c = 0; c < active.size(); ++c) lambda[c] = mu(static_cast<Eigen::Index>(c));
        break;
      }
      double theta = 1.0;
      std::size_t drop = 0;
      for (std::size_t c = 0; c < active.size(); ++c) {
        const double m = mu(static_cast<Eigen::Index>(c));
        if (m <= 1e-14 && lambda[c] - m > 0.0) {
          const double t = lambda[c] / (lambda[c] - m);
          if (t < theta) {
            theta = t;
            drop = c;
          }
        }
      }
      for (std::size_t c = 0; c < active.size(); ++c)
        lambda[c] = (1.0 - theta) * lambda[c] + theta * mu(static_cast<Eigen::Index>(c));
      lambda[drop] = 0.0;
      std::vector<std::size_t> na;
      std::vector<double> nl;
      for (std::size_t c = 0; c < active.size(); ++c)
        if (lambda[c] > 1e-16) {
          na.push_back(active[c]);
          nl.push_back(lambda[c]);
        }
      active = std::move(na);
      lambda = std::move(nl);
      if (active.size() <= 1) {
        if (active.empty()) {
          active = {j};
          lambda = {1.0};
        }
        lambda[0] = 1.0;
        break;
      }
    }
    double total = 0.0;
    for (double l : lambda) total += l;
    x.setZero();
    for (std::size_t c = 0; c < active.size(); ++c) {
      lambda[c] /= total;
      x += lambda[c] * q.col(active[c]);
    }
  }
  NearestPoint out;
  out.distance = x.norm();
  out.point.resize(k);
  for (std::size_t i = 0; i < k; ++i) out.point[i] = p[i] + x(static_cast<Eigen::Index>(i));
  out.weights.assign(n, 0.0);
  for (std::size_t c = 0; c < active.size(); ++c) out.weights[active[c]] = lambda[c];
  return out;
}

double point_to_hull_distance(std::span<const double> p, const std::vector<Point>& s) {
  return nearest_in_hull(p, s).distance;
}

HullMembership hull_membership(std::span<const double> p, const std::vector<Point>& s,
                               Arithmetic arithmetic) {
  check_dim(p, s);
  const std::size_t k = p.size(), n = s.size();
  LinearProgram lp;
  lp.num_vars = n;
  lp.objective.assign(n, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<double> row(n);
    for (std::size_t j = 0; j < n; ++j) row[j] = s[j][i];
    lp.add_row(std::move(row), Sense::equal, p[i]);
  }
  lp.add_row(std::vector<double>(n, 1.0), Sense::equal, 1.0);
  const auto sol = lp_solve(lp, arithmetic);
  HullMembership out;
  out.exact = sol.exact;
  if (sol.status == LpStatus::optimal) {
    out.inside = true;
    out.weights = sol.x;
    for (double& w : out.weights) w = std::max(w, 0.0);
    return out;
  }
  auto margin_of = [&](Point u) -> std::pair<Halfspace, double> {
    const double nu = norm(u);
    if (!(nu > 0.0)) return {{u, 0.0}, -std::numeric_limits<double>::infinity()};
    for (double& c : u) c /= nu;
    double r = std::numeric_limits<double>::infinity();
    for (const auto& q : s) r = std::min(r, dot(u, q));
    const double m = r - dot(u, p);
    return {{std::move(u), r}, m};
  };
  // Farkas row vector (w, rho): <w,s> + rho <= 0 < <w,p> + rho, so u = -w.
  Point u(k, 0.0);
  if (sol.farkas.size() == k + 1)
    for (std::size_t i = 0; i < k; ++i) u[i] = -sol.farkas[i];
  auto [sep, margin] = margin_of(std::move(u));
  const auto nearest = nearest_in_hull(p, s);
  Point v(k);
  for (std::size_t i = 0; i < k; ++i) v[i] = nearest.point[i] - p[i];
  auto [sep2, margin2] = margin_of(std::move(v));
  if (margin2 > margin) {
    sep = std::move(sep2);
    margin = margin2;
  }
  out.separator = std::move(sep);
  out.margin = margin;
  return out;
}

double directed_hausdorff(const Polytope& a, const Polytope& b) {
  if (a.is_empty() || b.is_empty()) throw ParameterError("Hausdorff distance of an empty polytope");
  if (a.dim() != b.dim()) throw ParameterError("dimension mismatch");
  if (!a.vertices().empty() && !b.vertices().empty()) {
    double d = 0.0;
    for (const auto& v : a.vertices()) d = std::max(d, point_to_hull_distance(v, b.vertices()));
    return d;
  }
  double d = 0.0;
  for (const auto& u : direction_set(a.dim(), default_direction_count(a.dim())))
    d = std::max(d, a.support(u) - b.support(u));
  return d;
}

double hausdorff_distance(const Polytope& a, const Polytope& b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

ConvexCombination reduce_to_affinely_independent(std::span<const double> p,
                                                 ConvexCombination combo) {
  const std::size_t k = p.size();
  auto prune = [&] {
    ConvexCombination kept;
    for (std::size_t j = 0; j < combo.weights.size(); ++j)
      if (combo.weights[j] > 0.0) {
        kept.supports.push_back(std::move(combo.supports[j]));
        kept.weights.push_back(combo.weights[j]);
      }
    combo = std::move(kept);
  };
  auto lifted = [&] {
    Eigen::MatrixXd m(k + 1, combo.supports.size());
    for (std::size_t j = 0; j < combo.supports.size(); ++j) {
      for (std::size_t i = 0; i < k; ++i) m(i, j) = combo.supports[j][i];
      m(k, j) = 1.0;
    }
    return m;
  };
  prune();
  while (combo.supports.size() > 1) {
    Eigen::MatrixXd m = lifted();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(1e-12);
    if (lu.rank() == static_cast<Eigen::Index>(combo.supports.size())) break;
    Eigen::VectorXd z = lu.kernel().col(0);
    if (z.maxCoeff() <= 0.0) z = -z;
    double t = std::numeric_limits<double>::infinity();
    std::size_t drop = 0;
    for (std::size_t j = 0; j < combo.weights.size(); ++j) {
      const double zj = z(static_cast<Eigen::Index>(j));
      if (zj > 0.0 && combo.weights[j] / zj < t) {
        t = combo.weights[j] / zj;
        drop = j;
      }
    }
    for (std::size_t j = 0; j < combo.weights.size(); ++j)
      combo.weights[j] -= t * z(static_cast<Eigen::Index>(j));
    combo.weights[drop] = 0.0;
    for (double& w : combo.weights)
      if (w < 1e-15) w = 0.0;
    prune();
  }
  if (combo.supports.empty()) return combo;
  Eigen::MatrixXd m = lifted();
  Eigen::VectorXd rhs(k + 1);
  for (std::size_t i = 0; i < k; ++i) rhs(i) = p[i];
  rhs(k) = 1.0;
  Eigen::VectorXd w = m.colPivHouseholderQr().solve(rhs);
  if (w.minCoeff() >= -1e-12) {
    ConvexCombination refit = combo;
    for (std::size_t j = 0; j < refit.weights.size(); ++j)
      refit.weights[j] = std::max(0.0, w(static_cast<Eigen::Index>(j)));
    if (reconstruction_error(p, refit) <= reconstruction_error(p, combo)) combo = std::move(refit);
  }
  return combo;
}

double reconstruction_error(std::span<const double> p, const ConvexCombination& combo) {
  Point r(p.size(), 0.0);
  double total = 0.0;
  for (std::size_t j = 0; j < combo.supports.size(); ++j) {
    total += combo.weights[j];
    for (std::size_t i = 0; i < p.size(); ++i) r[i] += combo.weights[j] * combo.supports[j][i];
  }
  for (std::size_t i = 0; i < p.size(); ++i) r[i] -= p[i];
  return std::max(norm(r), std::abs(total - 1.0));
}

}  // namespace icore
