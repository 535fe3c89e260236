#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "icore/core.hpp"
#include "icore/corpus.hpp"
#include "icore/error.hpp"
#include "oracles.hpp"

using namespace icore;

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

ClusterSet triangle_clusters() {
  ClusterSet c;
  c.dim = 2;
  c.points = {{0, 0}, {1, 0}, {0, 1}};
  c.radius = 1e-2;
  c.scale = 10000;
  return c;
}

}  // namespace

TEST_CASE("support core examples") {
  // x_n = (-1)^n + 1/n, tail extremes 1 + 1/5002 and -1 + 1/5001
  auto r = core_by_support(generate("alt_decay", 10000), make_fin());
  REQUIRE(r.state == CoreState::ok);
  CHECK(std::abs(r.result.support(Point{1.0}) - (1.0 + 1.0 / 5002)) <= 1e-2);
  CHECK(std::abs(r.result.support(Point{-1.0}) - (1.0 - 1.0 / 5001)) <= 1e-2);

  auto spike = generate("sparse_spike(squares)", 10000);
  auto z = core_by_support(spike, make_density_zero());
  CHECK(z.result.diameter() <= 1e-2);
  CHECK(z.result.contains(Point{0.0}));
  auto fin = core_by_support(spike, make_fin());
  CHECK(fin.result.support(Point{1.0}) == Catch::Approx(1.0).margin(1e-2));
  CHECK(fin.result.support(Point{-1.0}) == Catch::Approx(0.0).margin(1e-2));
}

TEST_CASE("support offsets match tail extremes under fin") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> v(3000);
  for (auto& c : v) c = u(rng);
  SequenceWindow w(2, {Arity::single, 1500}, v, "random");
  for (const auto& d : direction_set(2, 12)) {
    std::vector<double> proj(1500);
    for (std::size_t i = 0; i < 1500; ++i) proj[i] = dot(d, w.point(i));
    CHECK(std::abs(support_offset(w, make_fin(), d, 1e-3) - oracle::tail_max(proj)) <= 1e-3);
  }
}

TEST_CASE("cluster hull examples") {
  auto tri = core_by_cluster_hull(generate("cycle((0,0),(1,0),(0,1))", 10000), make_density_zero());
  REQUIRE(tri.state == CoreState::ok);
  REQUIRE(tri.result.has_vertices());
  CHECK(tri.result.vertices().size() >= 3);
  for (const Point& v : std::vector<Point>{{0, 0}, {1, 0}, {0, 1}})
    CHECK(point_to_hull_distance(v, tri.result.vertices()) <= 1e-2);
  auto alt = core_by_cluster_hull(generate("alt", 10000), make_fin());
  CHECK(alt.result.support(Point{1.0}) == Catch::Approx(1.0).margin(1e-2));
  CHECK(alt.result.support(Point{-1.0}) == Catch::Approx(1.0).margin(1e-2));

  CoreParams p;
  p.bound = std::nullopt;
  p.box = std::make_pair(Point{-100.0}, Point{100.0});
  auto lin = core_by_cluster_hull(generate("alt_linear", 10000), make_density_zero(), p);
  // still flagged, the result is what the box leaves
  CHECK(lin.state == CoreState::unbounded);
  CHECK(lin.result.is_empty());
  CHECK_THROWS_AS(core_by_cluster_hull(generate("alt_linear", 10000), make_density_zero()),
                  UnboundedSequenceError);
}

TEST_CASE("ball membership") {
  auto x = generate("alt", 10000);
  auto in = core_membership_by_balls(x, make_fin(), Point{0.0});
  CHECK(in.inside);
  auto out = core_membership_by_balls(x, make_fin(), Point{1.5});
  CHECK_FALSE(out.inside);
  REQUIRE(out.witness);
  CHECK(std::abs((*out.witness)[0] - 1.5) > out.witness_radius);

  auto tri = generate("cycle((0,0),(1,0),(0,1))", 10000);
  auto core = core_by_support(tri, make_density_zero());
  for (const auto& v : core.result.vertices())
    CHECK(core_membership_by_balls(tri, make_density_zero(), v).inside);
  CHECK_FALSE(core_membership_by_balls(tri, make_density_zero(), Point{0.6, 0.6}).inside);
}

TEST_CASE("ball family radii are tail limsups of distances") {
  auto x = generate("cycle((0,0),(1,0),(0,1))", 4000);
  CoreParams p;
  auto fam = make_ball_family(x, make_fin(), p, {{0.2, 0.3}});
  REQUIRE(fam.centers.size() == fam.radii.size());
  for (std::size_t c = 0; c < fam.centers.size(); c += 7) {
    std::vector<double> d(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      auto q = x.point(i);
      d[i] = oracle::dist(Point(q.begin(), q.end()), fam.centers[c]);
    }
    CHECK(std::abs(fam.radii[c] - oracle::tail_max(d)) <= p.delta * (1.0 + fam.radii[c]));
  }
  CHECK(fam.contains(Point{0.3, 0.3}));
  std::size_t w = 0;
  CHECK_FALSE(fam.contains(Point{1.0, 1.0}, &w));
  CHECK(oracle::dist(Point{1.0, 1.0}, fam.centers[w]) > fam.radii[w] + fam.delta);
  CHECK(fam.excess(Point{1.0, 1.0}) > 0.0);
}

TEST_CASE("caratheodory decomposition") {
  auto c = triangle_clusters();
  auto cent = caratheodory_decompose(Point{1.0 / 3, 1.0 / 3}, c);
  REQUIRE(cent.weights.size() == 3);
  for (double w : cent.weights) CHECK(w == Catch::Approx(1.0 / 3));
  auto vert = caratheodory_decompose(Point{1.0, 0.0}, c);
  REQUIRE(vert.supports.size() == 1);
  CHECK(vert.supports[0] == Point{1.0, 0.0});

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1, 1);
  ClusterSet many;
  many.dim = 3;
  for (int i = 0; i < 12; ++i) many.points.push_back({u(rng), u(rng), u(rng)});
  std::gamma_distribution<double> g(1.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> w(many.points.size());
    double total = 0.0;
    for (auto& x : w) total += (x = g(rng));
    Point p(3, 0.0);
    for (std::size_t j = 0; j < w.size(); ++j)
      for (std::size_t a = 0; a < 3; ++a) p[a] += w[j] / total * many.points[j][a];
    auto r = caratheodory_decompose(p, many);
    CHECK(r.supports.size() <= 4);
    CHECK(reconstruction_error(p, r) <= 1e-9);
    CHECK(is_valid_measure(p, r, 1e-9));
  }

  try {
    caratheodory_decompose(Point{1.0, 1.0}, c);
    FAIL("expected NonMembershipError");
  } catch (const NonMembershipError& e) {
    const auto& h = e.separator();
    const double side = dot(h.u, Point{1.0, 1.0}) - h.b;
    CHECK(side != 0.0);
    for (const auto& q : c.points) CHECK((dot(h.u, q) - h.b) * side <= 1e-12);
  }
}

TEST_CASE("choquet measures") {
  ClusterSet seg;
  seg.dim = 1;
  seg.points = {{-1.0}, {1.0}};
  auto m = choquet_measure(Point{0.0}, seg);
  REQUIRE(m.weights.size() == 2);
  CHECK(m.weights[0] == Catch::Approx(0.5));
  CHECK(m.weights[1] == Catch::Approx(0.5));

  auto c = triangle_clusters();
  for (std::size_t spread : {1u, 5u}) {
    auto mu = choquet_measure(Point{0.2, 0.3}, c, spread, 4);
    CHECK(is_valid_measure(Point{0.2, 0.3}, mu, 1e-9));
  }
  auto car = caratheodory_decompose(Point{0.25, 0.25}, c);
  CHECK(is_valid_measure(Point{0.25, 0.25}, car, 1e-9));
  ConvexCombination bad{{{0.0, 0.0}, {1.0, 0.0}}, {0.7, 0.7}};
  CHECK_FALSE(is_valid_measure(Point{0.7, 0.0}, bad, 1e-9));
  ConvexCombination neg{{{0.0, 0.0}, {1.0, 0.0}}, {1.5, -0.5}};
  CHECK_FALSE(is_valid_measure(Point{-0.5, 0.0}, neg, 1e-9));
}

TEST_CASE("ideal convergence verdicts") {
  auto lim = is_ideal_convergent(generate("const(0.25,-0.5)", 5000), make_density_zero(), 3e-2);
  REQUIRE(lim);
  CHECK((*lim)[0] == Catch::Approx(0.25).margin(1e-2));
  CHECK((*lim)[1] == Catch::Approx(-0.5).margin(1e-2));
  CHECK(is_ideal_convergent(generate("sparse_spike(squares)", 10000), make_density_zero(), 3e-2));
  CHECK_FALSE(is_ideal_convergent(generate("sparse_spike(squares)", 10000), make_fin(), 3e-2));
  CHECK_FALSE(is_ideal_convergent(generate("alt", 10000), make_fin(), 3e-2));
}

TEST_CASE("support halfspaces: serial, parallel and reference agree") {
  for (const char* name : {"triangle-sparse-z", "tetra-fin", "dalt-ip", "alt-noise-fin"}) {
    const auto& item = corpus_item(name);
    auto x = item.window();
    auto ideal = item.model();
    auto dirs = direction_set(x.dim(), default_direction_count(x.dim()));
    auto ref = support_halfspaces_reference(x, ideal, dirs, 1e-2);
    auto ser = support_halfspaces(x, ideal, dirs, 1e-2, Execution::serial);
    auto par = support_halfspaces(x, ideal, dirs, 1e-2, Execution::parallel);
    REQUIRE(ref.size() == ser.size());
    REQUIRE(ref.size() == par.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
      CHECK(ref[i].u == ser[i].u);
      CHECK(ref[i].b == ser[i].b);
      CHECK(ref[i].b == par[i].b);
    }
  }
}

TEST_CASE("cores shrink as the ideal grows") {
  CoreParams p;
  for (const char* seq : {"alt+noise(0.005,5)", "sparse_spike(squares)",
                          "cycle((0,0),(1,0),(0,1))+sparse_noise(0.5,7)"}) {
    auto x = generate(seq, 10000);
    auto fin = core_by_support(x, make_fin(), p);
    auto z = core_by_support(x, make_density_zero(), p);
    for (const auto& u : direction_set(x.dim(), 64))
      CHECK(z.result.support(u) <= fin.result.support(u) + 3e-2);
  }
  auto x = generate("row_alt", 256);
  auto ip = core_by_support(x, make_pringsheim(), p);
  auto ie = core_by_support(x, make_e_ideal(), p);
  for (const auto& u : direction_set(1, 2)) CHECK(ie.result.support(u) <= ip.result.support(u) + 3e-2);
}

TEST_CASE("report fields") {
  auto r = core_by_support(generate("alt", 1000), make_fin());
  CHECK(r.model == "fin");
  CHECK(r.construction == Construction::support);
  CHECK(r.scale == 1000);
  CHECK(r.dim == 1);
  CHECK(r.sample_count >= 2);
  CHECK(to_string(Construction::ball) == "ball");
  CHECK(to_string(CoreState::unbounded) == "unbounded");
}
