// Acceptance suite: one line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <string>

#include "icore/core.hpp"
#include "icore/corpus.hpp"
#include "icore/error.hpp"
#include "icore/transforms.hpp"
#include "icore/verify.hpp"
#include "oracles.hpp"

using namespace icore;

namespace {

struct Outcome {
  bool passed = false;
  double value = 0.0;
  double limit = 0.0;
  std::string note;
};

constexpr double kTol = 1e-2;
const double kEquiv = 3.0 * kTol;

VerifyOptions options() {
  VerifyOptions o;
  o.delta = kTol;
  o.eps_final = kTol;
  return o;
}

std::vector<double> values(const SequenceWindow& w) { return {w.coords().begin(), w.coords().end()}; }

double barycenter_error(std::span<const double> p, const ConvexCombination& c) {
  Point q(p.size(), 0.0);
  for (std::size_t j = 0; j < c.supports.size(); ++j)
    for (std::size_t a = 0; a < p.size(); ++a) q[a] += c.weights[j] * c.supports[j][a];
  double e = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) e = std::max(e, std::abs(q[a] - p[a]));
  return e;
}

bool is_measure(const ConvexCombination& c) {
  double total = 0.0;
  for (double w : c.weights) {
    if (w < 0.0) return false;
    total += w;
  }
  return std::abs(total - 1.0) <= 1e-12;
}

// Corpus analyses shared by several criteria.
std::map<std::string, ItemAnalysis>& analyses() {
  static std::map<std::string, ItemAnalysis> cache = [] {
    std::map<std::string, ItemAnalysis> m;
    for (const auto& item : corpus()) m.emplace(item.name, analyze(item.window(), item.model(), options()));
    return m;
  }();
  return cache;
}

Outcome worst_check(const std::function<Check(const ItemAnalysis&)>& run) {
  Outcome o{true, 0.0, 0.0, ""};
  for (const auto& [name, a] : analyses()) {
    const auto c = run(a);
    o.limit = c.limit;
    if (c.value >= o.value) o.value = c.value;
    if (!c.passed) {
      o.passed = false;
      o.note += " " + name;
    }
  }
  return o;
}

Outcome knopp_interval() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const std::vector<std::string> bases = {"alt", "alt_decay", "sparse_spike(squares)", "const(0.5)"};
  Outcome o{true, 0.0, kTol, ""};
  for (int i = 0; i < 20; ++i) {
    std::string spec;
    char buf[128];
    if (i % 2 == 0) {
      std::snprintf(buf, sizeof buf, "cycle((%.6f),(%.6f),(%.6f))", u(rng), u(rng), u(rng));
      spec = buf;
    } else {
      spec = bases[static_cast<std::size_t>(i / 2) % bases.size()];
    }
    std::snprintf(buf, sizeof buf, "+noise(%.3f,%d)", 0.05 + 0.05 * (i % 5), 100 + i);
    spec += buf;
    auto x = generate(spec, 10000);
    auto v = values(x);
    auto r = core_by_support(x, make_fin());
    const double hi = r.result.support(Point{1.0}), lo = -r.result.support(Point{-1.0});
    const double err = std::max(std::abs(hi - oracle::tail_max(v)), std::abs(lo - oracle::tail_min(v)));
    o.value = std::max(o.value, err);
  }
  o.passed = o.value <= kTol;
  return o;
}

Outcome caratheodory_bound() {
  Outcome o{true, 0.0, 1e-9, ""};
  std::mt19937_64 rng(77);
  for (const auto& [name, a] : analyses()) {
    const auto& pts = a.clusters.points;
    if (pts.empty()) continue;
    const std::size_t k = a.window.dim();
    std::gamma_distribution<double> g(1.0, 1.0);
    for (int t = 0; t < 50; ++t) {
      std::vector<double> w(pts.size());
      double total = 0.0;
      for (auto& x : w) total += (x = g(rng));
      Point p(k, 0.0);
      for (std::size_t j = 0; j < pts.size(); ++j)
        for (std::size_t c = 0; c < k; ++c) p[c] += w[j] / total * pts[j][c];
      const auto combo = caratheodory_decompose(p, a.clusters);
      o.value = std::max(o.value, barycenter_error(p, combo));
      bool members = true;
      for (const auto& s : combo.supports)
        members = members && std::find(pts.begin(), pts.end(), s) != pts.end();
      if (combo.supports.size() > k + 1 || !members || !is_measure(combo)) {
        o.passed = false;
        o.note += " " + name;
      }
    }
  }
  o.passed = o.passed && o.value <= 1e-9;
  return o;
}

Outcome choquet_measures() {
  Outcome o{true, 0.0, 1e-9, ""};
  for (const auto& [name, a] : analyses()) {
    const auto& pts = a.clusters.points;
    if (pts.empty()) continue;
    for (const auto& p : sample_hull_points(pts, 50, 5)) {
      const auto combo = caratheodory_decompose(p, a.clusters);
      if (!is_measure(combo)) o.passed = false;
      o.value = std::max(o.value, barycenter_error(p, combo));
    }
    const auto extra = sample_hull_points(pts, 50, 6);
    for (std::size_t i = 0; i < extra.size(); ++i) {
      const auto m = choquet_measure(extra[i], a.clusters, 4, 1000 + i);
      if (!is_measure(m)) o.passed = false;
      o.value = std::max(o.value, barycenter_error(extra[i], m));
    }
  }
  o.passed = o.passed && o.value <= 1e-9;
  return o;
}

Outcome statistical_convergence() {
  Outcome o{true, 0.0, kTol, ""};
  auto spike = generate("sparse_spike(squares)", 10000);
  auto z = is_ideal_convergent(spike, make_density_zero(), kEquiv);
  if (!z) {
    o.passed = false;
    o.note = " spike not Z-convergent";
  } else {
    o.value = std::abs((*z)[0]);
  }
  if (is_ideal_convergent(spike, make_fin(), kEquiv)) {
    o.passed = false;
    o.note += " spike Fin-convergent";
  }
  struct Case {
    std::string seq;
    FiniteIdealModel ideal;
    std::size_t scale;
    double c;
  };
  const std::vector<Case> cases = {{"const(0.75)", make_fin(), 10000, 0.75},
                                   {"const(-2)", make_density_zero(), 10000, -2.0},
                                   {"dconst(0.75)", make_pringsheim(), 256, 0.75},
                                   {"dconst(-2)", make_double_density(), 256, -2.0},
                                   {"dconst(1.5)", make_e_ideal(), 256, 1.5}};
  for (const auto& c : cases) {
    auto l = is_ideal_convergent(generate(c.seq, c.scale), c.ideal, kEquiv);
    if (!l) {
      o.passed = false;
      o.note += " " + c.seq + " under " + c.ideal.name();
      continue;
    }
    o.value = std::max(o.value, std::abs((*l)[0] - c.c));
  }
  o.passed = o.passed && o.value <= kTol;
  return o;
}

Outcome unbounded_counterexample() {
  Outcome o{true, 0.0, 0.0, ""};
  try {
    core_by_support(generate("alt_linear", 10000), make_density_zero());
    o.passed = false;
    o.note = " no unbounded error";
  } catch (const UnboundedSequenceError&) {
  }
  CoreParams p;
  p.bound = std::nullopt;
  p.box = std::make_pair(Point{-kDefaultBound}, Point{kDefaultBound});
  auto hull = core_by_cluster_hull(generate("alt_linear", 10000), make_density_zero(), p);
  if (!hull.result.is_empty()) {
    o.passed = false;
    o.note += " cluster hull not empty";
  }
  const double d3 = core_by_support(generate("alt_linear", 1000), make_density_zero(), p).result.diameter();
  const double d4 = core_by_support(generate("alt_linear", 10000), make_density_zero(), p).result.diameter();
  o.value = d4 - d3;
  if (!(d4 > d3)) o.passed = false;
  char buf[96];
  std::snprintf(buf, sizeof buf, " diameter %.1f at N=1e3, %.1f at N=1e4", d3, d4);
  o.note += buf;
  return o;
}

double nearest_linf(const std::vector<Point>& pts, const Point& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& q : pts) {
    double d = 0.0;
    for (std::size_t a = 0; a < p.size(); ++a) d = std::max(d, std::abs(q[a] - p[a]));
    best = std::min(best, d);
  }
  return best;
}

Outcome double_inclusion() {
  Outcome o{true, 0.0, kEquiv, ""};
  for (const char* seq : {"dalt", "row_alt", "col_alt", "inv_sum", "dcycle((0,0),(1,0),(0,1))"}) {
    auto x = generate(seq, 256);
    const auto cp = options().core_params();
    auto ce = estimate_clusters(x, make_e_ideal(), cp.cluster_options());
    auto cpr = estimate_clusters(x, make_pringsheim(), cp.cluster_options());
    for (const auto& p : ce.points)
      if (nearest_linf(cpr.points, p) > 2.0 * cpr.radius) {
        o.passed = false;
        o.note += std::string(" ") + seq + " candidate";
        break;
      }
    auto e = core_by_support(x, make_e_ideal(), cp);
    auto pc = core_by_support(x, make_pringsheim(), cp);
    for (const auto& u : direction_set(x.dim(), 64))
      o.value = std::max(o.value, e.result.support(u) - pc.result.support(u));
  }
  o.passed = o.passed && o.value <= kEquiv;
  return o;
}

Outcome euler_means() {
  Outcome o{true, 0.0, 1e-12, ""};
  EulerRowGenerator gen(0.5);
  std::vector<double> ones(2049, 1.0);
  double row_err = std::abs(gen.row()[0] - 1.0);
  for (std::size_t n = 1; n <= 2048; ++n) {
    gen.advance();
    row_err = std::max(row_err, std::abs(compensated_dot(gen.row(), ones, Execution::serial) - 1.0));
  }
  o.value = row_err;
  if (row_err > 1e-12) o.passed = false;

  auto alt = generate("alt", 10000);
  CoreParams fine;
  fine.delta = 1e-3;
  auto half = euler_core(alt, 0.5, fine);
  const double spread = std::max(half.result.support(Point{1.0}), half.result.support(Point{-1.0}));
  if (spread > kTol) {
    o.passed = false;
    o.note += " r=1/2 core not {0}";
  }
  double knopp = 0.0;
  for (const char* seq : {"alt", "alt_decay", "sparse_spike(squares)+noise(0.1,3)"}) {
    auto x = generate(seq, 10000);
    knopp = std::max(knopp, hausdorff_distance(euler_core(x, 1.0).result, core_by_support(x, make_fin()).result));
  }
  if (knopp > kTol) {
    o.passed = false;
    o.note += " r=1 differs from Knopp core";
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, " r=1/2 spread %.3g, r=1 gap %.3g", spread, knopp);
  o.note += buf;
  return o;
}

Outcome hull_oracle() {
  Outcome o{true, 0.0, 0.0, ""};
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> coord(-4, 4);
  std::size_t mismatches = 0, inside = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = 1 + static_cast<std::size_t>(t) % 4;
    const std::size_t n = 2 + static_cast<std::size_t>(t) % (k + 4);
    std::vector<Point> s(n, Point(k));
    for (auto& p : s)
      for (auto& c : p) c = coord(rng);
    Point p(k);
    switch (t % 4) {
      case 0:  // a generator
        p = s[static_cast<std::size_t>(t) % n];
        break;
      case 1:  // midpoint of two generators, on an edge or inside
        for (std::size_t a = 0; a < k; ++a) p[a] = 0.5 * (s[0][a] + s[1][a]);
        break;
      default:
        for (auto& c : p) c = 0.5 * coord(rng);
    }
    const bool want = oracle::in_hull_bruteforce(p, s);
    const auto got = hull_membership(p, s, Arithmetic::exact);
    inside += want ? 1 : 0;
    if (got.inside != want || !got.exact) ++mismatches;
  }
  o.value = static_cast<double>(mismatches);
  o.passed = mismatches == 0;
  o.note = " " + std::to_string(inside) + " of 100 inside";
  return o;
}

}  // namespace

int main() {
  const auto opts = options();
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"knopp interval", knopp_interval},
      {"support vs cluster hull",
       [&] { return worst_check([&](const ItemAnalysis& a) { return check_equivalence(a, opts); }); }},
      {"ball probe agreement",
       [&] { return worst_check([&](const ItemAnalysis& a) { return check_probe_agreement(a, opts); }); }},
      {"caratheodory", caratheodory_bound},
      {"barycentric measures", choquet_measures},
      {"clusters inside cores",
       [&] { return worst_check([&](const ItemAnalysis& a) { return check_cluster_inclusion(a, opts); }); }},
      {"statistical convergence", statistical_convergence},
      {"unbounded counterexample", unbounded_counterexample},
      {"small perturbation",
       [&] { return worst_check([&](const ItemAnalysis& a) { return check_perturbation(a, opts); }); }},
      {"double inclusion", double_inclusion},
      {"euler means", euler_means},
      {"hull membership oracle", hull_oracle},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.passed = false;
      o.note = std::string(" exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %2zu %s: %.6g (limit %.3g)%s [%.1fs]\n", o.passed ? "PASS" : "FAIL", i + 1,
                criteria[i].name, o.value, o.limit, o.note.c_str(), secs);
    std::fflush(stdout);
    failed += o.passed ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
