#include <catch_amalgamated.hpp>

#include <random>

#include "icore/corpus.hpp"
#include "icore/error.hpp"
#include "icore/scalar_limits.hpp"
#include "oracles.hpp"

using namespace icore;

namespace {

std::vector<double> values(const SequenceWindow& w) { return {w.coords().begin(), w.coords().end()}; }

SequenceWindow random_window(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return SequenceWindow(1, {Arity::single, n}, std::move(v), "random");
}

}  // namespace

TEST_CASE("limsup examples") {
  auto fin = make_fin();
  auto z = make_density_zero();
  CHECK(ideal_limsup(generate("alt", 10000), fin, {1e-3}) == Catch::Approx(1.0).margin(1e-3));
  CHECK(ideal_limsup(generate("sparse_spike(squares)", 10000), z) == Catch::Approx(0.0).margin(1e-2));
  CHECK(ideal_limsup(generate("sparse_spike(squares)", 10000), fin) == Catch::Approx(1.0).margin(1e-2));
}

TEST_CASE("spike verdicts match a density count") {
  const std::size_t n = 10000;
  const double d = oracle::tail_density(n / 2, n, [](std::size_t i) { return is_perfect_square(i); });
  CHECK(d < kDefaultDensityTheta);
  CHECK(oracle::tail_density(n / 2, n, [](std::size_t i) { return i % 2 == 0; }) >= kDefaultDensityTheta);
}

TEST_CASE("liminf examples") {
  auto fin = make_fin();
  CHECK(ideal_liminf(generate("alt", 1000), fin) == Catch::Approx(-1.0).margin(1e-2));
  CHECK(ideal_liminf(generate("alt_decay", 10000), fin) == Catch::Approx(-1.0).margin(1e-2));
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    auto w = random_window(rng, 500 + 10 * t);
    auto v = values(w);
    std::vector<double> neg(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) neg[i] = -v[i];
    for (const auto& m : {make_fin(), make_density_zero()}) {
      CHECK(liminf_of_values(v, w.shape(), m, 1e-2) == -limsup_of_values(neg, w.shape(), m, 1e-2));
    }
  }
}

TEST_CASE("convergence verdicts") {
  auto z = make_density_zero();
  auto fin = make_fin();
  auto spike = generate("sparse_spike(squares)", 10000);
  auto lim = is_scalar_ideal_convergent(spike, z, 2e-2);
  REQUIRE(lim);
  CHECK(*lim == Catch::Approx(0.0).margin(1e-2));
  CHECK_FALSE(is_scalar_ideal_convergent(generate("alt", 10000), fin, 2e-2));
  for (double c : {-3.5, 0.0, 0.125, 7.0}) {
    auto w = generate("const(" + std::to_string(c) + ")", 2000);
    for (const auto& m : {fin, z}) {
      auto l = is_scalar_ideal_convergent(w, m, 1e-2);
      REQUIRE(l);
      CHECK(*l == Catch::Approx(c).margin(1e-2));
    }
  }
}

TEST_CASE("fast limsup equals the grid scan") {
  std::mt19937_64 rng(9);
  std::vector<FiniteIdealModel> singles = {make_fin(), make_density_zero(), make_density_zero(0.2, 0.1)};
  for (int t = 0; t < 30; ++t) {
    auto w = random_window(rng, 200 + 31 * t);
    auto v = values(w);
    for (const auto& m : singles)
      for (double delta : {1e-1, 1e-2}) {
        CHECK(limsup_of_values(v, w.shape(), m, delta) == limsup_by_grid_scan(v, w.shape(), m, delta));
      }
  }
  std::vector<FiniteIdealModel> doubles = {make_pringsheim(), make_double_density(), make_e_ideal()};
  for (const char* spec : {"dalt+noise(0.2,1)", "row_alt+noise(0.3,2)", "inv_sum"}) {
    auto w = generate(spec, 40);
    auto v = values(w);
    for (const auto& m : doubles)
      CHECK(limsup_of_values(v, w.shape(), m, 1e-2) == limsup_by_grid_scan(v, w.shape(), m, 1e-2));
  }
}

TEST_CASE("fin limits match the tail extremes") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 25; ++t) {
    auto w = random_window(rng, 1000 + 17 * t);
    auto v = values(w);
    const auto r = scalar_limits(w, make_fin());
    CHECK(std::abs(r.ilimsup - oracle::tail_max(v)) <= r.delta);
    CHECK(std::abs(r.iliminf - oracle::tail_min(v)) <= r.delta);
    CHECK(r.iliminf <= r.ilimsup + r.delta);
  }
}

TEST_CASE("limsup is monotone in the ideal on the corpus") {
  for (const auto& item : corpus()) {
    auto w = item.window();
    if (w.arity() != Arity::single) continue;
    for (std::size_t a = 0; a < w.dim(); ++a) {
      auto c = w.component(a);
      const double fin = limsup_of_values(c, w.shape(), make_fin(), 1e-2);
      const double z = limsup_of_values(c, w.shape(), make_density_zero(), 1e-2);
      CHECK(z <= fin + 1e-2);
    }
  }
  for (const char* name : {"dalt-ip", "rowalt-ie", "dcycle-ip"}) {
    auto w = corpus_item(name).window();
    auto c = w.component(0);
    const double p = limsup_of_values(c, w.shape(), make_pringsheim(), 1e-2);
    CHECK(limsup_of_values(c, w.shape(), make_e_ideal(), 1e-2) <= p + 1e-2);
    CHECK(limsup_of_values(c, w.shape(), make_double_density(), 1e-2) <= p + 1e-2);
  }
}

TEST_CASE("boundedness is enforced") {
  auto w = generate("alt_linear", 10000);
  CHECK_THROWS_AS(ideal_limsup(w, make_density_zero()), UnboundedSequenceError);
  CHECK_THROWS_AS(require_ideal_bounded(w, make_fin(), 1e3), UnboundedSequenceError);
  CHECK_FALSE(is_ideal_bounded(w, make_density_zero(), 1e3));
  CHECK(is_ideal_bounded(w, make_density_zero(), 1e5));
  CHECK_NOTHROW(ideal_limsup(w, make_density_zero(), {1e-2, std::nullopt}));
  CHECK_THROWS_AS(ideal_limsup(generate("alt", 10), make_fin(), {0.0}), ParameterError);
  CHECK_THROWS_AS(ideal_limsup(generate("cycle((0,0),(1,1))", 10), make_fin()), ParameterError);
}
