#include <catch_amalgamated.hpp>

#include <random>

#include "icore/error.hpp"
#include "icore/lp.hpp"

using namespace icore;

namespace {

double row_dot(const std::vector<double>& a, const std::vector<double>& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * x[i];
  return s;
}

bool satisfies(const LinearProgram& lp, const std::vector<double>& x, double tol) {
  for (std::size_t j = 0; j < lp.num_vars; ++j)
    if ((lp.free_vars.empty() || !lp.free_vars[j]) && x[j] < -tol) return false;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const double v = row_dot(lp.rows[i], x);
    switch (lp.senses[i]) {
      case Sense::less_equal: if (v > lp.rhs[i] + tol) return false; break;
      case Sense::greater_equal: if (v < lp.rhs[i] - tol) return false; break;
      case Sense::equal: if (std::abs(v - lp.rhs[i]) > tol) return false; break;
    }
  }
  return true;
}

LinearProgram random_lp(std::mt19937_64& rng, std::size_t vars, std::size_t rows) {
  std::uniform_int_distribution<int> coef(-4, 4);
  LinearProgram lp;
  lp.num_vars = vars;
  for (std::size_t j = 0; j < vars; ++j) lp.objective.push_back(coef(rng));
  for (std::size_t i = 0; i < rows; ++i) {
    std::vector<double> r(vars);
    for (auto& c : r) c = coef(rng);
    lp.add_row(r, i % 3 == 2 ? Sense::greater_equal : Sense::less_equal, coef(rng) + 3);
  }
  // keep it bounded
  lp.add_row(std::vector<double>(vars, 1.0), Sense::less_equal, 10);
  return lp;
}

}  // namespace

TEST_CASE("lp examples") {
  LinearProgram lp;
  lp.num_vars = 1;
  lp.objective = {1};
  lp.add_row({1}, Sense::less_equal, 1);
  auto s = lp_solve(lp);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.x[0] == 1.0);
  CHECK(s.objective == 1.0);
  CHECK(s.exact);

  LinearProgram bad;
  bad.num_vars = 1;
  bad.objective = {0};
  bad.add_row({1}, Sense::less_equal, 0);
  bad.add_row({1}, Sense::greater_equal, 1);
  auto b = lp_solve(bad);
  CHECK(b.status == LpStatus::infeasible);
  REQUIRE(b.farkas.size() == 2);
  CHECK(b.farkas[0] <= 0.0);
  CHECK(b.farkas[1] >= 0.0);
  CHECK(b.farkas[0] + b.farkas[1] <= 0.0);
  CHECK(b.farkas[0] * 0 + b.farkas[1] * 1 > 0.0);

  LinearProgram unb;
  unb.num_vars = 2;
  unb.objective = {1, 1};
  unb.add_row({1, -1}, Sense::less_equal, 1);
  CHECK(lp_solve(unb).status == LpStatus::unbounded);
}

TEST_CASE("degenerate programs terminate") {
  // Beale's cycling example
  LinearProgram lp;
  lp.num_vars = 4;
  lp.objective = {0.75, -20, 0.5, -6};
  lp.add_row({0.25, -8, -1, 9}, Sense::less_equal, 0);
  lp.add_row({0.5, -12, -0.5, 3}, Sense::less_equal, 0);
  lp.add_row({0, 0, 1, 0}, Sense::less_equal, 1);
  for (auto a : {Arithmetic::exact, Arithmetic::floating}) {
    auto s = lp_solve(lp, a);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.objective == Catch::Approx(1.25));
  }
  // many copies of the same constraint
  LinearProgram red;
  red.num_vars = 2;
  red.objective = {1, 2};
  for (int i = 0; i < 30; ++i) red.add_row({1, 1}, Sense::less_equal, 1);
  red.add_row({1, 1}, Sense::equal, 1);
  red.add_row({2, 2}, Sense::equal, 2);
  auto s = lp_solve(red);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.objective == 2.0);
}

TEST_CASE("exact and floating solvers agree on random programs") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 60; ++t) {
    auto lp = random_lp(rng, 2 + t % 5, 3 + t % 7);
    auto e = lp_solve(lp, Arithmetic::exact);
    auto f = lp_solve(lp, Arithmetic::floating);
    REQUIRE(e.status == f.status);
    if (e.status != LpStatus::optimal) continue;
    CHECK(e.objective == Catch::Approx(f.objective).margin(1e-9));
    CHECK(satisfies(lp, e.x, 1e-12));
    CHECK(satisfies(lp, f.x, 1e-9));
    // weak duality with the returned duals: b^T y equals the objective
    double by = 0.0;
    for (std::size_t i = 0; i < lp.rhs.size(); ++i) by += lp.rhs[i] * e.duals[i];
    CHECK(by == Catch::Approx(e.objective).margin(1e-9));
  }
}

TEST_CASE("farkas certificates are valid") {
  std::mt19937_64 rng(23);
  int seen = 0;
  for (int t = 0; t < 200 && seen < 20; ++t) {
    auto lp = random_lp(rng, 3, 6);
    auto s = lp_solve(lp, Arithmetic::exact);
    if (s.status != LpStatus::infeasible) continue;
    ++seen;
    const auto& y = s.farkas;
    REQUIRE(y.size() == lp.rows.size());
    double yb = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      yb += y[i] * lp.rhs[i];
      if (lp.senses[i] == Sense::less_equal) CHECK(y[i] <= 0.0);
      if (lp.senses[i] == Sense::greater_equal) CHECK(y[i] >= 0.0);
    }
    CHECK(yb > 0.0);
    for (std::size_t j = 0; j < lp.num_vars; ++j) {
      double col = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) col += y[i] * lp.rows[i][j];
      CHECK(col <= 1e-12);
    }
  }
  CHECK(seen > 0);
}

TEST_CASE("free variables") {
  LinearProgram lp;
  lp.num_vars = 1;
  lp.free_vars = {true};
  lp.objective = {-1};
  lp.add_row({1}, Sense::greater_equal, -3.5);
  auto s = lp_solve(lp);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.x[0] == -3.5);
}

TEST_CASE("size limits and arithmetic selection") {
  CHECK(uses_exact_arithmetic(10, 10));
  CHECK(uses_exact_arithmetic(900, 30));
  CHECK_FALSE(uses_exact_arithmetic(2000, 40));
  LinearProgram big;
  big.num_vars = 1;
  big.objective = {1};
  for (std::size_t i = 0; i <= kMaxLpRows; ++i) big.add_row({1}, Sense::less_equal, 1);
  CHECK_THROWS_AS(lp_solve(big), SizeLimitError);
  LinearProgram wrong;
  wrong.num_vars = 2;
  wrong.objective = {1};
  CHECK_THROWS_AS(lp_solve(wrong), ParameterError);
}
