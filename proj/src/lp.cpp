#include "icore/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "icore/error.hpp"

namespace icore {

namespace {

template <class Scalar>
struct Numeric;

template <>
struct Numeric<double> {
  static bool positive_cost(double v) { return v > 1e-10; }
  static bool positive_pivot(double v) { return v > 1e-12; }
  static bool zero(double v) { return std::abs(v) <= 1e-12; }
  static bool ratio_less(double a, double b) { return a < b - 1e-12 * (1.0 + std::abs(b)); }
  static bool ratio_equal(double a, double b) {
    return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(b));
  }
  static bool infeasible(double phase1, double scale) { return phase1 < -1e-9 * (1.0 + scale); }
  static double magnitude(double v) { return std::abs(v); }
};

template <>
struct Numeric<mpq_class> {
  static bool positive_cost(const mpq_class& v) { return sgn(v) > 0; }
  static bool positive_pivot(const mpq_class& v) { return sgn(v) > 0; }
  static bool zero(const mpq_class& v) { return sgn(v) == 0; }
  static bool ratio_less(const mpq_class& a, const mpq_class& b) { return a < b; }
  static bool ratio_equal(const mpq_class& a, const mpq_class& b) { return a == b; }
  static bool infeasible(const mpq_class& phase1, double) { return sgn(phase1) < 0; }
  static double magnitude(const mpq_class& v) { return std::abs(v.get_d()); }
};

template <class Scalar>
class Tableau {
  using Num = Numeric<Scalar>;

 public:
  explicit Tableau(const LinearProgramT<Scalar>& lp) : lp_(lp) { build(); }

  LpSolutionT<Scalar> solve() {
    LpSolutionT<Scalar> out;
    if (num_artificial_ > 0) {
      std::vector<Scalar> cost(cols_, Scalar(0));
      for (std::size_t j = artificial_begin_; j < cols_; ++j) cost[j] = Scalar(-1);
      set_costs(cost);
      run(/*allow_artificial=*/true);
      double rhs_scale = 0.0;
      for (const auto& b : lp_.rhs) rhs_scale = std::max(rhs_scale, Num::magnitude(b));
      if (Num::infeasible(value_, rhs_scale)) {
        out.status = LpStatus::infeasible;
        out.farkas = row_duals(cost, /*farkas=*/true);
        out.pivots = pivots_;
        return out;
      }
      drive_out_artificials();
    }
    std::vector<Scalar> cost(cols_, Scalar(0));
    for (std::size_t j = 0; j < lp_.num_vars; ++j) {
      cost[pos_col_[j]] = lp_.objective[j];
      if (neg_col_[j] != kNone) cost[neg_col_[j]] = -lp_.objective[j];
    }
    set_costs(cost);
    if (!run(/*allow_artificial=*/false)) {
      out.status = LpStatus::unbounded;
      out.pivots = pivots_;
      return out;
    }
    out.status = LpStatus::optimal;
    out.objective = value_;
    std::vector<Scalar> col_value(cols_, Scalar(0));
    for (std::size_t r = 0; r < basis_.size(); ++r) col_value[basis_[r]] = at(r, cols_);
    out.x.assign(lp_.num_vars, Scalar(0));
    for (std::size_t j = 0; j < lp_.num_vars; ++j) {
      out.x[j] = col_value[pos_col_[j]];
      if (neg_col_[j] != kNone) out.x[j] -= col_value[neg_col_[j]];
    }
    out.duals = row_duals(cost, /*farkas=*/false);
    out.pivots = pivots_;
    return out;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  Scalar& at(std::size_t r, std::size_t c) { return cells_[r * (cols_ + 1) + c]; }

  void build() {
    const std::size_t m = lp_.rows.size();
    pos_col_.assign(lp_.num_vars, kNone);
    neg_col_.assign(lp_.num_vars, kNone);
    std::size_t c = 0;
    for (std::size_t j = 0; j < lp_.num_vars; ++j) {
      pos_col_[j] = c++;
      if (!lp_.free_vars.empty() && lp_.free_vars[j]) neg_col_[j] = c++;
    }
    sign_.assign(m, 1);
    std::vector<Sense> normalized(m);
    std::size_t slack_count = 0;
    for (std::size_t i = 0; i < m; ++i) {
      Sense s = lp_.senses[i];
      if (lp_.rhs[i] < 0) {
        sign_[i] = -1;
        if (s == Sense::less_equal)
          s = Sense::greater_equal;
        else if (s == Sense::greater_equal)
          s = Sense::less_equal;
      }
      normalized[i] = s;
      if (s != Sense::equal) ++slack_count;
      if (s != Sense::less_equal) ++num_artificial_;
    }
    artificial_begin_ = c + slack_count;
    cols_ = artificial_begin_ + num_artificial_;
    cells_.assign(m * (cols_ + 1), Scalar(0));
    identity_col_.assign(m, kNone);
    basis_.assign(m, kNone);
    std::size_t slack = c;
    std::size_t artificial = artificial_begin_;
    for (std::size_t i = 0; i < m; ++i) {
      const Scalar sigma(sign_[i]);
      for (std::size_t j = 0; j < lp_.num_vars; ++j) {
        at(i, pos_col_[j]) = sigma * lp_.rows[i][j];
        if (neg_col_[j] != kNone) at(i, neg_col_[j]) = -(sigma * lp_.rows[i][j]);
      }
      at(i, cols_) = sigma * lp_.rhs[i];
      if (normalized[i] == Sense::less_equal) {
        at(i, slack) = Scalar(1);
        identity_col_[i] = slack++;
      } else {
        if (normalized[i] == Sense::greater_equal) at(i, slack++) = Scalar(-1);
        at(i, artificial) = Scalar(1);
        identity_col_[i] = artificial++;
      }
      basis_[i] = identity_col_[i];
      row_of_constraint_.push_back(i);
    }
  }

  void set_costs(const std::vector<Scalar>& cost) {
    cost_ = cost;
    reduced_.assign(cols_, Scalar(0));
    for (std::size_t j = 0; j < cols_; ++j) {
      Scalar d = cost[j];
      for (std::size_t r = 0; r < basis_.size(); ++r) d -= cost[basis_[r]] * at(r, j);
      reduced_[j] = d;
    }
    value_ = Scalar(0);
    for (std::size_t r = 0; r < basis_.size(); ++r) value_ += cost[basis_[r]] * at(r, cols_);
  }

  void pivot(std::size_t r, std::size_t col) {
    const Scalar p = at(r, col);
    for (std::size_t c = 0; c <= cols_; ++c) at(r, c) /= p;
    for (std::size_t o = 0; o < basis_.size(); ++o) {
      if (o == r) continue;
      const Scalar f = at(o, col);
      if (Num::zero(f)) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(o, c) -= f * at(r, c);
    }
    const Scalar d = reduced_[col];
    if (!Num::zero(d)) {
      for (std::size_t c = 0; c < cols_; ++c) reduced_[c] -= d * at(r, c);
      value_ += d * at(r, cols_);
    }
    basis_[r] = col;
    ++pivots_;
  }

  // Bland's rule. Returns false when unbounded.
  bool run(bool allow_artificial) {
    const std::size_t limit = allow_artificial ? cols_ : artificial_begin_;
    while (true) {
      std::size_t enter = kNone;
      for (std::size_t j = 0; j < limit; ++j)
        if (Num::positive_cost(reduced_[j])) {
          enter = j;
          break;
        }
      if (enter == kNone) return true;
      std::size_t leave = kNone;
      Scalar best{};
      for (std::size_t r = 0; r < basis_.size(); ++r) {
        if (!Num::positive_pivot(at(r, enter))) continue;
        Scalar ratio = at(r, cols_) / at(r, enter);
        if (leave == kNone || Num::ratio_less(ratio, best) ||
            (Num::ratio_equal(ratio, best) && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == kNone) return false;
      pivot(leave, enter);
    }
  }

  void drive_out_artificials() {
    for (std::size_t r = 0; r < basis_.size();) {
      if (basis_[r] < artificial_begin_) {
        ++r;
        continue;
      }
      std::size_t col = kNone;
      for (std::size_t j = 0; j < artificial_begin_; ++j)
        if (!Num::zero(at(r, j))) {
          col = j;
          break;
        }
      if (col != kNone) {
        pivot(r, col);
        ++r;
        continue;
      }
      // Redundant constraint: drop the row.
      const std::size_t stride = cols_ + 1;
      cells_.erase(cells_.begin() + static_cast<std::ptrdiff_t>(r * stride),
                   cells_.begin() + static_cast<std::ptrdiff_t>((r + 1) * stride));
      basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
      row_of_constraint_.erase(row_of_constraint_.begin() + static_cast<std::ptrdiff_t>(r));
    }
  }

  // y = c_B^T B^{-1}; column i of B^{-1} is the current column of the row's
  // initial identity column.
  std::vector<Scalar> row_duals(const std::vector<Scalar>& cost, bool farkas) {
    std::vector<Scalar> y(lp_.rows.size(), Scalar(0));
    for (std::size_t i = 0; i < lp_.rows.size(); ++i) {
      Scalar v(0);
      for (std::size_t r = 0; r < basis_.size(); ++r) v += cost[basis_[r]] * at(r, identity_col_[i]);
      const Scalar sigma(sign_[i]);
      y[i] = farkas ? Scalar(-(sigma * v)) : Scalar(sigma * v);
    }
    return y;
  }

  const LinearProgramT<Scalar>& lp_;
  std::vector<std::size_t> pos_col_, neg_col_;
  std::vector<int> sign_;
  std::vector<std::size_t> identity_col_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> row_of_constraint_;
  std::size_t num_artificial_ = 0;
  std::size_t artificial_begin_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> cells_;
  std::vector<Scalar> cost_;
  std::vector<Scalar> reduced_;
  Scalar value_{};
  std::size_t pivots_ = 0;
};

template <class Scalar>
void validate(const LinearProgramT<Scalar>& lp) {
  if (lp.rows.size() > kMaxLpRows || lp.num_vars > kMaxLpVars)
    throw SizeLimitError("LP exceeds " + std::to_string(kMaxLpRows) + " constraints or " +
                         std::to_string(kMaxLpVars) + " variables");
  if (lp.objective.size() != lp.num_vars) throw ParameterError("objective length mismatch");
  if (lp.senses.size() != lp.rows.size() || lp.rhs.size() != lp.rows.size())
    throw ParameterError("constraint arrays have different lengths");
  if (!lp.free_vars.empty() && lp.free_vars.size() != lp.num_vars)
    throw ParameterError("free_vars length mismatch");
  for (const auto& row : lp.rows)
    if (row.size() != lp.num_vars) throw ParameterError("constraint row length mismatch");
}

}  // namespace

template <class Scalar>
LpSolutionT<Scalar> simplex_solve(const LinearProgramT<Scalar>& lp) {
  validate(lp);
  return Tableau<Scalar>(lp).solve();
}

template LpSolutionT<double> simplex_solve(const LinearProgramT<double>&);
template LpSolutionT<mpq_class> simplex_solve(const LinearProgramT<mpq_class>&);

bool uses_exact_arithmetic(std::size_t rows, std::size_t vars) {
  return (vars <= 32 && rows <= 1000) || (rows <= 32 && vars <= 1000);
}

LpSolution lp_solve(const LinearProgram& lp, Arithmetic arithmetic) {
  validate(lp);
  for (const auto& row : lp.rows)
    for (double v : row)
      if (!std::isfinite(v)) throw ParameterError("non-finite LP coefficient");
  const bool exact = arithmetic == Arithmetic::exact ||
                     (arithmetic == Arithmetic::automatic &&
                      uses_exact_arithmetic(lp.rows.size(), lp.num_vars));
  LpSolution out;
  out.exact = exact;
  if (!exact) {
    auto s = simplex_solve(lp);
    out.status = s.status;
    out.x = std::move(s.x);
    out.objective = s.objective;
    out.duals = std::move(s.duals);
    out.farkas = std::move(s.farkas);
    return out;
  }
  LinearProgramT<mpq_class> q;
  q.num_vars = lp.num_vars;
  q.free_vars = lp.free_vars;
  q.senses = lp.senses;
  for (double v : lp.objective) q.objective.emplace_back(v);
  for (double v : lp.rhs) q.rhs.emplace_back(v);
  for (const auto& row : lp.rows) {
    std::vector<mpq_class> r;
    r.reserve(row.size());
    for (double v : row) r.emplace_back(v);
    q.rows.push_back(std::move(r));
  }
  auto s = simplex_solve(q);
  out.status = s.status;
  for (const auto& v : s.x) out.x.push_back(v.get_d());
  out.objective = s.objective.get_d();
  for (const auto& v : s.duals) out.duals.push_back(v.get_d());
  for (const auto& v : s.farkas) out.farkas.push_back(v.get_d());
  return out;
}

}  // namespace icore
