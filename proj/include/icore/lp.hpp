#ifndef ICORE_LP_HPP
#define ICORE_LP_HPP

// Dense two-phase tableau simplex with Bland's rule, instantiated for exact
// rationals (mpq_class) and for double.

#include <cstddef>
#include <vector>

#include <gmpxx.h>

namespace icore {

enum class Sense { less_equal, greater_equal, equal };
enum class LpStatus { optimal, infeasible, unbounded };

// maximize objective . x subject to rows[i] . x (sense[i]) rhs[i]. Variables
// are nonnegative unless flagged in free_vars.
template <class Scalar>
struct LinearProgramT {
  std::size_t num_vars = 0;
  std::vector<Scalar> objective;
  std::vector<std::vector<Scalar>> rows;
  std::vector<Sense> senses;
  std::vector<Scalar> rhs;
  std::vector<bool> free_vars;

  void add_row(std::vector<Scalar> coeffs, Sense sense, Scalar value) {
    rows.push_back(std::move(coeffs));
    senses.push_back(sense);
    rhs.push_back(std::move(value));
  }
};

template <class Scalar>
struct LpSolutionT {
  LpStatus status = LpStatus::infeasible;
  std::vector<Scalar> x;
  Scalar objective{};
  // Optimal: a dual solution, one entry per row.
  std::vector<Scalar> duals;
  // Infeasible: y with y^T A <= 0 on nonnegative columns, y^T A = 0 on free
  // columns, y_i <= 0 on <= rows and >= 0 on >= rows, and y^T rhs > 0.
  std::vector<Scalar> farkas;
  std::size_t pivots = 0;
};

template <class Scalar>
LpSolutionT<Scalar> simplex_solve(const LinearProgramT<Scalar>& lp);

extern template LpSolutionT<double> simplex_solve(const LinearProgramT<double>&);
extern template LpSolutionT<mpq_class> simplex_solve(const LinearProgramT<mpq_class>&);

inline constexpr std::size_t kMaxLpRows = 10000;
inline constexpr std::size_t kMaxLpVars = 10000;

enum class Arithmetic { automatic, exact, floating };

using LinearProgram = LinearProgramT<double>;

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> x;
  double objective = 0.0;
  std::vector<double> duals;
  std::vector<double> farkas;
  bool exact = false;
};

// Exact arithmetic when the program is small (see uses_exact_arithmetic).
// Inputs are converted to rationals without rounding.
bool uses_exact_arithmetic(std::size_t rows, std::size_t vars);
LpSolution lp_solve(const LinearProgram& lp, Arithmetic arithmetic = Arithmetic::automatic);

}  // namespace icore

#endif  // ICORE_LP_HPP
