#ifndef ICORE_SCALAR_LIMITS_HPP
#define ICORE_SCALAR_LIMITS_HPP

#include <cstddef>
#include <optional>
#include <span>

#include "icore/ideal.hpp"
#include "icore/sequence.hpp"

namespace icore {

inline constexpr double kDefaultDelta = 1e-2;
inline constexpr double kDefaultBound = 1e3;

struct LimitOptions {
  double delta = kDefaultDelta;
  // {n : |x_n| > bound} must be small; nullopt disables the check.
  std::optional<double> bound = kDefaultBound;
};

struct ScalarLimitReport {
  double ilimsup = 0.0;
  double iliminf = 0.0;
  double delta = 0.0;
  std::size_t scale = 0;
};

bool is_ideal_bounded(const SequenceWindow& x, const FiniteIdealModel& ideal, double bound);

// Throws UnboundedSequenceError naming the bound and model.
void require_ideal_bounded(const SequenceWindow& x, const FiniteIdealModel& ideal, double bound);

// Largest grid value v = min + j*delta (j = 0..ceil((max-min)/delta)) for
// which {i : values[i] > v - delta} is not small. Uses one sort plus a
// bisection over the sorted prefix lengths, which is valid because every
// built-in model is monotone.
double limsup_of_values(std::span<const double> values, const WindowShape& shape,
                        const FiniteIdealModel& ideal, double delta);

// Literal descending grid scan; reference for limsup_of_values.
double limsup_by_grid_scan(std::span<const double> values, const WindowShape& shape,
                           const FiniteIdealModel& ideal, double delta);

double liminf_of_values(std::span<const double> values, const WindowShape& shape,
                        const FiniteIdealModel& ideal, double delta);

// Real-valued (dim 1) windows.
double ideal_limsup(const SequenceWindow& x, const FiniteIdealModel& ideal,
                    const LimitOptions& options = {});
double ideal_liminf(const SequenceWindow& x, const FiniteIdealModel& ideal,
                    const LimitOptions& options = {});
ScalarLimitReport scalar_limits(const SequenceWindow& x, const FiniteIdealModel& ideal,
                                const LimitOptions& options = {});

// Midpoint of [liminf, limsup] when the two are within tol.
std::optional<double> is_scalar_ideal_convergent(const SequenceWindow& x,
                                                 const FiniteIdealModel& ideal, double tol,
                                                 const LimitOptions& options = {});

}  // namespace icore

#endif  // ICORE_SCALAR_LIMITS_HPP
