#include "icore/scalar_limits.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "icore/error.hpp"

namespace icore {

namespace {

void check_values(std::span<const double> values, const WindowShape& shape, double delta) {
  if (values.empty()) throw ParameterError("empty window");
  if (values.size() != shape.size()) throw ParameterError("value count does not match window");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ParameterError("delta must be > 0");
}

std::size_t grid_top(double lo, double hi, double delta) {
  const double steps = std::ceil((hi - lo) / delta);
  if (steps > 1e12) throw SizeLimitError("value grid too fine for the value range");
  return static_cast<std::size_t>(steps);
}

double grid_value(double lo, std::size_t j, double delta) {
  return lo + static_cast<double>(j) * delta;
}

}  // namespace

bool is_ideal_bounded(const SequenceWindow& x, const FiniteIdealModel& ideal, double bound) {
  std::vector<std::size_t> outside;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double norm2 = 0.0;
    for (double c : x.point(i)) norm2 += c * c;
    if (std::sqrt(norm2) > bound) outside.push_back(i);
  }
  return outside.empty() || ideal.is_small_flat(outside, x.shape());
}

void require_ideal_bounded(const SequenceWindow& x, const FiniteIdealModel& ideal, double bound) {
  if (!is_ideal_bounded(x, ideal, bound)) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", bound);
    throw UnboundedSequenceError("sequence '" + x.source() + "' is not " + ideal.name() +
                                 "-bounded: {n : |x_n| > " + buf + "} is not small at scale " +
                                 std::to_string(x.scale()));
  }
}

double limsup_of_values(std::span<const double> values, const WindowShape& shape,
                        const FiniteIdealModel& ideal, double delta) {
  check_values(values, shape, delta);
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const std::size_t top = grid_top(lo, *hi_it, delta);

  const std::size_t n = values.size();

  // Descending by value, ties by index, popped from a heap as far as needed.
  std::vector<std::pair<double, std::size_t>> heap(n);
  for (std::size_t i = 0; i < n; ++i) heap[i] = {-values[i], i};
  const auto later = std::greater<std::pair<double, std::size_t>>{};
  std::make_heap(heap.begin(), heap.end(), later);
  auto heap_end = heap.end();
  std::vector<std::size_t> order;
  order.reserve(n);
  auto prefix_small = [&](std::size_t len) {
    while (order.size() < len) {
      std::pop_heap(heap.begin(), heap_end, later);
      --heap_end;
      order.push_back(heap_end->second);
    }
    return ideal.is_small_flat(std::span<const std::size_t>(order.data(), len), shape);
  };
  // Smallest prefix length whose index set is not small: gallop from the
  // top, then bisect.
  std::size_t left = 0;  // prefix(left) small (left = 0 is the empty set)
  std::size_t first_large = 1;
  bool small = prefix_small(first_large);
  while (small && first_large < n) {
    left = first_large;
    first_large = std::min(n, 2 * first_large);
    small = prefix_small(first_large);
  }
  if (small) return lo;  // only a degenerate model gets here
  while (first_large - left > 1) {
    const std::size_t mid = left + (first_large - left) / 2;
    if (prefix_small(mid))
      left = mid;
    else
      first_large = mid;
  }
  const double pivot = values[order[first_large - 1]];

  // {x > t} is not small iff pivot > t. Find the largest grid j with
  // (lo + j*delta) - delta < pivot, evaluated exactly as the grid scan does.
  auto admissible = [&](std::size_t j) { return grid_value(lo, j, delta) - delta < pivot; };
  double guess = std::floor((pivot - lo) / delta) + 1.0;
  std::size_t j = guess < 0.0 ? 0 : std::min<std::size_t>(static_cast<std::size_t>(guess), top);
  while (j < top && admissible(j + 1)) ++j;
  while (j > 0 && !admissible(j)) --j;
  return grid_value(lo, j, delta);
}

double limsup_by_grid_scan(std::span<const double> values, const WindowShape& shape,
                           const FiniteIdealModel& ideal, double delta) {
  check_values(values, shape, delta);
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const std::size_t top = grid_top(lo, *hi_it, delta);
  std::vector<std::size_t> above;
  for (std::size_t j = top + 1; j-- > 0;) {
    const double v = grid_value(lo, j, delta);
    above.clear();
    for (std::size_t i = 0; i < values.size(); ++i)
      if (values[i] > v - delta) above.push_back(i);
    if (!ideal.is_small_flat(above, shape)) return v;
  }
  return lo;
}

double liminf_of_values(std::span<const double> values, const WindowShape& shape,
                        const FiniteIdealModel& ideal, double delta) {
  std::vector<double> negated(values.size());
  std::transform(values.begin(), values.end(), negated.begin(), [](double v) { return -v; });
  return 0.0 - limsup_of_values(negated, shape, ideal, delta);
}

namespace {

std::vector<double> scalar_values(const SequenceWindow& x, const FiniteIdealModel& ideal,
                                  const LimitOptions& options) {
  if (x.dim() != 1) throw ParameterError("scalar limits need a real-valued (dim 1) window");
  if (options.bound) require_ideal_bounded(x, ideal, *options.bound);
  return x.component(0);
}

}  // namespace

double ideal_limsup(const SequenceWindow& x, const FiniteIdealModel& ideal,
                    const LimitOptions& options) {
  auto values = scalar_values(x, ideal, options);
  return limsup_of_values(values, x.shape(), ideal, options.delta);
}

double ideal_liminf(const SequenceWindow& x, const FiniteIdealModel& ideal,
                    const LimitOptions& options) {
  auto values = scalar_values(x, ideal, options);
  return liminf_of_values(values, x.shape(), ideal, options.delta);
}

ScalarLimitReport scalar_limits(const SequenceWindow& x, const FiniteIdealModel& ideal,
                                const LimitOptions& options) {
  auto values = scalar_values(x, ideal, options);
  ScalarLimitReport report;
  report.ilimsup = limsup_of_values(values, x.shape(), ideal, options.delta);
  report.iliminf = liminf_of_values(values, x.shape(), ideal, options.delta);
  report.delta = options.delta;
  report.scale = x.scale();
  return report;
}

std::optional<double> is_scalar_ideal_convergent(const SequenceWindow& x,
                                                 const FiniteIdealModel& ideal, double tol,
                                                 const LimitOptions& options) {
  if (!(tol >= 0.0)) throw ParameterError("tolerance must be >= 0");
  const auto report = scalar_limits(x, ideal, options);
  if (report.ilimsup - report.iliminf > tol) return std::nullopt;
  return 0.5 * (report.ilimsup + report.iliminf);
}

}  // namespace icore
