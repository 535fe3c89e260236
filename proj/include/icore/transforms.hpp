#ifndef ICORE_TRANSFORMS_HPP
#define ICORE_TRANSFORMS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "icore/core.hpp"
#include "icore/parallel.hpp"
#include "icore/sequence.hpp"

namespace icore {

inline constexpr double kMaxEulerR = 4.0;

// a_{n,k} = C(n,k) (1-r)^(n-k) r^k for 0 <= k <= n (0-based n), evaluated
// through log-gamma with the sign tracked separately.
double euler_coefficient(std::size_t n, std::size_t k, double r);

// Rows of the Euler matrix by the Pascal recurrence
// a_{n,k} = (1-r) a_{n-1,k} + r a_{n-1,k-1}.
class EulerRowGenerator {
 public:
  explicit EulerRowGenerator(double r, Execution exec = Execution::serial);

  std::size_t index() const { return n_; }
  // Entries a_{n,0..n}.
  std::span<const double> row() const { return {cur_.data(), n_ + 1}; }
  void advance();

 private:
  double r_;
  Execution exec_;
  std::size_t n_ = 0;
  std::vector<double> cur_, next_;
};

// Compensated (Neumaier) sum of a[i]*b[i], split into fixed chunks whose
// partial sums are combined in order, so the result does not depend on the
// thread count.
double compensated_dot(std::span<const double> a, std::span<const double> b, Execution exec);

// Throws OverflowError when sum_k |a_{n,k}| = (|1-r| + |r|)^n would exceed
// the double range for n < N, and ParameterError for |r| > kMaxEulerR.
void check_euler_range(double r, std::size_t n);

// y_n = sum_{k<=n} a_{n-1,k-1} x_k for the 1-based window indices n, k.
// Single windows of dimension 1 or 2 (a complex sequence as pairs).
SequenceWindow euler_transform(const SequenceWindow& x, double r,
                               Execution exec = Execution::parallel);

// core_by_support of the transformed window under Fin.
CoreReport euler_core(const SequenceWindow& x, double r, const CoreParams& params = {});

enum class DoubleMode { pringsheim, statistical, e };
std::string to_string(DoubleMode mode);
DoubleMode parse_double_mode(std::string_view text);
FiniteIdealModel ideal_for(DoubleMode mode);

struct DoubleConvergence {
  DoubleMode mode = DoubleMode::pringsheim;
  std::optional<Point> limit;
  CoreReport core;
};

DoubleConvergence double_convergence(const SequenceWindow& x, DoubleMode mode, double tol,
                                     const CoreParams& params = {});

}  // namespace icore

#endif  // ICORE_TRANSFORMS_HPP
