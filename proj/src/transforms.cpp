#include "icore/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "icore/error.hpp"

namespace icore {

namespace {

constexpr std::size_t kChunk = 1024;

struct Neumaier {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace

double euler_coefficient(std::size_t n, std::size_t k, double r) {
  if (k > n) return 0.0;
  const double q = 1.0 - r;
  const std::size_t up = n - k;
  if ((r == 0.0 && k > 0) || (q == 0.0 && up > 0)) return 0.0;
  double log_mag = std::lgamma(static_cast<double>(n) + 1.0) -
                   std::lgamma(static_cast<double>(k) + 1.0) -
                   std::lgamma(static_cast<double>(up) + 1.0);
  if (up > 0) log_mag += static_cast<double>(up) * std::log(std::abs(q));
  if (k > 0) log_mag += static_cast<double>(k) * std::log(std::abs(r));
  const bool negative = ((q < 0.0) && (up % 2 == 1)) != ((r < 0.0) && (k % 2 == 1));
  const double mag = std::exp(log_mag);
  return negative ? -mag : mag;
}

EulerRowGenerator::EulerRowGenerator(double r, Execution exec)
    : r_(r), exec_(exec), cur_{1.0}, next_{} {}

void EulerRowGenerator::advance() {
  const std::size_t n = n_ + 1;
  cur_.resize(n + 1, 0.0);
  next_.resize(n + 1);
  const double q = 1.0 - r_;
  const std::size_t chunks = (n + 1 + kChunk - 1) / kChunk;
  for_each_index(chunks, n < 4 * kChunk ? Execution::serial : exec_, [&](std::size_t c) {
    const std::size_t lo = c * kChunk, hi = std::min(n + 1, lo + kChunk);
    for (std::size_t j = lo; j < hi; ++j)
      next_[j] = (j < n ? q * cur_[j] : 0.0) + (j > 0 ? r_ * cur_[j - 1] : 0.0);
  });
  std::swap(cur_, next_);
  n_ = n;
}

double compensated_dot(std::span<const double> a, std::span<const double> b, Execution exec) {
  const std::size_t n = std::min(a.size(), b.size());
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<Neumaier> partial(chunks);
  for_each_index(chunks, n < 4 * kChunk ? Execution::serial : exec, [&](std::size_t c) {
    const std::size_t lo = c * kChunk, hi = std::min(n, lo + kChunk);
    for (std::size_t i = lo; i < hi; ++i) partial[c].add(a[i] * b[i]);
  });
  Neumaier total;
  for (const auto& p : partial) {
    total.add(p.sum);
    total.add(p.comp);
  }
  return total.value();
}

void check_euler_range(double r, std::size_t n) {
  if (!std::isfinite(r) || std::abs(r) > kMaxEulerR)
    throw ParameterError("Euler parameter r must satisfy |r| <= 4");
  const double growth = std::abs(1.0 - r) + std::abs(r);
  if (n > 0 && static_cast<double>(n - 1) * std::log(growth) > 700.0)
    throw OverflowError("Euler matrix entries overflow double range at this size");
}

SequenceWindow euler_transform(const SequenceWindow& x, double r, Execution exec) {
  if (x.arity() != Arity::single) throw ParameterError("Euler transform needs a single sequence");
  if (x.dim() > 2) throw ParameterError("Euler transform supports dimension 1 or 2");
  const std::size_t n = x.size(), k = x.dim();
  check_euler_range(r, n);
  std::vector<std::vector<double>> comp(k);
  for (std::size_t a = 0; a < k; ++a) comp[a] = x.component(a);
  std::vector<double> out(n * k);
  EulerRowGenerator gen(r, exec);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) gen.advance();
    const auto row = gen.row();
    for (std::size_t a = 0; a < k; ++a)
      out[i * k + a] = compensated_dot(row, std::span<const double>(comp[a].data(), i + 1), exec);
  }
  std::ostringstream src;
  src << "euler(" << r << "," << x.source() << ")";
  return x.with_coords(std::move(out), src.str());
}

CoreReport euler_core(const SequenceWindow& x, double r, const CoreParams& params) {
  return core_by_support(euler_transform(x, r, params.exec), make_fin(), params);
}

std::string to_string(DoubleMode mode) {
  switch (mode) {
    case DoubleMode::pringsheim: return "pringsheim";
    case DoubleMode::statistical: return "statistical";
    case DoubleMode::e: return "e";
  }
  return "?";
}

DoubleMode parse_double_mode(std::string_view text) {
  if (text == "pringsheim") return DoubleMode::pringsheim;
  if (text == "statistical") return DoubleMode::statistical;
  if (text == "e") return DoubleMode::e;
  throw ParameterError("unknown double mode '" + std::string(text) +
                       "' (expected pringsheim, statistical or e)");
}

FiniteIdealModel ideal_for(DoubleMode mode) {
  switch (mode) {
    case DoubleMode::pringsheim: return make_pringsheim();
    case DoubleMode::statistical: return make_double_density();
    case DoubleMode::e: return make_e_ideal();
  }
  throw ParameterError("unknown double mode");
}

DoubleConvergence double_convergence(const SequenceWindow& x, DoubleMode mode, double tol,
                                     const CoreParams& params) {
  if (x.arity() != Arity::dual) throw ParameterError("double_convergence needs a double window");
  if (!(tol >= 0.0)) throw ParameterError("tolerance must be >= 0");
  DoubleConvergence out;
  out.mode = mode;
  out.core = core_by_support(x, ideal_for(mode), params);
  const auto& poly = out.core.result;
  if (!poly.is_empty() && poly.diameter() <= tol) {
    const auto [lo, hi] = poly.bounding_box();
    Point mid(lo.size());
    for (std::size_t a = 0; a < lo.size(); ++a) mid[a] = 0.5 * (lo[a] + hi[a]);
    out.limit = std::move(mid);
  }
  return out;
}

}  // namespace icore
