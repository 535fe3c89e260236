#ifndef ICORE_SEQUENCE_HPP
#define ICORE_SEQUENCE_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "icore/ideal.hpp"

namespace icore {

using Point = std::vector<double>;

// First N terms of a sequence in R^k, or the [1,M]^2 block of a double
// sequence, stored row-major (flat index i <-> (i/M + 1, i%M + 1)).
class SequenceWindow {
 public:
  SequenceWindow(std::size_t dim, WindowShape shape, std::vector<double> coords,
                 std::string source);

  std::size_t dim() const { return dim_; }
  std::size_t scale() const { return shape_.scale; }
  Arity arity() const { return shape_.arity; }
  const WindowShape& shape() const { return shape_; }
  std::size_t size() const { return shape_.size(); }
  const std::string& source() const { return source_; }

  std::span<const double> coords() const { return coords_; }
  std::span<const double> point(std::size_t flat) const {
    return {coords_.data() + flat * dim_, dim_};
  }
  // 1-based, single windows.
  std::span<const double> at(std::size_t n) const;
  // 1-based, double windows.
  std::span<const double> at(std::size_t n, std::size_t m) const;

  // <u, x_i> for every flat index.
  std::vector<double> projection(std::span<const double> u) const;
  std::vector<double> component(std::size_t axis) const;

  // Same shape, new coordinates (used for perturbations and transforms).
  SequenceWindow with_coords(std::vector<double> coords, std::string source) const;

 private:
  std::size_t dim_;
  WindowShape shape_;
  std::vector<double> coords_;
  std::string source_;
};

enum class NoiseKind { none, uniform, decay, sparse };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::none;
  double amplitude = 0.0;
  std::uint64_t seed = 0;
};

// name + numeric parameters. `points` carries cycle vertices, `index_family`
// the spike set of sparse_spike (squares, cubes, pow2).
struct GeneratorSpec {
  std::string name;
  std::vector<double> params;
  std::vector<Point> points;
  std::string index_family;
  NoiseSpec noise;
};

// Textual form: base[+noise(a,seed)|+decay_noise(a,seed)|+sparse_noise(a,seed)]
// Single-sequence bases:
//   alt, alt_decay, alt_linear, const(c1,..,ck), sparse_spike[(squares|cubes|pow2)],
//   cycle(p1,p2,...) with scalars or parenthesised tuples
// Double-sequence bases:
//   dalt, row_alt, col_alt, inv_sum, dconst(c1,..,ck), dcycle(p1,p2,...)
GeneratorSpec parse_generator(std::string_view text);
std::string to_string(const GeneratorSpec& spec);

bool is_double_generator(const GeneratorSpec& spec);

// Deterministic in (spec, scale). `scale` is N for single generators and M
// for double ones.
SequenceWindow generate(const GeneratorSpec& spec, std::size_t scale);
SequenceWindow generate(std::string_view spec, std::size_t scale);

bool is_perfect_square(std::size_t n);

// Rows are k comma-separated floats (single) or n,m,v1..vk (double). Blank
// lines and lines starting with '#' are skipped.
SequenceWindow ingest_csv(const std::filesystem::path& path, std::size_t dim,
                          Arity arity = Arity::single);
void export_csv(const SequenceWindow& window, const std::filesystem::path& path);

}  // namespace icore

#endif  // ICORE_SEQUENCE_HPP
