#ifndef ICORE_CORPUS_HPP
#define ICORE_CORPUS_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "icore/ideal.hpp"
#include "icore/sequence.hpp"

namespace icore {

// A named (sequence, ideal, scale) triple with known behavior.
struct CorpusItem {
  std::string name;
  std::string sequence;
  std::string ideal;
  std::size_t scale = 0;

  SequenceWindow window() const { return generate(sequence, scale); }
  FiniteIdealModel model() const { return parse_ideal(ideal); }
  bool is_double() const;
};

const std::vector<CorpusItem>& corpus();
// Throws ParameterError listing the valid names.
const CorpusItem& corpus_item(std::string_view name);

}  // namespace icore

#endif  // ICORE_CORPUS_HPP
