#include "icore/corpus.hpp"

#include "icore/error.hpp"

namespace icore {

bool CorpusItem::is_double() const { return is_double_generator(parse_generator(sequence)); }

const std::vector<CorpusItem>& corpus() {
  static const std::vector<CorpusItem> items = {
      {"alt-fin", "alt", "fin", 10000},
      {"alt-decay-fin", "alt_decay", "fin", 10000},
      {"alt-noise-fin", "alt+noise(0.005,5)", "fin", 10000},
      {"spike-z", "sparse_spike(squares)", "Z", 10000},
      {"spike-fin", "sparse_spike(squares)", "fin", 10000},
      {"triangle-z", "cycle((0,0),(1,0),(0,1))", "Z", 10000},
      {"triangle-sparse-z", "cycle((0,0),(1,0),(0,1))+sparse_noise(0.5,7)", "Z", 10000},
      {"square-decay-fin", "cycle((0,0),(1,0),(1,1),(0,1))+decay_noise(0.5,3)", "fin", 10000},
      {"const2-z", "const(0.25,-0.5)", "Z", 10000},
      {"tetra-fin", "cycle((0,0,0),(1,0,0),(0,1,0),(0,0,1))", "fin", 10000},
      {"tetra-sparse-z", "cycle((0,0,0),(1,0,0),(0,1,0),(0,0,1))+sparse_noise(0.5,11)", "Z", 10000},
      {"dalt-ip", "dalt", "IP", 256},
      {"rowalt-ie", "row_alt", "Ie", 256},
      {"invsum-zp", "inv_sum", "ZP", 256},
      {"dcycle-ip", "dcycle((0,0),(1,0),(0,1))", "IP", 256},
  };
  return items;
}

const CorpusItem& corpus_item(std::string_view name) {
  std::string names;
  for (const auto& item : corpus()) {
    if (item.name == name) return item;
    names += (names.empty() ? "" : ", ") + item.name;
  }
  throw ParameterError("unknown corpus item '" + std::string(name) + "' (known: " + names + ")");
}

}  // namespace icore
