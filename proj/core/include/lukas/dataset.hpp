#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lukas/finite_view.hpp"
#include "lukas/truth_value.hpp"

namespace lukas {

struct io_error : error {
  using error::error;
};

/// A keyed table of truth values: one key column plus one value column
/// per attribute. This is the exchange format between automaton runs
/// and the trainer.
struct Dataset {
  std::vector<std::string> attributes;
  std::vector<std::string> keys;
  std::vector<std::vector<TruthValue>> rows;
  long n = 1;

  size_t column(const std::string& attribute) const;

  /// CSV with a `key,attr1,...` header; `#` lines are comments.
  static Dataset load_csv(const std::string& path, long n);
  void save_csv(const std::string& path) const;
  void write_csv(std::ostream& out) const;
};

/// Mean-absolute-difference similarity between two columns, averaged
/// over rows (the keyed-table analogue of the table similarities).
double column_similarity(const std::vector<TruthValue>& a,
                         const std::vector<TruthValue>& b,
                         SimilarityMode mode);

/// Reads a view from CSV (tuple columns plus a final `value` column)
/// with a `.meta` sidecar declaring which attributes are inputs and
/// outputs and their domains.
FiniteView load_view(const std::string& csv_path, long n);
void save_view(const FiniteView& view, const std::string& csv_path);

}  // namespace lukas
