#include "htdc/triples.hpp"

#include "htdc/errors.hpp"

namespace htdc {

TripleBatch make_triples(const DatasetFrame& frame, double delta_t) {
  if (frame.rows() < 3) {
    throw ConfigError("make_triples: need at least 3 rows, got " + std::to_string(frame.rows()));
  }
  if (!(delta_t > 0.0)) throw ConfigError("make_triples: delta_t must be > 0");
  const std::size_t n = frame.rows() - 2;
  return TripleBatch{frame.values.row_slice(0, n), frame.values.row_slice(1, n),
                     frame.values.row_slice(2, n), delta_t};
}

}  // namespace htdc
