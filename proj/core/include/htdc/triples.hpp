#pragma once

#include "htdc/dataset.hpp"
#include "htdc/matrix.hpp"

namespace htdc {

/// Row k holds frame rows (k, k+1, k+2): the neighbours of interior timestep k+1.
struct TripleBatch {
  Matrix prev;
  Matrix current;
  Matrix next;
  double delta_t = 1.0;

  std::size_t size() const noexcept { return current.rows(); }
};

/// T-2 triples; ConfigError for fewer than 3 rows or delta_t <= 0.
TripleBatch make_triples(const DatasetFrame& frame, double delta_t = 1.0);

}  // namespace htdc
