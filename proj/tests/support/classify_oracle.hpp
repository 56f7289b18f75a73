#pragma once

#include <string>
#include <vector>

#include "panoptica/recognition.hpp"
#include "support/random_store.hpp"

namespace panoptica::testing {

struct ClassifyCase {
  Vocabulary vocab;
  Perception perception;
};

/// Up to 6 classes over a small shared pool of attribute names, and a
/// perception of up to 8 names (with case and spacing noise) and samples.
ClassifyCase random_classify_case(Rng& rng);

/// Recomputes the ranking from scratch with set algebra and exact
/// cross-multiplied comparisons. Returns class names in ranked order.
std::vector<std::string> oracle_ranking(const Vocabulary& vocab, const Perception& perception);

}  // namespace panoptica::testing
