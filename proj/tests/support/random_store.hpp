#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "panoptica/store.hpp"

namespace panoptica::testing {

using Rng = std::mt19937_64;

/// Up to `max_classes` classes labelled by a required "name", with random
/// scalar attributes and random (possibly self-referential, possibly
/// required) link attributes; sometimes one intermediate class.
Vocabulary random_vocabulary(Rng& rng, int max_classes = 5);

struct OpStats {
  std::size_t attempted = 0;
  std::size_t succeeded = 0;
};

/// Applies `steps` random insert/update/relink/delete operations through the
/// public API, swallowing domain errors. Keeps at most `max_objects` live.
OpStats random_operations(Store& store, Rng& rng, int steps, std::size_t max_objects = 200);

/// A random vocabulary populated by random operations.
Store random_store(Rng& rng, int steps = 150);

/// Number of link values over all records equal to `target`.
std::size_t brute_force_authority(const Store& store, ObjectId target);

/// Empty string when forward/backward exactly mirror the record contents;
/// otherwise a description of the first mismatch.
std::string brute_force_mirror_check(const Store& store);

}  // namespace panoptica::testing
