#pragma once

#include <string>
#include <vector>

#include "panoptica/store.hpp"
#include "panoptica/vocabulary.hpp"

namespace panoptica::testing {

/// Opera Works and its dependant classes, each dependant pointing back at
/// its opera through a required "opera" link.
Vocabulary opera_vocabulary();

struct OperaData {
  Store store;
  ObjectId don_giovanni, fidelio, figaro, butterfly;
  ObjectId cio_cio_san, pinkerton, bonze, mother, dolore, female_choir;
};

/// Four operas; Madame Butterfly with a full cast, the others with a few
/// dependants of their own.
OperaData opera_data();

/// Composition --author--> Author.
Vocabulary composition_vocabulary();

}  // namespace panoptica::testing
