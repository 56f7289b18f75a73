#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "panoptica/delimited.hpp"
#include "panoptica/recognition.hpp"
#include "panoptica/store.hpp"

namespace panoptica {

enum class LinkResolution { by_label, by_id };
enum class UnresolvedPolicy { reject_row, create_stub };

struct ImportMapping {
  std::string class_name;
  std::map<std::string, std::string> column_map;  // source column -> attribute
  std::map<std::string, LinkResolution> link_resolution;  // per link attribute
  UnresolvedPolicy unresolved_policy = UnresolvedPolicy::reject_row;
};

struct Inspection {
  Row headers;
  char delimiter = ',';
  std::vector<ClassMatch> ranking;
  ImportMapping proposed;
};

struct RowError {
  std::size_t row = 0;  // 1-based data row
  ErrorCode code;
  std::string message;
};

struct ImportReport {
  std::size_t inserted = 0;
  std::vector<RowError> rejected;
  std::size_t stubs_created = 0;
};

/// Label lookup over the known objects of `store`.
LabelLookup label_lookup(const Store& store);

/// Recognizes the structure of a delimited source against the vocabulary and
/// proposes a mapping onto the best class. `store`, when given, lets link
/// samples match existing labels.
Inspection inspect(const Vocabulary& vocab, std::string_view source,
                   const Store* store = nullptr);

/// Throws InvalidMapping unless the mapping is usable with these headers.
void check_mapping(const Vocabulary& vocab, const ImportMapping& mapping, const Row& headers);

/// Inserts one object per data row under controlled input. A rejected row
/// leaves no trace in the store.
ImportReport import_delimited(Store& store, const ImportMapping& mapping,
                              std::string_view source);

Json to_json(const ImportMapping& mapping);
ImportMapping mapping_from_json(const Json& json);
Json to_json(const ImportReport& report);
Json to_json(const Inspection& inspection);

}  // namespace panoptica
