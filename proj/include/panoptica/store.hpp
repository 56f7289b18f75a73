#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "panoptica/error.hpp"
#include "panoptica/value.hpp"
#include "panoptica/vocabulary.hpp"

namespace panoptica {

using Values = std::map<std::string, Value, std::less<>>;

/// Partial update: a nullopt entry clears the attribute.
using Patch = std::map<std::string, std::optional<Value>, std::less<>>;

struct ObjectRecord {
  ObjectId id;
  std::string class_name;
  Values values;

  const Value* get(std::string_view attribute) const;
};

/// One end of a link as seen from its target.
struct LinkSource {
  ObjectId source;
  std::string attribute;

  friend auto operator<=>(const LinkSource&, const LinkSource&) = default;
};

struct IncomingGroup {
  std::string class_name;
  std::string attribute;
  std::vector<ObjectId> members;  // ordered by (label, id)
};

struct Violation {
  ErrorCode code;
  ObjectId object;
  std::string attribute;
  std::string message;
};

/// The known object space: records under controlled input plus a forward and
/// a backward link index that are kept exact mirrors of each other.
///
/// Every mutating member either succeeds completely or throws and leaves the
/// store untouched. Store is a regular value; copying it yields an
/// independent snapshot.
class Store {
 public:
  explicit Store(std::shared_ptr<const Vocabulary> vocab);
  explicit Store(Vocabulary vocab);

  const Vocabulary& vocabulary() const { return *vocab_; }
  const std::shared_ptr<const Vocabulary>& vocabulary_ptr() const { return vocab_; }

  ObjectId insert(std::string_view class_name, Values values);
  void update(ObjectId id, const Patch& patch);
  void remove(ObjectId id, bool detach);

  std::size_t authority(ObjectId id) const;
  std::vector<IncomingGroup> incoming(ObjectId id) const;
  std::vector<Violation> integrity_check() const;

  bool contains(ObjectId id) const { return objects_.count(id) != 0; }
  const ObjectRecord* find(ObjectId id) const;
  const ObjectRecord& get(ObjectId id) const;  // throws UnknownObject
  const ClassDef& class_of(ObjectId id) const;
  std::string label(ObjectId id) const;

  std::optional<ObjectId> link_target(ObjectId source, std::string_view attribute) const;
  const std::set<LinkSource>& backward(ObjectId target) const;

  /// Objects of a class ordered by (label, id).
  std::vector<ObjectId> objects_of(std::string_view class_name) const;
  std::size_t count_of(std::string_view class_name) const;
  std::vector<ObjectId> find_by_label(std::string_view class_name, std::string_view label) const;

  const std::map<ObjectId, ObjectRecord>& records() const { return objects_; }
  std::size_t size() const { return objects_.size(); }
  std::uint64_t next_id() const { return next_id_; }

  /// Rebuilds a store from raw records without running controlled input.
  /// Used by snapshot loading; callers decide whether to run integrity_check.
  static Store restore(std::shared_ptr<const Vocabulary> vocab, std::uint64_t next_id,
                       std::vector<ObjectRecord> records);

 private:
  using KeyTuple = std::vector<ObjectId>;
  using LabelSet = std::set<std::pair<std::string, ObjectId>>;

  void check_record(const ObjectRecord& record, const ClassDef& cls) const;
  std::optional<KeyTuple> key_of(const ObjectRecord& record, const ClassDef& cls) const;
  std::string label_of(const ObjectRecord& record) const;
  void index_record(const ObjectRecord& record);
  void unindex_record(const ObjectRecord& record);

  std::shared_ptr<const Vocabulary> vocab_;
  std::uint64_t next_id_ = 1;
  std::map<ObjectId, ObjectRecord> objects_;
  std::map<std::pair<ObjectId, std::string>, ObjectId, std::less<>> forward_;
  std::map<ObjectId, std::set<LinkSource>> backward_;
  std::map<std::string, LabelSet, std::less<>> by_class_;
  std::map<std::string, std::map<KeyTuple, ObjectId>, std::less<>> keys_;

  friend struct StoreTestAccess;
};

/// {id, class, values} with values in declaration order.
Json to_json(const ObjectRecord& record, const Vocabulary& vocab);

Json snapshot_to_json(const Store& store);

/// Loads a snapshot document. With `verify`, a store failing integrity_check
/// is refused with CorruptStore.
Store store_from_snapshot(std::shared_ptr<const Vocabulary> vocab, const Json& json,
                          bool verify = true);

void save_snapshot(const Store& store, const std::filesystem::path& path);
Store load_snapshot(std::shared_ptr<const Vocabulary> vocab, const std::filesystem::path& path);

}  // namespace panoptica
