#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "panoptica/store.hpp"

namespace panoptica {

namespace predicate {
struct Equals {
  Value value;
};
/// Case-insensitive substring match on text attributes.
struct Contains {
  std::string text;
};
/// Inclusive range on integer, decimal or date attributes.
struct Range {
  Value lo;
  Value hi;
};
/// Link attribute points at one of `ids`.
struct InSet {
  std::set<ObjectId> ids;
};
}  // namespace predicate

using Predicate =
    std::variant<predicate::Equals, predicate::Contains, predicate::Range, predicate::InSet>;

struct Clause {
  std::string attribute;
  Predicate predicate;
};

/// Conjunction of clauses over one class.
struct Filter {
  std::string class_name;
  std::vector<Clause> clauses;
};

/// Throws UnknownClass, UnknownAttribute or PredicateKindMismatch.
void check_filter(const Vocabulary& vocab, const Filter& filter);
bool matches(const Filter& filter, const ObjectRecord& record);

struct Session {
  std::optional<std::string> selected_class;
  std::optional<ObjectId> focus;
  std::map<std::string, Filter, std::less<>> filters;
  std::map<std::string, ObjectId, std::less<>> anchors;
  std::vector<ObjectId> history;
};

struct ClassCount {
  std::string class_name;
  std::size_t count = 0;
};

struct ObjectEntry {
  ObjectId id;
  std::string label;
};

struct LinkTarget {
  ObjectId id;
  std::string class_name;
  std::string label;
};

struct AttributeEntry {
  std::string attribute;
  Kind kind = Kind::text;
  std::string rendered;  // empty when unset; target label for links
  bool is_link = false;
  std::optional<LinkTarget> target;
};

struct ContextGroup {
  std::string class_name;
  std::string attribute;  // the member's link attribute pointing at the focus
  std::vector<ObjectEntry> members;
};

struct GroupRow {
  ObjectId id;
  std::vector<std::string> values;
};

/// Scalar attribute values of one d4 group, parallel to its members.
struct GroupAttributes {
  std::string class_name;
  std::string attribute;
  std::vector<std::string> columns;
  std::vector<GroupRow> rows;
};

/// One rendering of the five-dimensional information space.
struct ViewModel {
  std::vector<ClassCount> d1_classes;
  std::optional<std::string> selected_class;
  std::vector<ObjectEntry> d2_objects;
  std::optional<LinkTarget> focus;
  std::vector<AttributeEntry> d3_attributes;
  std::vector<ContextGroup> d4_context;
  std::vector<GroupAttributes> d5_group_attributes;
};

/// True when `record` would be displayed in a collection of its class under
/// the session's filter and anchor for that class.
bool visible(const Store& store, const Session& session, const ObjectRecord& record);

std::vector<ClassCount> list_classes(const Store& store, const Session& session);
std::vector<ObjectEntry> select_class(const Store& store, Session& session,
                                      std::string_view class_name);
ViewModel focus(const Store& store, Session& session, ObjectId id);

/// Follows an outgoing link attribute of the current focus.
ViewModel follow(const Store& store, Session& session, ObjectId from,
                 std::string_view attribute);
/// Follows a dependent object displayed in the current focus's context.
ViewModel follow(const Store& store, Session& session, ObjectId from, ObjectId member);

void set_filter(const Store& store, Session& session, Filter filter);
void clear_filter(Session& session, std::string_view class_name);
void set_anchor(const Store& store, Session& session, std::string_view class_name, ObjectId id);
void clear_anchor(Session& session, std::string_view class_name);

/// Current view for the session without changing it.
ViewModel build_view(const Store& store, const Session& session);

/// Drops references to objects or classes that no longer exist.
void prune(const Store& store, Session& session);

Json to_json(const ObjectEntry& entry);
Json to_json(const ViewModel& view);
Json to_json(const Session& session);
Json to_json(const Filter& filter);
Filter filter_from_json(const Vocabulary& vocab, const Json& json);

}  // namespace panoptica
