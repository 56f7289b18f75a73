#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "panoptica/error.hpp"
#include "panoptica/value.hpp"

namespace panoptica {

struct AttributeDef {
  std::string name;
  Kind kind = Kind::text;
  std::string target_class;  // link kind only
  bool required = false;

  bool is_link() const { return kind == Kind::link; }
};

struct ClassDef {
  std::string name;
  std::vector<AttributeDef> attributes;
  bool is_intermediate = false;
  std::string label_attribute;
  bool key_unique = false;

  const AttributeDef* find(std::string_view attribute) const;

  /// Link attributes in declaration order. For intermediate classes this is
  /// the concatenated key.
  std::vector<const AttributeDef*> links() const;
};

/// The data vocabulary: classes, their attributes and the link structure
/// between them. Treated as an immutable value; every mutating operation
/// below returns a new vocabulary with `version` incremented.
struct Vocabulary {
  std::string name;
  std::vector<ClassDef> classes;
  std::int64_t version = 0;

  const ClassDef* find(std::string_view class_name) const;
  const ClassDef& at(std::string_view class_name) const;  // throws UnknownClass
  std::optional<std::size_t> index_of(std::string_view class_name) const;
};

/// Name of the label attribute synthesized for relationship classes that
/// have no required text attribute of their own.
inline constexpr std::string_view kKeyLabel = "key_label";

Vocabulary create_class(const Vocabulary& vocab, std::string_view name,
                        bool is_intermediate);

/// Appends `def` to `class_name`. If the class has no label yet and `def` is
/// a required text attribute, it becomes the label.
Vocabulary add_attribute(const Vocabulary& vocab, std::string_view class_name,
                         AttributeDef def);

Vocabulary set_label(const Vocabulary& vocab, std::string_view class_name,
                     std::string_view attribute);

Vocabulary set_key_unique(const Vocabulary& vocab, std::string_view class_name,
                          bool key_unique);

/// Creates an intermediate class realizing an n-ary relationship: one
/// required link attribute per participant, in order, then `extra`.
Vocabulary create_relationship(const Vocabulary& vocab, std::string_view name,
                               std::span<const std::string> participants,
                               std::span<const AttributeDef> extra);

struct Diagnostic {
  ErrorCode code;
  std::string class_name;
  std::string attribute;
  std::string message;
};

/// Every well-formedness violation; empty iff the vocabulary is usable.
std::vector<Diagnostic> validate(const Vocabulary& vocab);

/// Throws InvalidVocabulary carrying the first diagnostic when invalid.
void require_valid(const Vocabulary& vocab);

/// ANSI-SQL DDL for the vocabulary. Pure function of its input.
std::string compile_ddl(const Vocabulary& vocab);

/// Identifier derived from a class name for generated link attributes:
/// lowercase, runs of non-alphanumerics collapsed to "_".
std::string attribute_slug(std::string_view class_name);

Json to_json(const Vocabulary& vocab);
Vocabulary vocabulary_from_json(const Json& json);

Vocabulary load_vocabulary(const std::filesystem::path& path);
void save_vocabulary(const Vocabulary& vocab, const std::filesystem::path& path);

/// Writes `content` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

}  // namespace panoptica
