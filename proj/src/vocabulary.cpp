#include "panoptica/vocabulary.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace panoptica {

namespace {

ClassDef& mutable_class(Vocabulary& vocab, std::string_view class_name) {
  for (auto& c : vocab.classes) {
    if (c.name == class_name) return c;
  }
  throw Error(ErrorCode::UnknownClass, "unknown class '" + std::string(class_name) + "'");
}

bool is_label_candidate(const AttributeDef& def) {
  return def.kind == Kind::text && def.required;
}

void check_attribute_shape(const AttributeDef& def) {
  if (def.name.empty()) throw Error(ErrorCode::EmptyName, "attribute name is empty");
  if (def.is_link() && def.target_class.empty()) {
    throw Error(ErrorCode::InvalidAttribute,
                "link attribute '" + def.name + "' has no target class");
  }
  if (!def.is_link() && !def.target_class.empty()) {
    throw Error(ErrorCode::InvalidAttribute,
                "attribute '" + def.name + "' is not a link but names a target class");
  }
}

}  // namespace

const AttributeDef* ClassDef::find(std::string_view attribute) const {
  for (const auto& a : attributes) {
    if (a.name == attribute) return &a;
  }
  return nullptr;
}

std::vector<const AttributeDef*> ClassDef::links() const {
  std::vector<const AttributeDef*> out;
  for (const auto& a : attributes) {
    if (a.is_link()) out.push_back(&a);
  }
  return out;
}

const ClassDef* Vocabulary::find(std::string_view class_name) const {
  for (const auto& c : classes) {
    if (c.name == class_name) return &c;
  }
  return nullptr;
}

const ClassDef& Vocabulary::at(std::string_view class_name) const {
  if (const ClassDef* c = find(class_name)) return *c;
  throw Error(ErrorCode::UnknownClass, "unknown class '" + std::string(class_name) + "'");
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view class_name) const {
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i].name == class_name) return i;
  }
  return std::nullopt;
}

Vocabulary create_class(const Vocabulary& vocab, std::string_view name,
                        bool is_intermediate) {
  if (name.empty()) throw Error(ErrorCode::EmptyName, "class name is empty");
  if (vocab.find(name)) {
    throw Error(ErrorCode::DuplicateClass, "class '" + std::string(name) + "' already exists");
  }
  Vocabulary out = vocab;
  ClassDef def;
  def.name = std::string(name);
  def.is_intermediate = is_intermediate;
  def.key_unique = is_intermediate;
  out.classes.push_back(std::move(def));
  ++out.version;
  return out;
}

Vocabulary add_attribute(const Vocabulary& vocab, std::string_view class_name,
                         AttributeDef def) {
  Vocabulary out = vocab;
  ClassDef& cls = mutable_class(out, class_name);
  check_attribute_shape(def);
  if (cls.find(def.name)) {
    throw Error(ErrorCode::DuplicateAttribute, "attribute '" + def.name +
                                                   "' already exists in '" + cls.name + "'");
  }
  if (def.is_link() && !out.find(def.target_class)) {
    throw Error(ErrorCode::UnknownTargetClass,
                "link '" + def.name + "' targets unknown class '" + def.target_class + "'");
  }
  if (cls.label_attribute.empty() && is_label_candidate(def)) cls.label_attribute = def.name;
  cls.attributes.push_back(std::move(def));
  ++out.version;
  return out;
}

Vocabulary set_label(const Vocabulary& vocab, std::string_view class_name,
                     std::string_view attribute) {
  Vocabulary out = vocab;
  ClassDef& cls = mutable_class(out, class_name);
  const AttributeDef* def = cls.find(attribute);
  if (!def) {
    throw Error(ErrorCode::UnknownAttribute, "class '" + cls.name + "' has no attribute '" +
                                                 std::string(attribute) + "'");
  }
  if (!is_label_candidate(*def)) {
    throw Error(ErrorCode::InvalidLabel,
                "label '" + def->name + "' must be a required text attribute");
  }
  cls.label_attribute = std::string(attribute);
  ++out.version;
  return out;
}

Vocabulary set_key_unique(const Vocabulary& vocab, std::string_view class_name,
                          bool key_unique) {
  Vocabulary out = vocab;
  ClassDef& cls = mutable_class(out, class_name);
  if (!cls.is_intermediate) {
    throw Error(ErrorCode::InvalidAttribute,
                "key_unique applies to intermediate classes only ('" + cls.name + "')");
  }
  cls.key_unique = key_unique;
  ++out.version;
  return out;
}

std::string attribute_slug(std::string_view class_name) {
  std::string out;
  bool pending_sep = false;
  for (char c : class_name) {
    const bool alnum = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                       (c >= '0' && c <= '9') || static_cast<unsigned char>(c) >= 0x80;
    if (!alnum) {
      pending_sep = !out.empty();
      continue;
    }
    if (pending_sep) out.push_back('_');
    pending_sep = false;
    out.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c);
  }
  return out.empty() ? std::string("link") : out;
}

Vocabulary create_relationship(const Vocabulary& vocab, std::string_view name,
                               std::span<const std::string> participants,
                               std::span<const AttributeDef> extra) {
  if (name.empty()) throw Error(ErrorCode::EmptyName, "relationship name is empty");
  if (vocab.find(name)) {
    throw Error(ErrorCode::DuplicateClass, "class '" + std::string(name) + "' already exists");
  }
  if (participants.size() < 2) {
    throw Error(ErrorCode::ArityTooSmall, "relationship '" + std::string(name) +
                                              "' needs at least 2 participants");
  }
  ClassDef cls;
  cls.name = std::string(name);
  cls.is_intermediate = true;
  cls.key_unique = true;

  for (const auto& participant : participants) {
    if (!vocab.find(participant)) {
      throw Error(ErrorCode::UnknownClass, "unknown participant class '" + participant + "'");
    }
    const std::string base = attribute_slug(participant);
    std::string attr = base;
    for (int n = 2; cls.find(attr); ++n) attr = base + "_" + std::to_string(n);
    cls.attributes.push_back(AttributeDef{attr, Kind::link, participant, true});
  }
  for (const auto& def : extra) {
    check_attribute_shape(def);
    if (def.is_link()) {
      throw Error(ErrorCode::InvalidAttribute,
                  "extra relationship attribute '" + def.name + "' must be scalar");
    }
    if (cls.find(def.name)) {
      throw Error(ErrorCode::DuplicateAttribute, "attribute '" + def.name +
                                                     "' already exists in '" + cls.name + "'");
    }
    cls.attributes.push_back(def);
    if (cls.label_attribute.empty() && is_label_candidate(def)) cls.label_attribute = def.name;
  }
  if (cls.label_attribute.empty()) {
    if (cls.find(kKeyLabel)) {
      throw Error(ErrorCode::InvalidLabel, "attribute 'key_label' exists but is not a required text");
    }
    cls.attributes.push_back(AttributeDef{std::string(kKeyLabel), Kind::text, {}, true});
    cls.label_attribute = std::string(kKeyLabel);
  }

  Vocabulary out = vocab;
  out.classes.push_back(std::move(cls));
  ++out.version;
  return out;
}

std::vector<Diagnostic> validate(const Vocabulary& vocab) {
  std::vector<Diagnostic> out;
  std::set<std::string> seen_classes;
  for (const auto& cls : vocab.classes) {
    if (cls.name.empty()) {
      out.push_back({ErrorCode::EmptyName, cls.name, {}, "class with empty name"});
    } else if (!seen_classes.insert(cls.name).second) {
      out.push_back({ErrorCode::DuplicateClass, cls.name, {}, "duplicate class '" + cls.name + "'"});
    }

    std::set<std::string> seen_attrs;
    std::size_t link_count = 0;
    for (const auto& attr : cls.attributes) {
      if (attr.name.empty()) {
        out.push_back({ErrorCode::EmptyName, cls.name, attr.name, "attribute with empty name"});
      } else if (!seen_attrs.insert(attr.name).second) {
        out.push_back({ErrorCode::DuplicateAttribute, cls.name, attr.name,
                       "duplicate attribute '" + attr.name + "' in '" + cls.name + "'"});
      }
      if (attr.is_link()) {
        ++link_count;
        if (attr.target_class.empty() || !vocab.find(attr.target_class)) {
          out.push_back({ErrorCode::UnknownTargetClass, cls.name, attr.name,
                         "link '" + cls.name + "." + attr.name + "' targets unknown class '" +
                             attr.target_class + "'"});
        }
      } else if (!attr.target_class.empty()) {
        out.push_back({ErrorCode::InvalidAttribute, cls.name, attr.name,
                       "non-link attribute '" + cls.name + "." + attr.name +
                           "' names a target class"});
      }
    }

    if (cls.is_intermediate && link_count < 2) {
      out.push_back({ErrorCode::ArityTooSmall, cls.name, {},
                     "intermediate class '" + cls.name + "' has " + std::to_string(link_count) +
                         " link attribute(s); at least 2 required"});
    }

    const AttributeDef* label = cls.find(cls.label_attribute);
    if (cls.label_attribute.empty() || !label) {
      out.push_back({ErrorCode::InvalidLabel, cls.name, cls.label_attribute,
                     "class '" + cls.name + "' has no label attribute"});
    } else if (!is_label_candidate(*label)) {
      out.push_back({ErrorCode::InvalidLabel, cls.name, cls.label_attribute,
                     "label '" + cls.name + "." + label->name +
                         "' must be a required text attribute"});
    }
  }
  return out;
}

void require_valid(const Vocabulary& vocab) {
  const auto diagnostics = validate(vocab);
  if (!diagnostics.empty()) {
    throw Error(ErrorCode::InvalidVocabulary,
                std::string(to_string(diagnostics.front().code)) + ": " +
                    diagnostics.front().message);
  }
}

Json to_json(const Vocabulary& vocab) {
  Json classes = Json::array();
  for (const auto& cls : vocab.classes) {
    Json attrs = Json::array();
    for (const auto& a : cls.attributes) {
      Json j;
      j["name"] = a.name;
      j["kind"] = std::string(to_string(a.kind));
      if (a.is_link()) j["target_class"] = a.target_class;
      j["required"] = a.required;
      attrs.push_back(std::move(j));
    }
    Json c;
    c["name"] = cls.name;
    c["is_intermediate"] = cls.is_intermediate;
    c["label_attribute"] = cls.label_attribute;
    c["key_unique"] = cls.key_unique;
    c["attributes"] = std::move(attrs);
    classes.push_back(std::move(c));
  }
  Json out;
  out["name"] = vocab.name;
  out["version"] = vocab.version;
  out["classes"] = std::move(classes);
  return out;
}

Vocabulary vocabulary_from_json(const Json& json) {
  try {
    Vocabulary vocab;
    vocab.name = json.at("name").get<std::string>();
    vocab.version = json.at("version").get<std::int64_t>();
    for (const auto& c : json.at("classes")) {
      ClassDef cls;
      cls.name = c.at("name").get<std::string>();
      cls.is_intermediate = c.value("is_intermediate", false);
      cls.label_attribute = c.value("label_attribute", std::string());
      cls.key_unique = c.value("key_unique", cls.is_intermediate);
      for (const auto& a : c.at("attributes")) {
        AttributeDef def;
        def.name = a.at("name").get<std::string>();
        const std::string kind = a.at("kind").get<std::string>();
        auto k = kind_from_string(kind);
        if (!k) throw Error(ErrorCode::ParseError, "unknown attribute kind '" + kind + "'");
        def.kind = *k;
        def.target_class = a.value("target_class", std::string());
        def.required = a.value("required", false);
        cls.attributes.push_back(std::move(def));
      }
      vocab.classes.push_back(std::move(cls));
    }
    return vocab;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed vocabulary document: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot rename onto '" + path.string() + "': " + ec.message());
}

Vocabulary load_vocabulary(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  Json json = Json::parse(text, nullptr, false);
  if (json.is_discarded()) {
    throw Error(ErrorCode::ParseError, "'" + path.string() + "' is not valid JSON");
  }
  return vocabulary_from_json(json);
}

void save_vocabulary(const Vocabulary& vocab, const std::filesystem::path& path) {
  write_file_atomic(path, to_json(vocab).dump(2) + "\n");
}

}  // namespace panoptica
