#include "panoptica/store.hpp"

namespace panoptica {

Json to_json(const ObjectRecord& record, const Vocabulary& vocab) {
  Json values = Json::object();
  // Declaration order first, then anything the class does not declare.
  if (const ClassDef* cls = vocab.find(record.class_name)) {
    for (const auto& attr : cls->attributes) {
      if (const Value* v = record.get(attr.name)) values[attr.name] = to_json(*v);
    }
  }
  for (const auto& [name, value] : record.values) {
    if (!values.contains(name)) values[name] = to_json(value);
  }
  Json obj;
  obj["id"] = record.id.value;
  obj["class"] = record.class_name;
  obj["values"] = std::move(values);
  return obj;
}

Json snapshot_to_json(const Store& store) {
  Json objects = Json::array();
  for (const auto& [id, record] : store.records()) {
    objects.push_back(to_json(record, store.vocabulary()));
  }
  Json out;
  out["vocabulary_version"] = store.vocabulary().version;
  out["next_id"] = store.next_id();
  out["objects"] = std::move(objects);
  return out;
}

Store store_from_snapshot(std::shared_ptr<const Vocabulary> vocab, const Json& json,
                          bool verify) {
  std::vector<ObjectRecord> records;
  std::uint64_t next_id = 1;
  try {
    const auto version = json.at("vocabulary_version").get<std::int64_t>();
    if (version > vocab->version) {
      throw Error(ErrorCode::VocabularyMismatch,
                  "snapshot was written for vocabulary version " + std::to_string(version) +
                      ", loaded vocabulary is version " + std::to_string(vocab->version));
    }
    next_id = json.at("next_id").get<std::uint64_t>();
    for (const auto& obj : json.at("objects")) {
      ObjectRecord record;
      record.id = ObjectId{obj.at("id").get<std::uint64_t>()};
      record.class_name = obj.at("class").get<std::string>();
      const ClassDef* cls = vocab->find(record.class_name);
      for (const auto& [name, raw] : obj.at("values").items()) {
        const AttributeDef* attr = cls ? cls->find(name) : nullptr;
        if (!attr) {
          // Keep it as text so integrity_check can name the problem.
          record.values.emplace(name, raw.is_string() ? raw.get<std::string>() : raw.dump());
          continue;
        }
        auto value = value_from_json(attr->kind, raw);
        if (!value) {
          throw Error(ErrorCode::KindMismatch, "object #" + std::to_string(record.id.value) +
                                                   " attribute '" + name + "' is not a valid " +
                                                   std::string(to_string(attr->kind)));
        }
        record.values.emplace(name, std::move(*value));
      }
      records.push_back(std::move(record));
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed snapshot: ") + e.what());
  }

  Store store = Store::restore(std::move(vocab), next_id, std::move(records));
  if (verify) {
    const auto violations = store.integrity_check();
    if (!violations.empty()) {
      throw Error(ErrorCode::CorruptStore,
                  "snapshot fails integrity check (" + std::to_string(violations.size()) +
                      " violation(s)); first: " + std::string(to_string(violations.front().code)) +
                      ": " + violations.front().message);
    }
  }
  return store;
}

void save_snapshot(const Store& store, const std::filesystem::path& path) {
  write_file_atomic(path, snapshot_to_json(store).dump(2) + "\n");
}

Store load_snapshot(std::shared_ptr<const Vocabulary> vocab, const std::filesystem::path& path) {
  const std::string text = read_file(path);
  Json json = Json::parse(text, nullptr, false);
  if (json.is_discarded()) {
    throw Error(ErrorCode::ParseError, "'" + path.string() + "' is not valid JSON");
  }
  return store_from_snapshot(std::move(vocab), json);
}

}  // namespace panoptica
