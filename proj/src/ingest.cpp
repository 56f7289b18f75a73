#include "panoptica/ingest.hpp"

#include <algorithm>
#include <set>

namespace panoptica {

namespace {

Error invalid_mapping(const std::string& message) {
  return Error(ErrorCode::InvalidMapping, message);
}

bool auto_filled(const ClassDef& cls, const AttributeDef& attr) {
  return cls.is_intermediate && attr.name == kKeyLabel && cls.label_attribute == kKeyLabel;
}

std::string_view to_string(LinkResolution r) {
  return r == LinkResolution::by_id ? "by_id" : "by_label";
}

std::string_view to_string(UnresolvedPolicy p) {
  return p == UnresolvedPolicy::create_stub ? "create_stub" : "reject_row";
}

}  // namespace

LabelLookup label_lookup(const Store& store) {
  return [&store](std::string_view class_name, std::string_view label) {
    return !store.find_by_label(class_name, label).empty();
  };
}

Inspection inspect(const Vocabulary& vocab, std::string_view source, const Store* store) {
  Table table = read_delimited(source);

  Perception perception;
  for (std::size_t c = 0; c < table.headers.size(); ++c) {
    const std::string& header = table.headers[c];
    if (header.empty()) continue;
    perception.attribute_names.push_back(header);
    std::vector<std::string> samples;
    for (const auto& row : table.rows) {
      if (c < row.size()) {
        std::string cell = trim(row[c]);
        if (!cell.empty()) samples.push_back(std::move(cell));
      }
    }
    if (!samples.empty()) perception.samples[header] = std::move(samples);
  }

  Inspection out;
  out.delimiter = table.delimiter;
  out.ranking = classify(vocab, perception, store ? label_lookup(*store) : LabelLookup{});
  out.headers = table.headers;
  if (out.ranking.empty()) {
    throw Error(ErrorCode::NoCandidateClass, "no class shares an attribute with the headers");
  }

  const ClassDef& cls = vocab.at(out.ranking.front().class_name);
  out.proposed.class_name = cls.name;
  std::set<std::string> taken;
  for (const auto& header : table.headers) {
    const std::string norm = normalize_name(header);
    if (norm.empty()) continue;
    for (const auto& attr : cls.attributes) {
      if (normalize_name(attr.name) != norm || taken.count(attr.name)) continue;
      out.proposed.column_map[header] = attr.name;
      taken.insert(attr.name);
      if (attr.is_link()) {
        auto it = perception.samples.find(header);
        bool ids = it != perception.samples.end();
        if (ids) {
          for (const auto& s : it->second) {
            const bool is_label = store && !store->find_by_label(attr.target_class, s).empty();
            if (!parse_value(Kind::link, s) || is_label) ids = false;
          }
        }
        out.proposed.link_resolution[attr.name] =
            ids ? LinkResolution::by_id : LinkResolution::by_label;
      }
      break;
    }
  }
  return out;
}

void check_mapping(const Vocabulary& vocab, const ImportMapping& mapping, const Row& headers) {
  const ClassDef* cls = vocab.find(mapping.class_name);
  if (!cls) throw invalid_mapping("unknown class '" + mapping.class_name + "'");

  std::set<std::string> attrs;
  for (const auto& [column, attribute] : mapping.column_map) {
    if (std::find(headers.begin(), headers.end(), column) == headers.end()) {
      throw invalid_mapping("source has no column '" + column + "'");
    }
    if (!cls->find(attribute)) {
      throw invalid_mapping("class '" + cls->name + "' has no attribute '" + attribute + "'");
    }
    if (!attrs.insert(attribute).second) {
      throw invalid_mapping("attribute '" + attribute + "' is mapped twice");
    }
  }
  for (const auto& attr : cls->attributes) {
    if (attr.required && !attrs.count(attr.name) && !auto_filled(*cls, attr)) {
      throw invalid_mapping("required attribute '" + attr.name + "' is not mapped");
    }
  }
  for (const auto& [attribute, resolution] : mapping.link_resolution) {
    const AttributeDef* attr = cls->find(attribute);
    if (!attr || !attr->is_link()) {
      throw invalid_mapping("link resolution given for non-link '" + attribute + "'");
    }
  }
}

ImportReport import_delimited(Store& store, const ImportMapping& mapping,
                              std::string_view source) {
  const Table table = read_delimited(source);
  const Vocabulary& vocab = store.vocabulary();
  check_mapping(vocab, mapping, table.headers);
  const ClassDef& cls = vocab.at(mapping.class_name);

  struct Column {
    std::size_t index;
    const AttributeDef* attr;
    LinkResolution resolution;
  };
  std::vector<Column> columns;
  for (const auto& [column, attribute] : mapping.column_map) {
    const auto index = static_cast<std::size_t>(
        std::find(table.headers.begin(), table.headers.end(), column) - table.headers.begin());
    const AttributeDef* attr = cls.find(attribute);
    auto res = mapping.link_resolution.find(attribute);
    columns.push_back({index, attr,
                       res == mapping.link_resolution.end() ? LinkResolution::by_label
                                                            : res->second});
  }

  ImportReport report;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const Row& row = table.rows[r];
    const std::size_t row_number = r + 1;
    auto reject = [&](ErrorCode code, std::string message) {
      report.rejected.push_back({row_number, code, std::move(message)});
    };
    if (row.size() != table.headers.size()) {
      reject(ErrorCode::ParseError, "row has " + std::to_string(row.size()) + " fields, header has " +
                                        std::to_string(table.headers.size()));
      continue;
    }

    Values values;
    std::vector<std::pair<std::string, const AttributeDef*>> stubs;  // label, link attribute
    bool failed = false;
    for (const auto& col : columns) {
      const std::string cell = trim(row[col.index]);
      if (cell.empty()) continue;
      const AttributeDef& attr = *col.attr;
      if (!attr.is_link()) {
        auto value = parse_value(attr.kind, cell);
        if (!value) {
          reject(ErrorCode::KindMismatch, "'" + cell + "' is not a valid " +
                                              std::string(to_string(attr.kind)) + " for '" +
                                              attr.name + "'");
          failed = true;
          break;
        }
        values.emplace(attr.name, std::move(*value));
        continue;
      }

      if (col.resolution == LinkResolution::by_id) {
        auto id = parse_value(Kind::link, cell);
        const ObjectRecord* target = id ? store.find(std::get<ObjectId>(*id)) : nullptr;
        if (target && target->class_name == attr.target_class) {
          values.emplace(attr.name, *id);
          continue;
        }
        reject(ErrorCode::DanglingLink,
               "'" + attr.name + "' id '" + cell + "' is not a known '" + attr.target_class + "'");
        failed = true;
        break;
      }

      const auto found = store.find_by_label(attr.target_class, cell);
      if (found.size() == 1) {
        values.emplace(attr.name, found.front());
      } else if (found.size() > 1) {
        reject(ErrorCode::AmbiguousLink, "'" + cell + "' labels " + std::to_string(found.size()) +
                                             " '" + attr.target_class + "' objects");
        failed = true;
        break;
      } else if (mapping.unresolved_policy == UnresolvedPolicy::create_stub) {
        stubs.emplace_back(cell, &attr);
      } else {
        reject(ErrorCode::DanglingLink,
               "no '" + attr.target_class + "' labelled '" + cell + "' for '" + attr.name + "'");
        failed = true;
        break;
      }
    }
    if (failed) continue;

    try {
      if (stubs.empty()) {
        store.insert(cls.name, std::move(values));
      } else {
        Store trial = store;
        std::size_t created = 0;
        for (const auto& [label, attr] : stubs) {
          // Two columns may name the same missing target.
          auto existing = trial.find_by_label(attr->target_class, label);
          if (!existing.empty()) {
            values.emplace(attr->name, existing.front());
            continue;
          }
          const ClassDef& target = vocab.at(attr->target_class);
          Values stub_values;
          stub_values.emplace(target.label_attribute, label);
          values.emplace(attr->name, trial.insert(target.name, std::move(stub_values)));
          ++created;
        }
        trial.insert(cls.name, std::move(values));
        store = std::move(trial);
        report.stubs_created += created;
      }
      ++report.inserted;
    } catch (const Error& e) {
      reject(e.code(), e.what());
    }
  }
  return report;
}

Json to_json(const ImportMapping& mapping) {
  Json out;
  out["class"] = mapping.class_name;
  Json columns = Json::object();
  for (const auto& [column, attribute] : mapping.column_map) columns[column] = attribute;
  out["column_map"] = std::move(columns);
  Json links = Json::object();
  for (const auto& [attribute, res] : mapping.link_resolution) {
    links[attribute] = std::string(to_string(res));
  }
  out["link_resolution"] = std::move(links);
  out["unresolved_policy"] = std::string(to_string(mapping.unresolved_policy));
  return out;
}

ImportMapping mapping_from_json(const Json& json) {
  ImportMapping mapping;
  try {
    mapping.class_name = json.at("class").get<std::string>();
    for (const auto& [column, attribute] : json.at("column_map").items()) {
      mapping.column_map[column] = attribute.get<std::string>();
    }
    if (json.contains("link_resolution")) {
      for (const auto& [attribute, res] : json.at("link_resolution").items()) {
        const std::string name = res.get<std::string>();
        if (name == "by_label") {
          mapping.link_resolution[attribute] = LinkResolution::by_label;
        } else if (name == "by_id") {
          mapping.link_resolution[attribute] = LinkResolution::by_id;
        } else {
          throw invalid_mapping("unknown link resolution '" + name + "'");
        }
      }
    }
    const std::string policy = json.value("unresolved_policy", std::string("reject_row"));
    if (policy == "reject_row") {
      mapping.unresolved_policy = UnresolvedPolicy::reject_row;
    } else if (policy == "create_stub") {
      mapping.unresolved_policy = UnresolvedPolicy::create_stub;
    } else {
      throw invalid_mapping("unknown unresolved policy '" + policy + "'");
    }
  } catch (const Json::exception& e) {
    throw invalid_mapping(std::string("malformed mapping: ") + e.what());
  }
  return mapping;
}

Json to_json(const ImportReport& report) {
  Json out;
  out["inserted"] = report.inserted;
  Json rejected = Json::array();
  for (const auto& r : report.rejected) {
    Json j;
    j["row"] = r.row;
    j["code"] = std::string(to_string(r.code));
    j["message"] = r.message;
    rejected.push_back(std::move(j));
  }
  out["rejected"] = std::move(rejected);
  out["stubs_created"] = report.stubs_created;
  return out;
}

Json to_json(const Inspection& inspection) {
  Json out;
  out["headers"] = inspection.headers;
  out["delimiter"] = std::string(1, inspection.delimiter);
  Json ranking = Json::array();
  for (const auto& m : inspection.ranking) ranking.push_back(to_json(m));
  out["ranking"] = std::move(ranking);
  out["proposed"] = to_json(inspection.proposed);
  return out;
}

}  // namespace panoptica
