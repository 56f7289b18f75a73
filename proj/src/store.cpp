#include "panoptica/store.hpp"

#include <algorithm>

namespace panoptica {

namespace {

std::string object_ref(ObjectId id) { return "#" + std::to_string(id.value); }

Error unknown_object(ObjectId id) {
  return Error(ErrorCode::UnknownObject, "unknown object " + object_ref(id));
}

}  // namespace

const Value* ObjectRecord::get(std::string_view attribute) const {
  auto it = values.find(attribute);
  return it == values.end() ? nullptr : &it->second;
}

Store::Store(std::shared_ptr<const Vocabulary> vocab) : vocab_(std::move(vocab)) {}

Store::Store(Vocabulary vocab) : vocab_(std::make_shared<const Vocabulary>(std::move(vocab))) {}

const ObjectRecord* Store::find(ObjectId id) const {
  auto it = objects_.find(id);
  return it == objects_.end() ? nullptr : &it->second;
}

const ObjectRecord& Store::get(ObjectId id) const {
  if (const ObjectRecord* r = find(id)) return *r;
  throw unknown_object(id);
}

const ClassDef& Store::class_of(ObjectId id) const { return vocab_->at(get(id).class_name); }

std::string Store::label_of(const ObjectRecord& record) const {
  const ClassDef* cls = vocab_->find(record.class_name);
  if (!cls) return {};
  const Value* v = record.get(cls->label_attribute);
  return v ? render(*v) : std::string();
}

std::string Store::label(ObjectId id) const { return label_of(get(id)); }

void Store::check_record(const ObjectRecord& record, const ClassDef& cls) const {
  for (const auto& [name, value] : record.values) {
    const AttributeDef* attr = cls.find(name);
    if (!attr) {
      throw Error(ErrorCode::UnknownAttribute,
                  "class '" + cls.name + "' has no attribute '" + name + "'");
    }
    if (kind_of(value) != attr->kind) {
      throw Error(ErrorCode::KindMismatch, "attribute '" + cls.name + "." + name + "' expects " +
                                               std::string(to_string(attr->kind)) + ", got " +
                                               std::string(to_string(kind_of(value))));
    }
    if (attr->is_link()) {
      const ObjectId target = std::get<ObjectId>(value);
      // A record may point at itself (only reachable through update).
      const ObjectRecord* t = target == record.id ? &record : find(target);
      if (!t) {
        throw Error(ErrorCode::DanglingLink, "link '" + cls.name + "." + name +
                                                 "' references missing object " +
                                                 object_ref(target));
      }
      if (t->class_name != attr->target_class) {
        throw Error(ErrorCode::DanglingLink, "link '" + cls.name + "." + name + "' expects a '" +
                                                 attr->target_class + "', " + object_ref(target) +
                                                 " is a '" + t->class_name + "'");
      }
    }
  }
  for (const auto& attr : cls.attributes) {
    if (attr.required && !record.values.count(attr.name)) {
      throw Error(ErrorCode::MissingRequired,
                  "required attribute '" + cls.name + "." + attr.name + "' is not set");
    }
  }
}

std::optional<Store::KeyTuple> Store::key_of(const ObjectRecord& record,
                                              const ClassDef& cls) const {
  if (!cls.is_intermediate || !cls.key_unique) return std::nullopt;
  KeyTuple key;
  for (const AttributeDef* link : cls.links()) {
    const Value* v = record.get(link->name);
    if (!v || kind_of(*v) != Kind::link) return std::nullopt;
    key.push_back(std::get<ObjectId>(*v));
  }
  return key;
}

void Store::index_record(const ObjectRecord& record) {
  const ClassDef* cls = vocab_->find(record.class_name);
  for (const auto& [name, value] : record.values) {
    if (kind_of(value) != Kind::link) continue;
    if (cls && (!cls->find(name) || !cls->find(name)->is_link())) continue;
    const ObjectId target = std::get<ObjectId>(value);
    forward_[{record.id, name}] = target;
    backward_[target].insert(LinkSource{record.id, name});
  }
  by_class_[record.class_name].insert({label_of(record), record.id});
  if (cls) {
    if (auto key = key_of(record, *cls)) keys_[cls->name].emplace(std::move(*key), record.id);
  }
}

void Store::unindex_record(const ObjectRecord& record) {
  for (const auto& [name, value] : record.values) {
    if (kind_of(value) != Kind::link) continue;
    const ObjectId target = std::get<ObjectId>(value);
    auto fwd = forward_.find(std::pair{record.id, name});
    if (fwd != forward_.end() && fwd->second == target) forward_.erase(fwd);
    auto bwd = backward_.find(target);
    if (bwd != backward_.end()) {
      bwd->second.erase(LinkSource{record.id, name});
      if (bwd->second.empty()) backward_.erase(bwd);
    }
  }
  if (auto it = by_class_.find(record.class_name); it != by_class_.end()) {
    it->second.erase({label_of(record), record.id});
    if (it->second.empty()) by_class_.erase(it);
  }
  if (const ClassDef* cls = vocab_->find(record.class_name)) {
    if (auto key = key_of(record, *cls)) {
      auto per_class = keys_.find(cls->name);
      if (per_class != keys_.end()) {
        auto k = per_class->second.find(*key);
        if (k != per_class->second.end() && k->second == record.id) per_class->second.erase(k);
      }
    }
  }
}

ObjectId Store::insert(std::string_view class_name, Values values) {
  const ClassDef& cls = vocab_->at(class_name);

  ObjectRecord record{ObjectId{next_id_}, cls.name, std::move(values)};

  if (cls.is_intermediate && cls.label_attribute == kKeyLabel && !record.get(kKeyLabel)) {
    std::string synthesized;
    bool complete = true;
    for (const AttributeDef* link : cls.links()) {
      const Value* v = record.get(link->name);
      const ObjectRecord* target =
          (v && kind_of(*v) == Kind::link) ? find(std::get<ObjectId>(*v)) : nullptr;
      if (!target) {
        complete = false;
        break;
      }
      if (!synthesized.empty()) synthesized += " / ";
      synthesized += label_of(*target);
    }
    if (complete) record.values.emplace(std::string(kKeyLabel), std::move(synthesized));
  }

  check_record(record, cls);
  if (auto key = key_of(record, cls)) {
    auto per_class = keys_.find(cls.name);
    if (per_class != keys_.end() && per_class->second.count(*key)) {
      throw Error(ErrorCode::DuplicateKey, "'" + cls.name + "' already holds this key as " +
                                               object_ref(per_class->second.at(*key)));
    }
  }

  const ObjectId id = record.id;
  index_record(record);
  objects_.emplace(id, std::move(record));
  ++next_id_;
  return id;
}

void Store::update(ObjectId id, const Patch& patch) {
  const ObjectRecord& current = get(id);
  const ClassDef& cls = vocab_->at(current.class_name);

  ObjectRecord next = current;
  for (const auto& [name, value] : patch) {
    if (value) {
      next.values.insert_or_assign(name, *value);
    } else {
      if (!cls.find(name)) {
        throw Error(ErrorCode::UnknownAttribute,
                    "class '" + cls.name + "' has no attribute '" + name + "'");
      }
      next.values.erase(name);
    }
  }

  check_record(next, cls);
  if (auto key = key_of(next, cls)) {
    auto per_class = keys_.find(cls.name);
    if (per_class != keys_.end()) {
      auto k = per_class->second.find(*key);
      if (k != per_class->second.end() && k->second != id) {
        throw Error(ErrorCode::DuplicateKey,
                    "'" + cls.name + "' already holds this key as " + object_ref(k->second));
      }
    }
  }

  unindex_record(current);
  auto& slot = objects_.at(id);
  slot = std::move(next);
  index_record(slot);
}

void Store::remove(ObjectId id, bool detach) {
  const ObjectRecord& record = get(id);

  std::vector<LinkSource> incoming_links;
  for (const LinkSource& src : backward(id)) {
    if (src.source != id) incoming_links.push_back(src);
  }

  if (!incoming_links.empty() && !detach) {
    throw Error(ErrorCode::HasIncomingLinks,
                object_ref(id) + " has " + std::to_string(incoming_links.size()) +
                    " incoming link(s)");
  }
  for (const LinkSource& src : incoming_links) {
    const ClassDef& src_cls = class_of(src.source);
    const AttributeDef* attr = src_cls.find(src.attribute);
    if (attr && attr->required) {
      throw Error(ErrorCode::RequiredLinkWouldDangle,
                  "required link '" + src_cls.name + "." + src.attribute + "' of " +
                      object_ref(src.source) + " points at " + object_ref(id));
    }
  }

  for (const LinkSource& src : incoming_links) {
    ObjectRecord& source = objects_.at(src.source);
    unindex_record(source);
    source.values.erase(src.attribute);
    index_record(source);
  }
  unindex_record(record);
  objects_.erase(id);
}

std::size_t Store::authority(ObjectId id) const {
  get(id);
  return backward(id).size();
}

const std::set<LinkSource>& Store::backward(ObjectId target) const {
  static const std::set<LinkSource> kEmpty;
  auto it = backward_.find(target);
  return it == backward_.end() ? kEmpty : it->second;
}

std::optional<ObjectId> Store::link_target(ObjectId source, std::string_view attribute) const {
  auto it = forward_.find(std::pair{source, std::string(attribute)});
  if (it == forward_.end()) return std::nullopt;
  return it->second;
}

std::vector<IncomingGroup> Store::incoming(ObjectId id) const {
  get(id);
  // (class position, attribute position) -> members
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::pair<std::string, ObjectId>>>
      grouped;
  for (const LinkSource& src : backward(id)) {
    const ObjectRecord& source = get(src.source);
    const auto class_pos = vocab_->index_of(source.class_name).value_or(vocab_->classes.size());
    std::size_t attr_pos = 0;
    if (class_pos < vocab_->classes.size()) {
      const auto& attrs = vocab_->classes[class_pos].attributes;
      while (attr_pos < attrs.size() && attrs[attr_pos].name != src.attribute) ++attr_pos;
    }
    grouped[{class_pos, attr_pos}].emplace_back(label_of(source), src.source);
  }

  std::vector<IncomingGroup> out;
  for (auto& [pos, members] : grouped) {
    std::sort(members.begin(), members.end());
    IncomingGroup group;
    group.class_name = get(members.front().second).class_name;
    const auto& attrs = vocab_->classes.at(pos.first).attributes;
    group.attribute = attrs.at(pos.second).name;
    for (const auto& m : members) group.members.push_back(m.second);
    out.push_back(std::move(group));
  }
  return out;
}

std::vector<ObjectId> Store::objects_of(std::string_view class_name) const {
  std::vector<ObjectId> out;
  auto it = by_class_.find(class_name);
  if (it == by_class_.end()) return out;
  out.reserve(it->second.size());
  for (const auto& entry : it->second) out.push_back(entry.second);
  return out;
}

std::size_t Store::count_of(std::string_view class_name) const {
  auto it = by_class_.find(class_name);
  return it == by_class_.end() ? 0 : it->second.size();
}

std::vector<ObjectId> Store::find_by_label(std::string_view class_name,
                                           std::string_view label) const {
  std::vector<ObjectId> out;
  auto it = by_class_.find(class_name);
  if (it == by_class_.end()) return out;
  const std::string key(label);
  for (auto e = it->second.lower_bound({key, ObjectId{0}});
       e != it->second.end() && e->first == key; ++e) {
    out.push_back(e->second);
  }
  return out;
}

std::vector<Violation> Store::integrity_check() const {
  std::vector<Violation> out;
  auto report = [&](ErrorCode code, ObjectId id, std::string attr, std::string msg) {
    out.push_back(Violation{code, id, std::move(attr), std::move(msg)});
  };

  std::map<std::pair<ObjectId, std::string>, ObjectId> expected_forward;
  std::map<std::string, std::map<KeyTuple, ObjectId>> seen_keys;

  for (const auto& [id, record] : objects_) {
    if (id.value == 0 || id.value >= next_id_) {
      report(ErrorCode::CorruptStore, id, {},
             object_ref(id) + " is outside the allocated id range");
    }
    const ClassDef* cls = vocab_->find(record.class_name);
    if (!cls) {
      report(ErrorCode::UnknownClass, id, {},
             object_ref(id) + " has unknown class '" + record.class_name + "'");
      continue;
    }
    for (const auto& [name, value] : record.values) {
      const AttributeDef* attr = cls->find(name);
      if (!attr) {
        report(ErrorCode::UnknownAttribute, id, name,
               object_ref(id) + " sets unknown attribute '" + name + "'");
        continue;
      }
      if (kind_of(value) != attr->kind) {
        report(ErrorCode::KindMismatch, id, name,
               object_ref(id) + "." + name + " holds a " +
                   std::string(to_string(kind_of(value))) + " value");
        continue;
      }
      if (attr->is_link()) {
        const ObjectId target = std::get<ObjectId>(value);
        expected_forward[{id, name}] = target;
        const ObjectRecord* t = find(target);
        if (!t) {
          report(ErrorCode::DanglingLink, id, name,
                 object_ref(id) + "." + name + " references missing " + object_ref(target));
        } else if (t->class_name != attr->target_class) {
          report(ErrorCode::DanglingLink, id, name,
                 object_ref(id) + "." + name + " references a '" + t->class_name +
                     "', expected '" + attr->target_class + "'");
        }
      }
    }
    for (const auto& attr : cls->attributes) {
      if (attr.required && !record.values.count(attr.name)) {
        report(ErrorCode::MissingRequired, id, attr.name,
               object_ref(id) + " lacks required '" + attr.name + "'");
      }
    }
    if (auto key = key_of(record, *cls)) {
      auto [it, fresh] = seen_keys[cls->name].emplace(*key, id);
      if (!fresh) {
        report(ErrorCode::DuplicateKey, id, {},
               object_ref(id) + " repeats the key of " + object_ref(it->second));
      }
    }
  }

  // Forward index versus record contents.
  for (const auto& [slot, target] : expected_forward) {
    auto it = forward_.find(slot);
    if (it == forward_.end() || it->second != target) {
      report(ErrorCode::MirrorViolation, slot.first, slot.second,
             "forward index lacks " + object_ref(slot.first) + "." + slot.second);
    }
  }
  for (const auto& [slot, target] : forward_) {
    if (!expected_forward.count(slot)) {
      report(ErrorCode::MirrorViolation, slot.first, slot.second,
             "forward index holds stale " + object_ref(slot.first) + "." + slot.second);
    }
    auto b = backward_.find(target);
    if (b == backward_.end() || !b->second.count(LinkSource{slot.first, slot.second})) {
      report(ErrorCode::MirrorViolation, slot.first, slot.second,
             "backward index of " + object_ref(target) + " lacks " + object_ref(slot.first) +
                 "." + slot.second);
    }
  }
  for (const auto& [target, sources] : backward_) {
    for (const auto& src : sources) {
      auto f = forward_.find(std::pair{src.source, src.attribute});
      if (f == forward_.end() || f->second != target) {
        report(ErrorCode::MirrorViolation, src.source, src.attribute,
               "backward index of " + object_ref(target) + " holds " + object_ref(src.source) +
                   "." + src.attribute + " without a forward entry");
      }
    }
  }
  return out;
}

Store Store::restore(std::shared_ptr<const Vocabulary> vocab, std::uint64_t next_id,
                     std::vector<ObjectRecord> records) {
  Store store(std::move(vocab));
  store.next_id_ = next_id;
  for (auto& record : records) {
    const ObjectId id = record.id;
    if (!store.objects_.emplace(id, std::move(record)).second) {
      throw Error(ErrorCode::CorruptStore, "duplicate object " + object_ref(id));
    }
  }
  for (const auto& [id, record] : store.objects_) store.index_record(record);
  return store;
}

}  // namespace panoptica
