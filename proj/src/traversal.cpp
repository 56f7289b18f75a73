#include "panoptica/traversal.hpp"

#include <algorithm>

namespace panoptica {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool is_ordered_kind(Kind kind) {
  return kind == Kind::integer || kind == Kind::decimal || kind == Kind::date;
}

Error kind_mismatch(const std::string& class_name, const AttributeDef& attr,
                    std::string_view predicate) {
  return Error(ErrorCode::PredicateKindMismatch,
               std::string(predicate) + " does not apply to " + class_name + "." + attr.name +
                   " (" + std::string(to_string(attr.kind)) + ")");
}

bool links_to(const ObjectRecord& record, ObjectId target) {
  for (const auto& [name, value] : record.values) {
    if (kind_of(value) == Kind::link && std::get<ObjectId>(value) == target) return true;
  }
  return false;
}

LinkTarget describe(const Store& store, ObjectId id) {
  const ObjectRecord& r = store.get(id);
  return LinkTarget{id, r.class_name, store.label(id)};
}

}  // namespace

void check_filter(const Vocabulary& vocab, const Filter& filter) {
  const ClassDef& cls = vocab.at(filter.class_name);
  for (const auto& clause : filter.clauses) {
    const AttributeDef* attr = cls.find(clause.attribute);
    if (!attr) {
      throw Error(ErrorCode::UnknownAttribute,
                  "class '" + cls.name + "' has no attribute '" + clause.attribute + "'");
    }
    std::visit(Overloaded{
                   [&](const predicate::Equals& p) {
                     if (kind_of(p.value) != attr->kind) throw kind_mismatch(cls.name, *attr, "equals");
                   },
                   [&](const predicate::Contains&) {
                     if (attr->kind != Kind::text) throw kind_mismatch(cls.name, *attr, "contains");
                   },
                   [&](const predicate::Range& p) {
                     if (!is_ordered_kind(attr->kind) || kind_of(p.lo) != attr->kind ||
                         kind_of(p.hi) != attr->kind) {
                       throw kind_mismatch(cls.name, *attr, "range");
                     }
                   },
                   [&](const predicate::InSet&) {
                     if (!attr->is_link()) throw kind_mismatch(cls.name, *attr, "in_set");
                   },
               },
               clause.predicate);
  }
}

bool matches(const Filter& filter, const ObjectRecord& record) {
  for (const auto& clause : filter.clauses) {
    const Value* v = record.get(clause.attribute);
    if (!v) return false;
    const bool ok = std::visit(
        Overloaded{
            [&](const predicate::Equals& p) { return *v == p.value; },
            [&](const predicate::Contains& p) {
              if (kind_of(*v) != Kind::text) return false;
              return ascii_lower(std::get<std::string>(*v)).find(ascii_lower(p.text)) !=
                     std::string::npos;
            },
            [&](const predicate::Range& p) {
              if (v->index() != p.lo.index()) return false;
              return !(*v < p.lo) && !(p.hi < *v);
            },
            [&](const predicate::InSet& p) {
              return kind_of(*v) == Kind::link && p.ids.count(std::get<ObjectId>(*v)) != 0;
            },
        },
        clause.predicate);
    if (!ok) return false;
  }
  return true;
}

bool visible(const Store& store, const Session& session, const ObjectRecord& record) {
  if (auto f = session.filters.find(record.class_name); f != session.filters.end()) {
    if (!matches(f->second, record)) return false;
  }
  if (auto a = session.anchors.find(record.class_name); a != session.anchors.end()) {
    const ObjectId anchor = a->second;
    if (record.id == anchor) return true;
    const ObjectRecord* pinned = store.find(anchor);
    if (!pinned) return true;
    return links_to(record, anchor) || links_to(*pinned, record.id);
  }
  return true;
}

std::vector<ClassCount> list_classes(const Store& store, const Session& session) {
  std::vector<ClassCount> out;
  for (const auto& cls : store.vocabulary().classes) {
    const bool restricted = session.filters.count(cls.name) || session.anchors.count(cls.name);
    std::size_t count = 0;
    if (!restricted) {
      count = store.count_of(cls.name);
    } else {
      for (ObjectId id : store.objects_of(cls.name)) {
        if (visible(store, session, store.get(id))) ++count;
      }
    }
    out.push_back({cls.name, count});
  }
  return out;
}

namespace {

std::vector<ObjectEntry> visible_objects(const Store& store, const Session& session,
                                         std::string_view class_name) {
  std::vector<ObjectEntry> out;
  for (ObjectId id : store.objects_of(class_name)) {
    if (visible(store, session, store.get(id))) out.push_back({id, store.label(id)});
  }
  return out;
}

}  // namespace

std::vector<ObjectEntry> select_class(const Store& store, Session& session,
                                      std::string_view class_name) {
  const ClassDef& cls = store.vocabulary().at(class_name);
  session.selected_class = cls.name;
  return visible_objects(store, session, cls.name);
}

ViewModel build_view(const Store& store, const Session& session) {
  ViewModel view;
  view.d1_classes = list_classes(store, session);
  if (session.selected_class && store.vocabulary().find(*session.selected_class)) {
    view.selected_class = session.selected_class;
    view.d2_objects = visible_objects(store, session, *session.selected_class);
  }
  if (!session.focus || !store.contains(*session.focus)) return view;

  const ObjectId focus_id = *session.focus;
  const ObjectRecord& record = store.get(focus_id);
  const ClassDef& cls = store.vocabulary().at(record.class_name);
  view.focus = describe(store, focus_id);

  for (const auto& attr : cls.attributes) {
    AttributeEntry entry;
    entry.attribute = attr.name;
    entry.kind = attr.kind;
    entry.is_link = attr.is_link();
    if (const Value* v = record.get(attr.name)) {
      if (attr.is_link()) {
        const ObjectId target = std::get<ObjectId>(*v);
        if (store.contains(target)) {
          entry.target = describe(store, target);
          entry.rendered = entry.target->label;
        }
      } else {
        entry.rendered = render(*v);
      }
    }
    view.d3_attributes.push_back(std::move(entry));
  }

  for (const auto& group : store.incoming(focus_id)) {
    ContextGroup ctx{group.class_name, group.attribute, {}};
    for (ObjectId member : group.members) {
      if (visible(store, session, store.get(member))) {
        ctx.members.push_back({member, store.label(member)});
      }
    }
    if (ctx.members.empty()) continue;

    const ClassDef& member_cls = store.vocabulary().at(group.class_name);
    GroupAttributes attrs{group.class_name, group.attribute, {}, {}};
    for (const auto& a : member_cls.attributes) {
      if (!a.is_link()) attrs.columns.push_back(a.name);
    }
    for (const auto& m : ctx.members) {
      GroupRow row{m.id, {}};
      const ObjectRecord& member_record = store.get(m.id);
      for (const auto& column : attrs.columns) {
        const Value* v = member_record.get(column);
        row.values.push_back(v ? render(*v) : std::string());
      }
      attrs.rows.push_back(std::move(row));
    }
    view.d4_context.push_back(std::move(ctx));
    view.d5_group_attributes.push_back(std::move(attrs));
  }
  return view;
}

ViewModel focus(const Store& store, Session& session, ObjectId id) {
  store.get(id);
  session.focus = id;
  session.history.push_back(id);
  return build_view(store, session);
}

namespace {

void require_focus(const Store& store, const Session& session, ObjectId from) {
  store.get(from);
  if (session.focus != from) {
    throw Error(ErrorCode::NotFocused,
                "#" + std::to_string(from.value) + " is not the current focus");
  }
}

}  // namespace

ViewModel follow(const Store& store, Session& session, ObjectId from,
                 std::string_view attribute) {
  require_focus(store, session, from);
  const ClassDef& cls = store.class_of(from);
  const AttributeDef* attr = cls.find(attribute);
  if (!attr || !attr->is_link()) {
    throw Error(ErrorCode::UnknownAttribute,
                "'" + cls.name + "' has no link attribute '" + std::string(attribute) + "'");
  }
  auto target = store.link_target(from, attribute);
  if (!target) {
    throw Error(ErrorCode::UnpopulatedLink,
                "link '" + cls.name + "." + attr->name + "' of #" + std::to_string(from.value) +
                    " is not set");
  }
  return focus(store, session, *target);
}

ViewModel follow(const Store& store, Session& session, ObjectId from, ObjectId member) {
  require_focus(store, session, from);
  const ObjectRecord& record = store.get(member);
  bool displayed = false;
  for (const LinkSource& src : store.backward(from)) {
    if (src.source == member) displayed = true;
  }
  if (!displayed || !visible(store, session, record)) {
    throw Error(ErrorCode::NotInView, "#" + std::to_string(member.value) +
                                          " is not in the context of #" +
                                          std::to_string(from.value));
  }
  return focus(store, session, member);
}

void set_filter(const Store& store, Session& session, Filter filter) {
  check_filter(store.vocabulary(), filter);
  std::string key = filter.class_name;
  session.filters.insert_or_assign(std::move(key), std::move(filter));
}

void clear_filter(Session& session, std::string_view class_name) {
  if (auto it = session.filters.find(class_name); it != session.filters.end()) {
    session.filters.erase(it);
  }
}

void set_anchor(const Store& store, Session& session, std::string_view class_name, ObjectId id) {
  const ClassDef& cls = store.vocabulary().at(class_name);
  const ObjectRecord& record = store.get(id);
  if (record.class_name != cls.name) {
    throw Error(ErrorCode::ClassMismatch, "#" + std::to_string(id.value) + " is a '" +
                                              record.class_name + "', not a '" + cls.name + "'");
  }
  session.anchors.insert_or_assign(cls.name, id);
}

void clear_anchor(Session& session, std::string_view class_name) {
  if (auto it = session.anchors.find(class_name); it != session.anchors.end()) {
    session.anchors.erase(it);
  }
}

void prune(const Store& store, Session& session) {
  const Vocabulary& vocab = store.vocabulary();
  if (session.selected_class && !vocab.find(*session.selected_class)) {
    session.selected_class.reset();
  }
  if (session.focus && !store.contains(*session.focus)) session.focus.reset();
  std::erase_if(session.anchors, [&](const auto& entry) {
    return !vocab.find(entry.first) || !store.contains(entry.second);
  });
  std::erase_if(session.filters, [&](const auto& entry) {
    try {
      check_filter(vocab, entry.second);
      return false;
    } catch (const Error&) {
      return true;
    }
  });
  std::erase_if(session.history, [&](ObjectId id) { return !store.contains(id); });
}

// ---------------------------------------------------------------------------
// JSON

Json to_json(const ObjectEntry& e) {
  Json j;
  j["id"] = e.id.value;
  j["label"] = e.label;
  return j;
}

Json to_json(const ViewModel& view) {
  Json out;
  Json d1 = Json::array();
  for (const auto& c : view.d1_classes) {
    Json j;
    j["class"] = c.class_name;
    j["count"] = c.count;
    d1.push_back(std::move(j));
  }
  out["d1"] = std::move(d1);

  out["selected_class"] = view.selected_class ? Json(*view.selected_class) : Json();
  Json d2 = Json::array();
  for (const auto& e : view.d2_objects) d2.push_back(to_json(e));
  out["d2"] = std::move(d2);

  if (view.focus) {
    Json f;
    f["id"] = view.focus->id.value;
    f["class"] = view.focus->class_name;
    f["label"] = view.focus->label;
    out["focus"] = std::move(f);
  } else {
    out["focus"] = nullptr;
  }

  Json d3 = Json::array();
  for (const auto& a : view.d3_attributes) {
    Json j;
    j["attribute"] = a.attribute;
    j["kind"] = std::string(to_string(a.kind));
    j["value"] = a.rendered;
    j["is_link"] = a.is_link;
    if (a.target) {
      Json t;
      t["target_id"] = a.target->id.value;
      t["target_class"] = a.target->class_name;
      t["target_label"] = a.target->label;
      j["target"] = std::move(t);
    } else {
      j["target"] = nullptr;
    }
    d3.push_back(std::move(j));
  }
  out["d3"] = std::move(d3);

  Json d4 = Json::array();
  for (const auto& g : view.d4_context) {
    Json j;
    j["class"] = g.class_name;
    j["attribute"] = g.attribute;
    Json members = Json::array();
    for (const auto& m : g.members) members.push_back(to_json(m));
    j["members"] = std::move(members);
    d4.push_back(std::move(j));
  }
  out["d4"] = std::move(d4);

  Json d5 = Json::array();
  for (const auto& g : view.d5_group_attributes) {
    Json j;
    j["class"] = g.class_name;
    j["attribute"] = g.attribute;
    j["columns"] = g.columns;
    Json rows = Json::array();
    for (const auto& r : g.rows) {
      Json row;
      row["id"] = r.id.value;
      row["values"] = r.values;
      rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    d5.push_back(std::move(j));
  }
  out["d5"] = std::move(d5);
  return out;
}

Json to_json(const Filter& filter) {
  Json clauses = Json::array();
  for (const auto& clause : filter.clauses) {
    Json j;
    j["attribute"] = clause.attribute;
    std::visit(Overloaded{
                   [&](const predicate::Equals& p) {
                     j["op"] = "equals";
                     j["value"] = panoptica::to_json(p.value);
                   },
                   [&](const predicate::Contains& p) {
                     j["op"] = "contains";
                     j["text"] = p.text;
                   },
                   [&](const predicate::Range& p) {
                     j["op"] = "range";
                     j["lo"] = panoptica::to_json(p.lo);
                     j["hi"] = panoptica::to_json(p.hi);
                   },
                   [&](const predicate::InSet& p) {
                     j["op"] = "in_set";
                     Json ids = Json::array();
                     for (ObjectId id : p.ids) ids.push_back(id.value);
                     j["ids"] = std::move(ids);
                   },
               },
               clause.predicate);
    clauses.push_back(std::move(j));
  }
  Json out;
  out["class"] = filter.class_name;
  out["clauses"] = std::move(clauses);
  return out;
}

Json to_json(const Session& session) {
  Json out;
  out["selected_class"] = session.selected_class ? Json(*session.selected_class) : Json();
  out["focus"] = session.focus ? Json(session.focus->value) : Json();
  Json filters = Json::array();
  for (const auto& [name, filter] : session.filters) filters.push_back(to_json(filter));
  out["filters"] = std::move(filters);
  Json anchors = Json::object();
  for (const auto& [name, id] : session.anchors) anchors[name] = id.value;
  out["anchors"] = std::move(anchors);
  Json history = Json::array();
  for (ObjectId id : session.history) history.push_back(id.value);
  out["history"] = std::move(history);
  return out;
}

Filter filter_from_json(const Vocabulary& vocab, const Json& json) {
  Filter filter;
  try {
    filter.class_name = json.at("class").get<std::string>();
    const ClassDef& cls = vocab.at(filter.class_name);
    for (const auto& c : json.at("clauses")) {
      Clause clause;
      clause.attribute = c.at("attribute").get<std::string>();
      const AttributeDef* attr = cls.find(clause.attribute);
      if (!attr) {
        throw Error(ErrorCode::UnknownAttribute,
                    "class '" + cls.name + "' has no attribute '" + clause.attribute + "'");
      }
      const std::string op = c.at("op").get<std::string>();
      auto value_of = [&](const char* field) {
        auto v = value_from_json(attr->kind, c.at(field));
        if (!v) {
          throw Error(ErrorCode::PredicateKindMismatch,
                      std::string("'") + field + "' is not a valid " +
                          std::string(to_string(attr->kind)) + " for " + cls.name + "." +
                          attr->name);
        }
        return *v;
      };
      if (op == "equals") {
        clause.predicate = predicate::Equals{value_of("value")};
      } else if (op == "contains") {
        clause.predicate = predicate::Contains{c.at("text").get<std::string>()};
      } else if (op == "range") {
        clause.predicate = predicate::Range{value_of("lo"), value_of("hi")};
      } else if (op == "in_set") {
        predicate::InSet in;
        for (const auto& id : c.at("ids")) in.ids.insert(ObjectId{id.get<std::uint64_t>()});
        clause.predicate = std::move(in);
      } else {
        throw Error(ErrorCode::ParseError, "unknown predicate '" + op + "'");
      }
      filter.clauses.push_back(std::move(clause));
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed filter: ") + e.what());
  }
  check_filter(vocab, filter);
  return filter;
}

}  // namespace panoptica
