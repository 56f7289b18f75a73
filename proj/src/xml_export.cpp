#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "markup.hpp"
#include "panoptica/reports.hpp"
#include "panoptica/sql.hpp"

namespace panoptica {

namespace {

using markup::attr;
using markup::escape;
namespace pt = boost::property_tree;

void require_integrity(const Store& store) {
  const auto violations = store.integrity_check();
  if (!violations.empty()) {
    throw Error(ErrorCode::CorruptStore, "store fails integrity check: " +
                                             std::string(to_string(violations.front().code)) +
                                             ": " + violations.front().message);
  }
}

std::string export_sql(const Store& store) {
  const Vocabulary& vocab = store.vocabulary();
  std::ostringstream out;
  out << compile_ddl(vocab);
  if (store.size() == 0) return out.str();

  out << "\nBEGIN TRANSACTION;\n";
  for (const auto& [id, record] : store.records()) {
    const ClassDef& cls = vocab.at(record.class_name);
    std::string columns = "\"id\"";
    std::string values = std::to_string(id.value);
    for (const auto& a : cls.attributes) {
      const Value* v = record.get(a.name);
      if (!v) continue;
      columns += ", " + sql::quote_identifier(sql::column_name(a));
      values += ", " + sql::literal(*v);
    }
    out << "INSERT INTO " << sql::quote_identifier(cls.name) << " (" << columns << ") VALUES ("
        << values << ");\n";
  }
  out << "COMMIT;\n";
  return out.str();
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

std::string export_xml(const Store& store) {
  const Vocabulary& vocab = store.vocabulary();
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<panoptica>\n";
  out << "  <vocabulary" << attr("name", vocab.name)
      << attr("version", std::to_string(vocab.version)) << ">\n";
  for (const auto& cls : vocab.classes) {
    out << "    <class" << attr("name", cls.name)
        << attr("intermediate", bool_text(cls.is_intermediate))
        << attr("label", cls.label_attribute) << attr("key_unique", bool_text(cls.key_unique))
        << ">\n";
    for (const auto& a : cls.attributes) {
      out << "      <attribute" << attr("name", a.name) << attr("kind", to_string(a.kind));
      if (a.is_link()) out << attr("target", a.target_class);
      out << attr("required", bool_text(a.required)) << "/>\n";
    }
    out << "    </class>\n";
  }
  out << "  </vocabulary>\n";
  out << "  <objects" << attr("next_id", std::to_string(store.next_id())) << ">\n";
  for (const auto& [id, record] : store.records()) {
    const ClassDef& cls = vocab.at(record.class_name);
    out << "    <object" << attr("id", std::to_string(id.value)) << attr("class", cls.name)
        << ">\n";
    for (const auto& a : cls.attributes) {
      if (const Value* v = record.get(a.name)) {
        out << "      <value" << attr("name", a.name) << ">" << escape(render(*v))
            << "</value>\n";
      }
    }
    out << "    </object>\n";
  }
  out << "  </objects>\n";
  out << "</panoptica>\n";
  return out.str();
}

std::string xml_attr(const pt::ptree& node, const std::string& name) {
  auto v = node.get_optional<std::string>("<xmlattr>." + name);
  if (!v) throw Error(ErrorCode::ParseError, "missing XML attribute '" + name + "'");
  return *v;
}

bool xml_bool(const pt::ptree& node, const std::string& name) {
  const std::string v = xml_attr(node, name);
  if (v == "true") return true;
  if (v == "false") return false;
  throw Error(ErrorCode::ParseError, "attribute '" + name + "' must be true or false");
}

std::uint64_t xml_uint(const pt::ptree& node, const std::string& name) {
  auto v = parse_value(Kind::integer, xml_attr(node, name));
  if (!v || std::get<std::int64_t>(*v) < 0) {
    throw Error(ErrorCode::ParseError, "attribute '" + name + "' must be a non-negative integer");
  }
  return static_cast<std::uint64_t>(std::get<std::int64_t>(*v));
}

}  // namespace

std::string export_store(const Store& store, Format format) {
  if (format != Format::sql && format != Format::xml) {
    throw Error(ErrorCode::UnsupportedFormat,
                std::string(to_string(format)) + " is not supported for store export");
  }
  require_integrity(store);
  return format == Format::sql ? export_sql(store) : export_xml(store);
}

Store load_xml_export(std::string_view xml) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(xml)};
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed XML: ") + e.what());
  }
  const auto root = tree.get_child_optional("panoptica");
  if (!root) throw Error(ErrorCode::ParseError, "missing <panoptica> root element");

  Vocabulary vocab;
  const pt::ptree& vnode = root->get_child("vocabulary", pt::ptree{});
  vocab.name = xml_attr(vnode, "name");
  vocab.version = static_cast<std::int64_t>(xml_uint(vnode, "version"));
  for (const auto& [tag, cnode] : vnode) {
    if (tag != "class") continue;
    ClassDef cls;
    cls.name = xml_attr(cnode, "name");
    cls.is_intermediate = xml_bool(cnode, "intermediate");
    cls.label_attribute = xml_attr(cnode, "label");
    cls.key_unique = xml_bool(cnode, "key_unique");
    for (const auto& [atag, anode] : cnode) {
      if (atag != "attribute") continue;
      AttributeDef def;
      def.name = xml_attr(anode, "name");
      const std::string kind = xml_attr(anode, "kind");
      auto k = kind_from_string(kind);
      if (!k) throw Error(ErrorCode::ParseError, "unknown attribute kind '" + kind + "'");
      def.kind = *k;
      if (def.is_link()) def.target_class = xml_attr(anode, "target");
      def.required = xml_bool(anode, "required");
      cls.attributes.push_back(std::move(def));
    }
    vocab.classes.push_back(std::move(cls));
  }
  require_valid(vocab);
  auto shared = std::make_shared<const Vocabulary>(std::move(vocab));

  const pt::ptree& onode = root->get_child("objects", pt::ptree{});
  const std::uint64_t next_id = onode.empty() && !onode.get_child_optional("<xmlattr>")
                                    ? 1
                                    : xml_uint(onode, "next_id");
  std::vector<ObjectRecord> records;
  for (const auto& [tag, node] : onode) {
    if (tag != "object") continue;
    ObjectRecord record;
    record.id = ObjectId{xml_uint(node, "id")};
    record.class_name = xml_attr(node, "class");
    const ClassDef& cls = shared->at(record.class_name);
    for (const auto& [vtag, vnode_] : node) {
      if (vtag != "value") continue;
      const std::string name = xml_attr(vnode_, "name");
      const AttributeDef* a = cls.find(name);
      if (!a) {
        throw Error(ErrorCode::UnknownAttribute,
                    "class '" + cls.name + "' has no attribute '" + name + "'");
      }
      auto value = parse_value(a->kind, vnode_.data());
      if (!value) {
        throw Error(ErrorCode::KindMismatch,
                    "'" + vnode_.data() + "' is not a valid " + std::string(to_string(a->kind)));
      }
      record.values.emplace(name, std::move(*value));
    }
    records.push_back(std::move(record));
  }

  Store store = Store::restore(shared, next_id, std::move(records));
  require_integrity(store);
  return store;
}

}  // namespace panoptica
