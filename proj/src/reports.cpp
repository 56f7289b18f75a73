#include "panoptica/reports.hpp"

#include <sstream>

#include "markup.hpp"
#include "panoptica/delimited.hpp"

namespace panoptica {

namespace {

using markup::attr;
using markup::escape;

Error unsupported(Format format, std::string_view what) {
  return Error(ErrorCode::UnsupportedFormat,
               std::string(to_string(format)) + " is not supported for " + std::string(what));
}

ViewModel context_view(const Store& store, ObjectId id) {
  store.get(id);
  Session session;
  session.focus = id;
  return build_view(store, session);
}

std::string ref(ObjectId id) { return "#" + std::to_string(id.value); }

std::string object_report_html(const ViewModel& view) {
  std::ostringstream out;
  const LinkTarget& focus = *view.focus;
  out << "<!DOCTYPE html>\n<html>\n<head><meta charset=\"utf-8\"><title>" << escape(focus.label)
      << "</title></head>\n<body>\n";
  out << "<h1 id=\"obj-" << focus.id.value << "\">" << escape(focus.label) << "</h1>\n";
  out << "<p class=\"class\">" << escape(focus.class_name) << " " << ref(focus.id) << "</p>\n";
  out << "<table class=\"attributes\">\n";
  for (const auto& a : view.d3_attributes) {
    out << "<tr><th>" << escape(a.attribute) << "</th><td>";
    if (a.target) {
      out << "<a href=\"#obj-" << a.target->id.value << "\"><u>" << escape(a.rendered)
          << "</u></a>";
    } else {
      out << escape(a.rendered);
    }
    out << "</td></tr>\n";
  }
  out << "</table>\n";
  for (std::size_t g = 0; g < view.d4_context.size(); ++g) {
    const auto& group = view.d4_context[g];
    const auto& attrs = view.d5_group_attributes[g];
    out << "<section class=\"context\"" << attr("data-class", group.class_name)
        << attr("data-attribute", group.attribute) << ">\n";
    out << "<h2>" << escape(group.class_name) << " (" << escape(group.attribute) << ")</h2>\n";
    out << "<table>\n<tr><th>object</th>";
    for (const auto& c : attrs.columns) out << "<th>" << escape(c) << "</th>";
    out << "</tr>\n";
    for (std::size_t m = 0; m < group.members.size(); ++m) {
      out << "<tr><td><a href=\"#obj-" << group.members[m].id.value << "\"><u>"
          << escape(group.members[m].label) << "</u></a></td>";
      for (const auto& v : attrs.rows[m].values) out << "<td>" << escape(v) << "</td>";
      out << "</tr>\n";
    }
    out << "</table>\n</section>\n";
  }
  out << "</body>\n</html>\n";
  return out.str();
}

std::string object_report_xml(const ViewModel& view) {
  std::ostringstream out;
  const LinkTarget& focus = *view.focus;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<report kind=\"object\">\n";
  out << "  <object" << attr("id", std::to_string(focus.id.value)) << attr("class", focus.class_name)
      << attr("label", focus.label) << ">\n";
  for (const auto& a : view.d3_attributes) {
    out << "    <value" << attr("name", a.attribute) << attr("kind", to_string(a.kind));
    if (a.target) {
      out << attr("target", std::to_string(a.target->id.value))
          << attr("target_class", a.target->class_name);
    }
    out << ">" << escape(a.rendered) << "</value>\n";
  }
  out << "  </object>\n";
  if (view.d4_context.empty()) {
    out << "  <context/>\n";
  } else {
    out << "  <context>\n";
    for (std::size_t g = 0; g < view.d4_context.size(); ++g) {
      const auto& group = view.d4_context[g];
      const auto& attrs = view.d5_group_attributes[g];
      out << "    <group" << attr("class", group.class_name) << attr("attribute", group.attribute)
          << ">\n";
      for (std::size_t m = 0; m < group.members.size(); ++m) {
        out << "      <object" << attr("id", std::to_string(group.members[m].id.value))
            << attr("class", group.class_name) << attr("label", group.members[m].label) << ">\n";
        for (std::size_t c = 0; c < attrs.columns.size(); ++c) {
          out << "        <value" << attr("name", attrs.columns[c]) << ">"
              << escape(attrs.rows[m].values[c]) << "</value>\n";
        }
        out << "      </object>\n";
      }
      out << "    </group>\n";
    }
    out << "  </context>\n";
  }
  out << "</report>\n";
  return out.str();
}

}  // namespace

std::string_view to_string(Format format) {
  switch (format) {
    case Format::txt: return "txt";
    case Format::csv: return "csv";
    case Format::html: return "html";
    case Format::xml: return "xml";
    case Format::sql: return "sql";
  }
  return "txt";
}

std::optional<Format> format_from_string(std::string_view name) {
  for (Format f : {Format::txt, Format::csv, Format::html, Format::xml, Format::sql}) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

std::string render_view_text(const ViewModel& view) {
  if (!view.focus) return {};
  std::ostringstream out;
  const LinkTarget& focus = *view.focus;
  out << focus.label << " [" << focus.class_name << " " << ref(focus.id) << "]\n";
  for (const auto& a : view.d3_attributes) {
    out << "  " << a.attribute << ":";
    if (a.target) {
      out << " -> " << a.rendered << " [" << ref(a.target->id) << "]";
    } else if (!a.rendered.empty()) {
      out << " " << a.rendered;
    }
    out << "\n";
  }
  for (std::size_t g = 0; g < view.d4_context.size(); ++g) {
    const auto& group = view.d4_context[g];
    const auto& attrs = view.d5_group_attributes[g];
    out << "\n" << group.class_name << " (via " << group.attribute << ")\n";
    for (std::size_t m = 0; m < group.members.size(); ++m) {
      out << "  " << group.members[m].label << " [" << ref(group.members[m].id) << "]";
      std::string details;
      for (std::size_t c = 0; c < attrs.columns.size(); ++c) {
        const std::string& v = attrs.rows[m].values[c];
        if (v.empty()) continue;
        if (!details.empty()) details += "; ";
        details += attrs.columns[c] + "=" + v;
      }
      if (!details.empty()) out << "  " << details;
      out << "\n";
    }
  }
  return out.str();
}

std::string object_report(const Store& store, ObjectId id, Format format) {
  if (format != Format::txt && format != Format::html && format != Format::xml) {
    throw unsupported(format, "object reports");
  }
  const ViewModel view = context_view(store, id);
  switch (format) {
    case Format::html: return object_report_html(view);
    case Format::xml: return object_report_xml(view);
    default: return render_view_text(view);
  }
}

std::string list_report(const Store& store, std::string_view class_name, const Filter& filter,
                        std::span<const std::string> columns, Format format) {
  if (format == Format::sql) throw unsupported(format, "list reports");
  const ClassDef& cls = store.vocabulary().at(class_name);
  Filter effective = filter;
  if (effective.class_name.empty()) effective.class_name = cls.name;
  if (effective.class_name != cls.name) {
    throw Error(ErrorCode::ClassMismatch,
                "filter is for '" + effective.class_name + "', report is for '" + cls.name + "'");
  }
  check_filter(store.vocabulary(), effective);

  std::vector<const AttributeDef*> cols;
  if (columns.empty()) {
    for (const auto& a : cls.attributes) cols.push_back(&a);
  }
  for (const auto& name : columns) {
    const AttributeDef* a = cls.find(name);
    if (!a) {
      throw Error(ErrorCode::UnknownAttribute,
                  "class '" + cls.name + "' has no attribute '" + name + "'");
    }
    cols.push_back(a);
  }

  Row header;
  for (const AttributeDef* a : cols) header.push_back(a->name);
  std::vector<std::pair<ObjectId, Row>> rows;
  for (ObjectId id : store.objects_of(cls.name)) {
    const ObjectRecord& record = store.get(id);
    if (!matches(effective, record)) continue;
    Row row;
    for (const AttributeDef* a : cols) {
      const Value* v = record.get(a->name);
      if (!v) {
        row.emplace_back();
      } else if (a->is_link()) {
        row.push_back(store.label(std::get<ObjectId>(*v)));
      } else {
        row.push_back(render(*v));
      }
    }
    rows.emplace_back(id, std::move(row));
  }

  std::ostringstream out;
  switch (format) {
    case Format::csv:
      out << format_delimited_row(header);
      for (const auto& [id, row] : rows) out << format_delimited_row(row);
      break;
    case Format::txt:
      out << cls.name << "\n";
      out << format_delimited_row(header, '\t');
      for (const auto& [id, row] : rows) out << format_delimited_row(row, '\t');
      break;
    case Format::html:
      out << "<!DOCTYPE html>\n<html>\n<head><meta charset=\"utf-8\"><title>" << escape(cls.name)
          << "</title></head>\n<body>\n<h1>" << escape(cls.name) << "</h1>\n<table>\n<tr>";
      for (const auto& h : header) out << "<th>" << escape(h) << "</th>";
      out << "</tr>\n";
      for (const auto& [id, row] : rows) {
        out << "<tr" << attr("data-id", std::to_string(id.value)) << ">";
        for (const auto& v : row) out << "<td>" << escape(v) << "</td>";
        out << "</tr>\n";
      }
      out << "</table>\n</body>\n</html>\n";
      break;
    case Format::xml:
      out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
      out << "<report kind=\"list\"" << attr("class", cls.name) << ">\n";
      for (const auto& [id, row] : rows) {
        out << "  <object" << attr("id", std::to_string(id.value))
            << attr("label", store.label(id)) << ">\n";
        for (std::size_t c = 0; c < header.size(); ++c) {
          out << "    <value" << attr("name", header[c]) << ">" << escape(row[c]) << "</value>\n";
        }
        out << "  </object>\n";
      }
      out << "</report>\n";
      break;
    case Format::sql:
      break;
  }
  return out.str();
}

}  // namespace panoptica
