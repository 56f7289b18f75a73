#include <sstream>

#include "panoptica/sql.hpp"
#include "panoptica/vocabulary.hpp"

namespace panoptica {

namespace sql {

std::string quote_identifier(std::string_view name) {
  std::string out = "\"";
  for (char c : name) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string quote_literal(std::string_view text) {
  std::string out = "'";
  for (char c : text) {
    if (c == '\'') out.push_back('\'');
    out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

std::string column_name(const AttributeDef& attr) {
  return attr.is_link() ? attr.name + "_ref" : attr.name;
}

std::string_view column_type(Kind kind) {
  switch (kind) {
    case Kind::text: return "VARCHAR";
    case Kind::integer: return "BIGINT";
    case Kind::decimal: return "DECIMAL(18,6)";
    case Kind::date: return "DATE";
    case Kind::boolean: return "BOOLEAN";
    case Kind::link: return "BIGINT";
  }
  return "VARCHAR";
}

std::string literal(const Value& value) {
  switch (kind_of(value)) {
    case Kind::text: return quote_literal(std::get<std::string>(value));
    case Kind::date: return quote_literal(std::get<Date>(value).iso());
    case Kind::boolean: return std::get<bool>(value) ? "TRUE" : "FALSE";
    default: return render(value);
  }
}

}  // namespace sql

std::string compile_ddl(const Vocabulary& vocab) {
  require_valid(vocab);
  using sql::quote_identifier;

  std::ostringstream out;
  out << "-- DDL for vocabulary " << quote_identifier(vocab.name) << " version "
      << vocab.version << "\n";

  for (const auto& cls : vocab.classes) {
    out << "\nCREATE TABLE " << quote_identifier(cls.name) << " (\n";
    out << "  \"id\" BIGINT NOT NULL PRIMARY KEY";
    for (const auto& attr : cls.attributes) {
      out << ",\n  " << quote_identifier(sql::column_name(attr)) << ' '
          << sql::column_type(attr.kind);
      if (attr.required) out << " NOT NULL";
      if (attr.is_link()) {
        out << " REFERENCES " << quote_identifier(attr.target_class)
            << "(\"id\") DEFERRABLE INITIALLY DEFERRED";
      }
    }
    if (cls.is_intermediate && cls.key_unique) {
      out << ",\n  UNIQUE (";
      bool first = true;
      for (const AttributeDef* link : cls.links()) {
        if (!first) out << ", ";
        first = false;
        out << quote_identifier(sql::column_name(*link));
      }
      out << ')';
    }
    out << "\n);\n";
  }

  for (const auto& cls : vocab.classes) {
    for (const AttributeDef* link : cls.links()) {
      const std::string column = sql::column_name(*link);
      out << "\nCREATE INDEX " << quote_identifier(cls.name + "_" + column + "_idx") << " ON "
          << quote_identifier(cls.name) << " (" << quote_identifier(column) << ");\n";
    }
  }
  return out.str();
}

}  // namespace panoptica
