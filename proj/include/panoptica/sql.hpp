#pragma once

#include <string>
#include <string_view>

#include "panoptica/vocabulary.hpp"

namespace panoptica::sql {

/// Double-quoted identifier; embedded quotes are doubled.
std::string quote_identifier(std::string_view name);

/// Single-quoted string literal; embedded quotes are doubled.
std::string quote_literal(std::string_view text);

/// Column that stores `attr`: the attribute name, or `<name>_ref` for links.
std::string column_name(const AttributeDef& attr);

std::string_view column_type(Kind kind);

/// SQL literal for a stored value (links become their integer id).
std::string literal(const Value& value);

}  // namespace panoptica::sql
