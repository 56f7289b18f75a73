#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

namespace panoptica {

using Json = nlohmann::ordered_json;

enum class Kind { text, integer, decimal, date, boolean, link };

std::string_view to_string(Kind kind);
std::optional<Kind> kind_from_string(std::string_view name);

/// Store-wide object identity. Allocated in strictly increasing order and
/// never reused.
struct ObjectId {
  std::uint64_t value = 0;

  friend auto operator<=>(const ObjectId&, const ObjectId&) = default;
};

/// ISO-8601 calendar date (proleptic Gregorian).
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  static std::optional<Date> parse(std::string_view iso);
  std::string iso() const;

  friend auto operator<=>(const Date&, const Date&) = default;
};

/// One attribute value. The alternative held always corresponds to exactly
/// one Kind: string=text, int64=integer, double=decimal, Date=date,
/// bool=boolean, ObjectId=link.
using Value = std::variant<std::string, std::int64_t, double, Date, bool, ObjectId>;

Kind kind_of(const Value& value);

/// Parses `text` as a value of `kind`. Link values parse as integer ids.
/// Returns nullopt when the text is not a valid literal of that kind.
std::optional<Value> parse_value(Kind kind, std::string_view text);

/// Canonical text form. Links render as their integer id; callers that want
/// the target label resolve it themselves.
std::string render(const Value& value);

Json to_json(const Value& value);
std::optional<Value> value_from_json(Kind kind, const Json& json);

std::string trim(std::string_view text);
std::string ascii_lower(std::string_view text);

}  // namespace panoptica
