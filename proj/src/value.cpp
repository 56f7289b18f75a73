#include "panoptica/value.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace panoptica {

namespace {

bool is_leap(int year) {
  return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
  static constexpr std::array<int, 12> kDays = {31, 28, 31, 30, 31, 30,
                                                31, 31, 30, 31, 30, 31};
  if (month == 2 && is_leap(year)) return 29;
  return kDays[static_cast<std::size_t>(month - 1)];
}

template <typename T>
std::optional<T> parse_number(std::string_view text) {
  T out{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last || first == last) return std::nullopt;
  return out;
}

}  // namespace

std::string_view to_string(Kind kind) {
  switch (kind) {
    case Kind::text: return "text";
    case Kind::integer: return "integer";
    case Kind::decimal: return "decimal";
    case Kind::date: return "date";
    case Kind::boolean: return "boolean";
    case Kind::link: return "link";
  }
  return "text";
}

std::optional<Kind> kind_from_string(std::string_view name) {
  for (Kind k : {Kind::text, Kind::integer, Kind::decimal, Kind::date,
                 Kind::boolean, Kind::link}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::optional<Date> Date::parse(std::string_view iso) {
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') return std::nullopt;
  auto y = parse_number<int>(iso.substr(0, 4));
  auto m = parse_number<int>(iso.substr(5, 2));
  auto d = parse_number<int>(iso.substr(8, 2));
  if (!y || !m || !d) return std::nullopt;
  if (iso[0] == '+' || iso[5] == '+' || iso[8] == '+') return std::nullopt;
  if (*m < 1 || *m > 12) return std::nullopt;
  if (*d < 1 || *d > days_in_month(*y, *m)) return std::nullopt;
  return Date{*y, *m, *d};
}

std::string Date::iso() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
  return buf;
}

Kind kind_of(const Value& value) {
  switch (value.index()) {
    case 0: return Kind::text;
    case 1: return Kind::integer;
    case 2: return Kind::decimal;
    case 3: return Kind::date;
    case 4: return Kind::boolean;
    default: return Kind::link;
  }
}

std::optional<Value> parse_value(Kind kind, std::string_view text) {
  switch (kind) {
    case Kind::text:
      return Value{std::string(text)};
    case Kind::integer:
      if (auto v = parse_number<std::int64_t>(text)) return Value{*v};
      return std::nullopt;
    case Kind::decimal:
      if (auto v = parse_number<double>(text); v && std::isfinite(*v)) return Value{*v};
      return std::nullopt;
    case Kind::date:
      if (auto d = Date::parse(text)) return Value{*d};
      return std::nullopt;
    case Kind::boolean: {
      const std::string lower = ascii_lower(text);
      if (lower == "true" || lower == "1") return Value{true};
      if (lower == "false" || lower == "0") return Value{false};
      return std::nullopt;
    }
    case Kind::link:
      if (auto v = parse_number<std::uint64_t>(text); v && *v > 0) {
        return Value{ObjectId{*v}};
      }
      return std::nullopt;
  }
  return std::nullopt;
}

std::string render(const Value& value) {
  struct Visitor {
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const {
      char buf[64];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, d);
      return std::string(buf, ptr);
    }
    std::string operator()(const Date& d) const { return d.iso(); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(ObjectId id) const { return std::to_string(id.value); }
  };
  return std::visit(Visitor{}, value);
}

Json to_json(const Value& value) {
  struct Visitor {
    Json operator()(const std::string& s) const { return s; }
    Json operator()(std::int64_t i) const { return i; }
    Json operator()(double d) const { return d; }
    Json operator()(const Date& d) const { return d.iso(); }
    Json operator()(bool b) const { return b; }
    Json operator()(ObjectId id) const { return id.value; }
  };
  return std::visit(Visitor{}, value);
}

std::optional<Value> value_from_json(Kind kind, const Json& json) {
  switch (kind) {
    case Kind::text:
      if (json.is_string()) return Value{json.get<std::string>()};
      return std::nullopt;
    case Kind::integer:
      if (json.is_number_integer()) return Value{json.get<std::int64_t>()};
      return std::nullopt;
    case Kind::decimal:
      if (json.is_number()) return Value{json.get<double>()};
      return std::nullopt;
    case Kind::date:
      if (json.is_string()) {
        if (auto d = Date::parse(json.get_ref<const std::string&>())) return Value{*d};
      }
      return std::nullopt;
    case Kind::boolean:
      if (json.is_boolean()) return Value{json.get<bool>()};
      return std::nullopt;
    case Kind::link:
      if (json.is_number_unsigned() && json.get<std::uint64_t>() > 0) {
        return Value{ObjectId{json.get<std::uint64_t>()}};
      }
      if (json.is_number_integer() && json.get<std::int64_t>() > 0) {
        return Value{ObjectId{static_cast<std::uint64_t>(json.get<std::int64_t>())}};
      }
      return std::nullopt;
  }
  return std::nullopt;
}

std::string trim(std::string_view text) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  const auto first = text.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(kSpace);
  return std::string(text.substr(first, last - first + 1));
}

std::string ascii_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace panoptica
