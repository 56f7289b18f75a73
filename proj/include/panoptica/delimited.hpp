#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace panoptica {

using Row = std::vector<std::string>;

/// RFC-4180 style parse: fields may be double-quoted, quotes inside quoted
/// fields are doubled, CRLF and LF both end a record. Blank lines are skipped.
std::vector<Row> parse_delimited(std::string_view source, char delimiter);

/// Header plus data rows of a delimited document.
struct Table {
  char delimiter = ',';
  Row headers;
  std::vector<Row> rows;
};

/// Picks the delimiter among comma, semicolon and tab, preferring one that
/// splits the header, then the most rows agreeing with the header's field
/// count, then the wider header, then that order. Throws EmptySource or
/// NoHeaderRow.
Table read_delimited(std::string_view source);

/// One RFC-4180 record terminated by LF.
std::string format_delimited_row(const Row& row, char delimiter = ',');

}  // namespace panoptica
