#include "panoptica/delimited.hpp"

#include <algorithm>

#include "panoptica/error.hpp"
#include "panoptica/value.hpp"

namespace panoptica {

std::vector<Row> parse_delimited(std::string_view source, char delimiter) {
  std::vector<Row> rows;
  Row row;
  std::string field;
  bool quoted = false;
  bool field_started = false;  // distinguishes `""` from an absent field
  bool row_has_content = false;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    const bool blank = !row_has_content && row.size() == 1 && row.front().empty();
    if (!blank) rows.push_back(std::move(row));
    row.clear();
    row_has_content = false;
  };

  for (std::size_t i = 0; i < source.size(); ++i) {
    const char c = source[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < source.size() && source[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started && field.empty()) {
      quoted = true;
      field_started = true;
      row_has_content = true;
    } else if (c == delimiter) {
      end_field();
      row_has_content = true;
    } else if (c == '\r' && i + 1 < source.size() && source[i + 1] == '\n') {
      // handled by the following '\n'
    } else if (c == '\n') {
      end_row();
    } else {
      field.push_back(c);
      field_started = true;
      row_has_content = true;
    }
  }
  if (quoted) throw Error(ErrorCode::ParseError, "unterminated quoted field");
  if (row_has_content || !field.empty() || !row.empty()) end_row();
  return rows;
}

Table read_delimited(std::string_view source) {
  if (trim(source).empty()) throw Error(ErrorCode::EmptySource, "source is empty");
  // Strip a UTF-8 byte order mark.
  if (source.size() >= 3 && source.substr(0, 3) == "\xEF\xBB\xBF") source.remove_prefix(3);

  struct Candidate {
    char delimiter;
    std::vector<Row> rows;
    std::size_t agreeing = 0;
  };
  std::vector<Candidate> candidates;
  std::optional<Error> first_error;
  for (char d : {',', ';', '\t'}) {
    try {
      Candidate c{d, parse_delimited(source, d)};
      if (c.rows.empty()) continue;
      const std::size_t width = c.rows.front().size();
      c.agreeing = static_cast<std::size_t>(
          std::count_if(c.rows.begin(), c.rows.end(), [&](const Row& r) { return r.size() == width; }));
      candidates.push_back(std::move(c));
    } catch (const Error& e) {
      if (!first_error) first_error = e;
    }
  }
  if (candidates.empty()) {
    if (first_error) throw *first_error;
    throw Error(ErrorCode::EmptySource, "source has no records");
  }

  auto best = std::max_element(candidates.begin(), candidates.end(),
                               [](const Candidate& a, const Candidate& b) {
                                 const bool a_splits = a.rows.front().size() > 1;
                                 const bool b_splits = b.rows.front().size() > 1;
                                 if (a_splits != b_splits) return b_splits;
                                 if (a.agreeing != b.agreeing) return a.agreeing < b.agreeing;
                                 return a.rows.front().size() < b.rows.front().size();
                               });

  Table table;
  table.delimiter = best->delimiter;
  table.headers = std::move(best->rows.front());
  for (auto& h : table.headers) h = trim(h);
  if (std::all_of(table.headers.begin(), table.headers.end(),
                  [](const std::string& h) { return h.empty(); })) {
    throw Error(ErrorCode::NoHeaderRow, "first record has no column names");
  }
  table.rows.assign(std::make_move_iterator(best->rows.begin() + 1),
                    std::make_move_iterator(best->rows.end()));
  return table;
}

std::string format_delimited_row(const Row& row, char delimiter) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out.push_back(delimiter);
    const std::string& f = row[i];
    const bool needs_quotes = f.find_first_of(std::string{'"', '\n', '\r', delimiter}) !=
                              std::string::npos;
    if (!needs_quotes) {
      out += f;
      continue;
    }
    out.push_back('"');
    for (char c : f) {
      if (c == '"') out.push_back('"');
      out.push_back(c);
    }
    out.push_back('"');
  }
  out.push_back('\n');
  return out;
}

}  // namespace panoptica
