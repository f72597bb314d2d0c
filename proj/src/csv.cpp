#include "puckpar/csv.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "puckpar/error.hpp"

namespace puckpar::csv {

Table read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

Table parse(std::string_view text, std::string_view source_name) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::vector<Table::Row> records;
  Table::Row current;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  current.line = 1;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    // Blank lines are skipped.
    if (!(current.fields.size() == 1 && current.fields[0].empty())) records.push_back(std::move(current));
    current = Table::Row{};
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started) {
          throw ParseError(fmt::format("{}:{}: stray quote inside unquoted field", source_name, line));
        }
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        ++line;
        current.line = line;
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (in_quotes) throw ParseError(fmt::format("{}: unterminated quoted field", source_name));
  if (field_started || !field.empty() || !current.fields.empty()) end_record();

  if (records.empty()) throw ParseError(fmt::format("{}: missing header line", source_name));

  Table table;
  table.header = std::move(records.front().fields);
  for (auto& h : table.header) {
    while (!h.empty() && (h.back() == ' ' || h.back() == '\t')) h.pop_back();
    while (!h.empty() && (h.front() == ' ' || h.front() == '\t')) h.erase(h.begin());
  }
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].fields.size() != table.header.size()) {
      throw ParseError(fmt::format("{}:{}: expected {} fields, found {}", source_name, records[r].line,
                                   table.header.size(), records[r].fields.size()));
    }
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

std::vector<std::size_t> column_indices(const Table& table, const std::vector<std::string_view>& columns,
                                        std::string_view source_name) {
  std::vector<std::size_t> out;
  out.reserve(columns.size());
  for (auto name : columns) {
    std::size_t found = table.header.size();
    for (std::size_t i = 0; i < table.header.size(); ++i) {
      if (table.header[i] == name) {
        found = i;
        break;
      }
    }
    if (found == table.header.size()) {
      throw SchemaError(fmt::format("{}: missing column '{}'", source_name, name));
    }
    out.push_back(found);
  }
  return out;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

}  // namespace puckpar::csv
