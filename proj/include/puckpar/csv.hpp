#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace puckpar::csv {

// A parsed CSV file: header plus data rows. Each row remembers its 1-based
// line number in the source for error messages.
struct Table {
  std::vector<std::string> header;
  struct Row {
    std::size_t line = 0;
    std::vector<std::string> fields;
  };
  std::vector<Row> rows;
};

// Reads a comma-separated file with a mandatory header line. Supports
// double-quoted fields with "" escapes; strips a UTF-8 BOM and trailing \r.
// Throws NotFoundError / ParseError.
Table read_file(const std::filesystem::path& path);
Table parse(std::string_view text, std::string_view source_name);

// Position of each requested column in the header. Extra columns are
// allowed; a missing one throws SchemaError naming it.
std::vector<std::size_t> column_indices(const Table& table, const std::vector<std::string_view>& columns,
                                        std::string_view source_name);

// Quotes a field when it contains a comma, quote or newline.
std::string escape(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace puckpar::csv
