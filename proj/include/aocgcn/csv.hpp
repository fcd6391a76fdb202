#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace aocgcn::csv {

struct Row {
  std::size_t line = 0;  // 1-based line number of the row's first line
  std::vector<std::string> fields;
};

// Comma-separated with double-quoted fields and doubled embedded quotes.
// Throws Error(MissingFile) when the file does not exist and
// Error(MalformedRow) on an unterminated quote.
std::vector<Row> read_file(const std::filesystem::path& path);
std::vector<Row> parse(const std::string& text, const std::string& source = "<memory>");

std::string escape(const std::string& field);
std::string format_row(const std::vector<std::string>& fields);

void write_file(const std::filesystem::path& path, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace aocgcn::csv
