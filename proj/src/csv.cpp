#include "aocgcn/csv.hpp"

#include "aocgcn/common.hpp"

#include <fstream>
#include <sstream>

namespace aocgcn::csv {

std::string read_text(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::MissingFile, path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed " + path.string());
}

std::vector<Row> parse(const std::string& text, const std::string& source) {
  std::vector<Row> rows;
  std::size_t i = 0;
  std::size_t line = 1;
  std::size_t start = 0;
  if (text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) start = 3;
  i = start;
  while (i < text.size()) {
    Row row;
    row.line = line;
    std::string field;
    bool quoted = false;
    bool field_started_quoted = false;
    for (;;) {
      if (i >= text.size()) {
        if (quoted) {
          throw Error(ErrorCode::MalformedRow,
                      source + " line " + std::to_string(row.line) + ": unterminated quote");
        }
        row.fields.push_back(std::move(field));
        break;
      }
      const char c = text[i];
      if (quoted) {
        if (c == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            field.push_back('"');
            i += 2;
          } else {
            quoted = false;
            ++i;
          }
        } else {
          if (c == '\n') ++line;
          field.push_back(c);
          ++i;
        }
        continue;
      }
      if (c == '"' && field.empty() && !field_started_quoted) {
        quoted = true;
        field_started_quoted = true;
        ++i;
      } else if (c == ',') {
        row.fields.push_back(std::move(field));
        field.clear();
        field_started_quoted = false;
        ++i;
      } else if (c == '\r' || c == '\n') {
        row.fields.push_back(std::move(field));
        if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
        ++i;
        ++line;
        break;
      } else {
        field.push_back(c);
        ++i;
      }
    }
    // blank lines carry no record
    if (!(row.fields.size() == 1 && row.fields[0].empty())) rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Row> read_file(const std::filesystem::path& path) {
  return parse(read_text(path), path.filename().string());
}

std::string escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += escape(fields[i]);
  }
  out.push_back('\n');
  return out;
}

void write_file(const std::filesystem::path& path, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows) {
  std::string text = format_row(header);
  for (const auto& r : rows) text += format_row(r);
  write_text(path, text);
}

}  // namespace aocgcn::csv
