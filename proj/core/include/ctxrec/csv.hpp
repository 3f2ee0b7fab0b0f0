#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace ctxrec {

/// Shortest decimal that round-trips the double ("nan"/"inf" spelled out).
std::string format_number(double x);

/// Quotes a field when it contains a comma, quote, CR or LF.
std::string csv_escape(std::string_view field);

/// RFC 4180 writer: CRLF record separators, header first.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  void row(const std::vector<std::string>& fields);
  void close();

 private:
  std::ofstream out_;
  std::filesystem::path path_;
  std::size_t columns_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws DataError if missing.
  std::size_t column(std::string_view name) const;
};

/// Strict RFC 4180 reader. Throws DataError on a bare quote inside an
/// unquoted field, text after a closing quote, an unterminated quote, or a
/// record whose field count differs from the header.
CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace ctxrec
