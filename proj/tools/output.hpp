#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ethlab::cli {

/// 17 significant digits; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double v);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

/// Writes `content` to a sibling temp file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// Small CSV builder. Cells are numbers or plain identifiers, never quoted.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  CsvWriter& cell(double v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(std::size_t v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(long v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(std::string_view v);
  void end_row();

  const std::string& str() const { return text_; }

 private:
  void separator();

  std::size_t columns_;
  std::size_t filled_ = 0;
  std::string text_;
};

}  // namespace ethlab::cli
