#include "llhmm/csv.hpp"

#include "llhmm/error.hpp"

#include <array>
#include <charconv>

namespace llhmm {

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 17);
  return {buf.data(), res.ptr};
}

void CsvWriter::meta(std::string_view key, std::string_view value) {
  out_ << "# " << key << " = " << value << '\n';
}

void CsvWriter::meta(const std::vector<std::pair<std::string, std::string>>& entries) {
  for (const auto& [k, v] : entries) meta(k, v);
}

void CsvWriter::comment(std::string_view text) { out_ << "# " << text << '\n'; }

void CsvWriter::header(const std::vector<std::string>& columns) {
  width_ = columns.size();
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (width_ != 0 && values.size() != width_) throw_parameter("csv row width does not match header");
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_number(values[i]);
  out_ << '\n';
}

}  // namespace llhmm
