#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace llhmm {

/// General-format rendering with 17 significant digits and '.' as decimal
/// separator, independent of the global locale.
std::string format_number(double v);

/// CSV emitter: '#'-prefixed metadata lines, then a header, then numeric rows,
/// with '\n' line endings. Output depends only on the values written.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void meta(std::string_view key, std::string_view value);
  void meta(const std::vector<std::pair<std::string, std::string>>& entries);
  void comment(std::string_view text);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);

 private:
  std::ostream& out_;
  std::size_t width_ = 0;
};

}  // namespace llhmm
