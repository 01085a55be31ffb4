#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cml {

/// CSV assembly with locale-independent formatting: '.' decimal separator,
/// shortest round-trip doubles, '\n' terminated rows, header row first.
class CsvBuilder {
 public:
  explicit CsvBuilder(const std::vector<std::string>& header);

  CsvBuilder& cell(double v);
  CsvBuilder& cell(std::int64_t v);
  CsvBuilder& cell(std::uint64_t v);
  CsvBuilder& cell(int v) { return cell(static_cast<std::int64_t>(v)); }
  CsvBuilder& cell(const std::string& v);
  void end_row();

  const std::string& str() const;

 private:
  void sep();
  std::string out_;
  std::size_t columns_ = 0;
  std::size_t in_row_ = 0;
};

/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

}  // namespace cml
