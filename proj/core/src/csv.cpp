#include "cml/csv.hpp"

#include <charconv>

#include "cml/errors.hpp"

namespace cml {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

CsvBuilder::CsvBuilder(const std::vector<std::string>& header)
    : columns_(header.size()) {
  if (header.empty()) throw Error("csv needs at least one column");
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out_ += ',';
    out_ += header[i];
  }
  out_ += '\n';
}

void CsvBuilder::sep() {
  if (in_row_) out_ += ',';
  ++in_row_;
}

CsvBuilder& CsvBuilder::cell(double v) {
  sep();
  out_ += format_double(v);
  return *this;
}

CsvBuilder& CsvBuilder::cell(std::int64_t v) {
  sep();
  out_ += std::to_string(v);
  return *this;
}

CsvBuilder& CsvBuilder::cell(std::uint64_t v) {
  sep();
  out_ += std::to_string(v);
  return *this;
}

CsvBuilder& CsvBuilder::cell(const std::string& v) {
  sep();
  out_ += v;
  return *this;
}

void CsvBuilder::end_row() {
  if (in_row_ != columns_)
    throw Error("csv row has wrong number of cells");
  out_ += '\n';
  in_row_ = 0;
}

const std::string& CsvBuilder::str() const { return out_; }

}  // namespace cml
