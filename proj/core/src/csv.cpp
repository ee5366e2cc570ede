#include "cqs/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

namespace cqs::csvio {

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  if (res.ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf, res.ptr);
}

Writer::Writer(const std::filesystem::path& path, std::span<const std::string> columns)
    : path_(path), columns_(columns.size()) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path);
  if (!out_) throw std::runtime_error("cannot open output file: " + path.string());
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
  }
}

void Writer::row(std::span<const double> values) {
  if (values.size() != columns_) {
    throw std::invalid_argument("csv row width does not match the header");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    out_ << format_double(values[i]) << (i + 1 < values.size() ? "," : "\n");
  }
}

void write_field_csv(const std::filesystem::path& path, const ComplexField& field) {
  const std::vector<std::string> cols{"t", "re", "im", "abs2"};
  Writer w(path, cols);
  for (std::size_t j = 0; j < field.size(); ++j) {
    const auto v = field[j];
    const double row[4] = {field.grid()->t(j), v.real(), v.imag(), std::norm(v)};
    w.row(row);
  }
}

}  // namespace cqs::csvio
