#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "cqs/field.hpp"

namespace cqs::csvio {

/// Shortest round-trip decimal form of a double (stable across identical
/// runs on one platform).
std::string format_double(double x);

class Writer {
 public:
  Writer(const std::filesystem::path& path, std::span<const std::string> columns);
  void row(std::span<const double> values);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

/// Field dump: columns t, re, im, abs2.
void write_field_csv(const std::filesystem::path& path, const ComplexField& field);

}  // namespace cqs::csvio
