#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace memoryflow {

// shortest round-trip decimal form, locale independent
std::string format_g17(double v);

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  void close();

 private:
  std::ofstream out_;
  std::size_t columns_;
  std::string path_;
};

std::uint64_t fnv1a(const void* data, std::size_t n);
std::uint64_t fnv1a_file(const std::string& path);

}  // namespace memoryflow
