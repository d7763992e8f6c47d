#pragma once
// CSV emission: header row, floats at 17 significant digits so downstream
// comparisons round-trip exactly.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace itbm {

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    os_.open(p);
    if (!os_) throw std::runtime_error("cannot open for writing: " + path);
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) os_ << ',';
      os_ << header[i];
    }
    os_ << '\n';
  }

  CsvWriter(const std::string& path, std::initializer_list<const char*> header)
      : CsvWriter(path, std::vector<std::string>(header.begin(), header.end())) {}

  void row(std::span<const double> values) {
    char buf[32];
    for (std::size_t i = 0; i < values.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", values[i]);
      if (i) os_ << ',';
      os_ << buf;
    }
    os_ << '\n';
  }

  void row(std::initializer_list<double> values) {
    row(std::span<const double>(values.begin(), values.size()));
  }

 private:
  std::ofstream os_;
};

}  // namespace itbm
