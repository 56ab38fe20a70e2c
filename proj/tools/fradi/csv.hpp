#pragma once

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fradi::cli {

/// CSV emitter: header row, then value rows. Floats print as the shortest
/// round-trip decimal by default, or with 17 significant digits when
/// full_precision is set.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header, bool full_precision = false)
      : header_(std::move(header)), full_(full_precision) {}

  std::string fmt(double v) const {
    char buf[40];
    std::to_chars_result r =
        full_ ? std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17)
              : std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
  }
  std::string fmt(int64_t v) const { return std::to_string(v); }
  std::string fmt(int v) const { return std::to_string(v); }
  std::string fmt(const std::string& v) const { return v; }

  template <typename... Ts>
  void row(const Ts&... vals) {
    std::vector<std::string> cells;
    (cells.push_back(fmt(vals)), ...);
    rows_.push_back(std::move(cells));
  }

  std::string str() const {
    std::ostringstream os;
    for (size_t c = 0; c < header_.size(); c++)
      os << header_[c] << (c + 1 < header_.size() ? "," : "");
    os << "\n";
    for (const auto& r : rows_) {
      for (size_t c = 0; c < r.size(); c++) os << r[c] << (c + 1 < r.size() ? "," : "");
      os << "\n";
    }
    return os.str();
  }

  /// Prints to stdout; also writes <dir>/<name>.csv when dir is non-empty.
  void emit(const std::string& dir, const std::string& name) const {
    std::string text = str();
    std::cout << text;
    if (!dir.empty()) {
      std::string path = dir + "/" + name + ".csv";
      std::ofstream os(path);
      if (!os) throw std::runtime_error("cannot write " + path);
      os << text;
    }
  }

 private:
  std::vector<std::string> header_;
  bool full_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace fradi::cli
