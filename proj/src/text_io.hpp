#pragma once

// Line-oriented TSV reading shared by the loaders.

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "spmf/errors.hpp"

namespace spmf::detail {

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

/// Calls fn(fields, line_number) for every non-blank, non-comment line.
/// Each line must hold exactly `arity` non-empty tab-separated fields.
template <typename Fn>
void for_each_record(const std::filesystem::path& path, std::size_t arity, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (view.find_first_not_of(" \t") == std::string_view::npos || view.front() == '#') continue;
    auto fields = split_tabs(view);
    if (fields.size() != arity) {
      throw DataError("expected " + std::to_string(arity) + " tab-separated fields, got " +
                          std::to_string(fields.size()) + " in " + path.string(),
                      lineno);
    }
    for (auto f : fields) {
      if (f.empty()) throw DataError("empty field in " + path.string(), lineno);
    }
    fn(fields, lineno);
  }
  if (in.bad()) throw IoError("read failure on " + path.string());
}

inline double parse_real(std::string_view text, std::size_t lineno) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DataError("not a number: '" + std::string(text) + "'", lineno);
  }
  return value;
}

}  // namespace spmf::detail
