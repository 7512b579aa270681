#pragma once

// CSV/JSON output with fixed, locale-independent float formatting and
// atomic file replacement.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <system_error>

#include "json.hpp"

#include "tpssv/errors.hpp"

namespace tpssv::io {

/// 17 significant digits, '.' separator, no locale.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

/// Rows are appended as text; cells are joined with ','.
class CsvBuilder {
public:
  explicit CsvBuilder(std::initializer_list<const char *> header) {
    bool first = true;
    for (const char *h : header) {
      if (!first)
        out_ << ',';
      out_ << h;
      first = false;
    }
    out_ << '\n';
  }

  template <class... Cells> void row(const Cells &...cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << '\n';
  }

  std::string str() const { return out_.str(); }

private:
  static std::string cell(double v) { return format_double(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(const std::string &v) { return v; }

  std::ostringstream out_;
};

/// Writes to a sibling temporary file, then renames it over `path`.
inline void write_atomic(const std::filesystem::path &path, const std::string &content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f)
      throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f)
      throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

/// JSON text with a trailing newline.
inline std::string dump(const nlohmann::json &j) { return j.dump(2) + "\n"; }

} // namespace tpssv::io
