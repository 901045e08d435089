#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace gsdde {

/// Flat `key = value` text: one pair per line, `#` starts a comment, blank
/// lines ignored. Duplicate keys and lines without '=' are ConfigError.
class KeyValueFile {
 public:
  struct Entry {
    std::string value;
    std::size_t line = 0;
  };

  static KeyValueFile parse(std::string_view text, std::string source = "<string>");
  static KeyValueFile load(const std::filesystem::path& path);

  const Entry* find(std::string_view key) const;
  const std::map<std::string, Entry, std::less<>>& entries() const noexcept {
    return entries_;
  }
  const std::string& source() const noexcept { return source_; }

  /// "source:line" for error messages.
  std::string where(std::string_view key) const;

 private:
  std::string source_;
  std::map<std::string, Entry, std::less<>> entries_;
};

}  // namespace gsdde
