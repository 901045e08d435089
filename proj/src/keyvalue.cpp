#include "gsdde/keyvalue.hpp"

#include <fstream>
#include <sstream>

#include "gsdde/error.hpp"

namespace gsdde {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

KeyValueFile KeyValueFile::parse(std::string_view text, std::string source) {
  KeyValueFile file;
  file.source_ = std::move(source);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, end == std::string_view::npos ? std::string_view::npos
                                                       : end - pos);
    ++line_no;
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(Errc::ConfigError, file.source_ + ":" + std::to_string(line_no) +
                                         ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) {
      throw Error(Errc::ConfigError,
                  file.source_ + ":" + std::to_string(line_no) + ": empty key");
    }
    if (auto it = file.entries_.find(key); it != file.entries_.end()) {
      throw Error(Errc::ConfigError,
                  file.source_ + ":" + std::to_string(line_no) + ": duplicate key '" +
                      key + "' (first set on line " +
                      std::to_string(it->second.line) + ")");
    }
    file.entries_.emplace(key, Entry{value, line_no});
  }
  return file;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::ConfigError, "cannot open config file " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

const KeyValueFile::Entry* KeyValueFile::find(std::string_view key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string KeyValueFile::where(std::string_view key) const {
  const Entry* e = find(key);
  return e ? source_ + ":" + std::to_string(e->line) : source_;
}

}  // namespace gsdde
