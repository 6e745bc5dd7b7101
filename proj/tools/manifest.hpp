#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace mldnn::cli {

/// Flat key=value text, one entry per line, '#' comments. Order is kept so
/// a written manifest reads back in the same order.
class KeyValueFile {
 public:
  static KeyValueFile parse(const std::string& text);
  static KeyValueFile load(const std::filesystem::path& path);

  void set(std::string key, std::string value);
  const std::string* find(const std::string& key) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }

  std::string render(const std::string& comment = {}) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace mldnn::cli
