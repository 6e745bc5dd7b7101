#include "manifest.hpp"

#include "mldnn/csv.hpp"
#include "mldnn/error.hpp"

namespace mldnn::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

KeyValueFile KeyValueFile::parse(const std::string& text) {
  KeyValueFile f;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    const std::string line = trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ParseError("line " + std::to_string(line_no) + ": expected key=value");
    f.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return f;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) { return parse(read_file(path)); }

void KeyValueFile::set(std::string key, std::string value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(std::move(key), std::move(value));
}

const std::string* KeyValueFile::find(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return &v;
  return nullptr;
}

std::string KeyValueFile::render(const std::string& comment) const {
  std::string out;
  if (!comment.empty()) out += "# " + comment + "\n";
  for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
  return out;
}

}  // namespace mldnn::cli
