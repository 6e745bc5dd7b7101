#include "mldnn/modelspec.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>

namespace mldnn {

std::string_view to_string(Merge m) noexcept {
  switch (m) {
    case Merge::pairs: return "pairs";
    case Merge::all: return "all";
    case Merge::none: break;
  }
  return "none";
}

std::size_t streams_after(const LevelSpec& level) noexcept {
  switch (level.merge) {
    case Merge::pairs: return level.branches / 2;
    case Merge::all: return 1;
    case Merge::none: break;
  }
  return level.branches;
}

std::vector<std::string> validate_spec(const ArchitectureSpec& spec) {
  std::vector<std::string> violations;
  if (spec.input_width == 0) violations.push_back("input width 0 must be positive");
  if (spec.levels.empty()) violations.push_back("at least one level is required");

  std::size_t streams = 1;
  for (std::size_t i = 0; i < spec.levels.size(); ++i) {
    const LevelSpec& level = spec.levels[i];
    const std::string where = "level " + std::to_string(i + 1) + ": ";
    if (level.branches == 0) violations.push_back(where + "branches 0 must be positive");
    if (level.units == 0) violations.push_back(where + "units 0 must be positive");
    // Level 1 branches all read the single input stream.
    if (i > 0 && level.branches != streams) {
      violations.push_back(where + "branches " + std::to_string(level.branches) + " ≠ streams " +
                           std::to_string(streams));
    }
    if (level.merge == Merge::pairs && level.branches % 2 != 0) {
      violations.push_back(where + "merge pairs requires an even branch count, got " +
                           std::to_string(level.branches));
    }
    streams = streams_after(level);
  }
  if (!spec.levels.empty() && streams != 1) {
    violations.push_back("output expects exactly 1 stream but the last level emits " +
                         std::to_string(streams));
  }
  if (spec.output_units == 0) violations.push_back("output units 0 must be positive");
  return violations;
}

SpecSyntaxError::SpecSyntaxError(std::size_t line, std::string expected, std::string found)
    : ParseError("line " + std::to_string(line) + ": expected " + expected + " but found " +
                 (found.empty() ? "end of line" : "'" + found + "'")),
      line_(line),
      expected_(std::move(expected)) {}

namespace {

std::string join_violations(const std::vector<std::string>& v) {
  std::string out = "invalid architecture spec:";
  for (const auto& s : v) out += "\n  - " + s;
  return out;
}

}  // namespace

SpecValidationError::SpecValidationError(std::vector<std::string> violations)
    : ConfigError(join_violations(violations)), violations_(std::move(violations)) {}

namespace {

struct Token {
  enum class Kind { word, integer, colon, comma } kind;
  std::string text;
};

std::vector<Token> tokenize(std::string_view line, std::size_t line_no) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == ':' || c == ',') {
      tokens.push_back({c == ':' ? Token::Kind::colon : Token::Kind::comma, std::string(1, c)});
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
      tokens.push_back({Token::Kind::integer, std::string(line.substr(i, j - i))});
      i = j;
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < line.size() &&
             (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_'))
        ++j;
      std::string word(line.substr(i, j - i));
      std::transform(word.begin(), word.end(), word.begin(),
                     [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
      tokens.push_back({Token::Kind::word, std::move(word)});
      i = j;
    } else {
      throw SpecSyntaxError(line_no, "a keyword, integer, ':' or ','", std::string(1, c));
    }
  }
  return tokens;
}

class LineCursor {
 public:
  LineCursor(std::vector<Token> tokens, std::size_t line_no)
      : tokens_(std::move(tokens)), line_no_(line_no) {}

  std::string peek_word() const {
    return pos_ < tokens_.size() && tokens_[pos_].kind == Token::Kind::word ? tokens_[pos_].text
                                                                            : std::string{};
  }
  bool at_end() const { return pos_ >= tokens_.size(); }

  void keyword(std::string_view kw) {
    if (at_end() || tokens_[pos_].kind != Token::Kind::word || tokens_[pos_].text != kw)
      fail("'" + std::string(kw) + "'");
    ++pos_;
  }

  void punct(Token::Kind kind) {
    if (at_end() || tokens_[pos_].kind != kind) fail(kind == Token::Kind::colon ? "':'" : "','");
    ++pos_;
  }

  bool optional_comma() {
    if (!at_end() && tokens_[pos_].kind == Token::Kind::comma) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::size_t integer(std::string_view what) {
    if (at_end() || tokens_[pos_].kind != Token::Kind::integer) fail(std::string(what));
    const std::string& t = tokens_[pos_].text;
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size()) fail(std::string(what) + " within range");
    ++pos_;
    return value;
  }

  Activation activation() {
    const std::string w = peek_word();
    if (w == "relu" || w == "linear") {
      ++pos_;
      return w == "relu" ? Activation::relu : Activation::linear;
    }
    fail("activation 'relu' or 'linear'");
  }

  Merge merge() {
    const std::string w = peek_word();
    if (w == "pairs" || w == "all" || w == "none") {
      ++pos_;
      return w == "pairs" ? Merge::pairs : w == "all" ? Merge::all : Merge::none;
    }
    fail("merge mode 'pairs', 'all' or 'none'");
  }

  void end() {
    if (!at_end()) fail("end of line");
  }

  [[noreturn]] void fail(std::string expected) const {
    throw SpecSyntaxError(line_no_, std::move(expected), at_end() ? "" : tokens_[pos_].text);
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t line_no_;
};

}  // namespace

ArchitectureSpec parse_spec(std::string_view text) {
  std::vector<LineCursor> lines;
  std::size_t line_no = 0;
  std::size_t last_line = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tokens = tokenize(line, line_no);
    if (!tokens.empty()) lines.emplace_back(std::move(tokens), line_no);
    last_line = line_no;
    start = end + 1;
  }

  ArchitectureSpec spec;
  std::size_t idx = 0;
  if (lines.empty()) throw SpecSyntaxError(std::max<std::size_t>(last_line, 1), "'input'", "");
  {
    LineCursor& l = lines[idx++];
    l.keyword("input");
    spec.input_width = l.integer("input width");
    l.end();
  }
  if (idx < lines.size() && lines[idx].peek_word() == "batchnorm") {
    LineCursor& l = lines[idx++];
    l.keyword("batchnorm");
    l.end();
    spec.use_batchnorm = true;
  }
  while (idx < lines.size() && lines[idx].peek_word() == "level") {
    LineCursor& l = lines[idx++];
    l.keyword("level");
    const std::size_t number = l.integer("level number");
    if (number != spec.levels.size() + 1) {
      l.fail("level number " + std::to_string(spec.levels.size() + 1));
    }
    l.punct(Token::Kind::colon);
    LevelSpec level;
    l.keyword("branches");
    level.branches = l.integer("branch count");
    l.punct(Token::Kind::comma);
    l.keyword("units");
    level.units = l.integer("unit count");
    l.punct(Token::Kind::comma);
    level.activation = l.activation();
    if (l.optional_comma()) {
      l.keyword("merge");
      level.merge = l.merge();
    }
    l.end();
    spec.levels.push_back(level);
  }
  if (idx >= lines.size()) {
    throw SpecSyntaxError(last_line, spec.levels.empty() ? "'level'" : "'level' or 'output'", "");
  }
  {
    LineCursor& l = lines[idx++];
    if (spec.levels.empty()) l.fail("'level'");
    if (l.peek_word() != "output") l.fail("'level' or 'output'");
    l.keyword("output");
    l.punct(Token::Kind::colon);
    spec.output_units = l.integer("output unit count");
    l.punct(Token::Kind::comma);
    spec.output_activation = l.activation();
    l.end();
  }
  if (idx < lines.size()) lines[idx].fail("end of spec after the output line");

  if (auto violations = validate_spec(spec); !violations.empty()) {
    throw SpecValidationError(std::move(violations));
  }
  return spec;
}

std::string render_spec(const ArchitectureSpec& spec) {
  std::string out = "input " + std::to_string(spec.input_width) + "\n";
  if (spec.use_batchnorm) out += "batchnorm\n";
  for (std::size_t i = 0; i < spec.levels.size(); ++i) {
    const LevelSpec& l = spec.levels[i];
    out += "level " + std::to_string(i + 1) + ": branches " + std::to_string(l.branches) +
           ", units " + std::to_string(l.units) + ", " + std::string(to_string(l.activation));
    if (l.merge != Merge::none) out += ", merge " + std::string(to_string(l.merge));
    out += "\n";
  }
  out += "output: " + std::to_string(spec.output_units) + ", " +
         std::string(to_string(spec.output_activation)) + "\n";
  return out;
}

ArchitectureSpec default_architecture() {
  ArchitectureSpec spec;
  spec.input_width = 13;
  spec.use_batchnorm = true;
  spec.levels = {
      {6, 128, Activation::relu, Merge::pairs},
      {3, 128, Activation::relu, Merge::all},
      {1, 128, Activation::relu, Merge::none},
  };
  spec.output_units = 1;
  spec.output_activation = Activation::linear;
  return spec;
}

}  // namespace mldnn
