#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mldnn/error.hpp"
#include "mldnn/layers.hpp"

namespace mldnn {

/// How the branch outputs of one level are joined into streams for the next.
/// pairs: concatenate adjacent branches in declaration order (1+2, 3+4, ...).
/// all:   concatenate every branch into one stream.
/// none:  each branch output is its own stream.
enum class Merge { none, pairs, all };

std::string_view to_string(Merge m) noexcept;

struct LevelSpec {
  std::size_t branches = 1;
  std::size_t units = 1;
  Activation activation = Activation::relu;
  Merge merge = Merge::none;

  friend bool operator==(const LevelSpec&, const LevelSpec&) = default;
};

struct ArchitectureSpec {
  std::size_t input_width = 0;
  bool use_batchnorm = false;
  std::vector<LevelSpec> levels;
  std::size_t output_units = 1;
  Activation output_activation = Activation::linear;

  friend bool operator==(const ArchitectureSpec&, const ArchitectureSpec&) = default;
};

/// Number of streams a level hands to the next one.
std::size_t streams_after(const LevelSpec& level) noexcept;

/// Every invariant violation, in declaration order. Empty means valid.
std::vector<std::string> validate_spec(const ArchitectureSpec& spec);

/// Positioned syntax error: 1-based line number plus what the parser wanted.
class SpecSyntaxError : public ParseError {
 public:
  SpecSyntaxError(std::size_t line, std::string expected, std::string found);
  std::size_t line() const noexcept { return line_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t line_;
  std::string expected_;
};

class SpecValidationError : public ConfigError {
 public:
  explicit SpecValidationError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Parses the line-oriented architecture language:
///
///   input 13
///   batchnorm
///   level 1: branches 6, units 128, relu, merge pairs
///   level 2: branches 3, units 128, relu, merge all
///   level 3: branches 1, units 128, relu
///   output: 1, linear
///
/// Keywords are case-insensitive, '#' starts a comment, blank lines are
/// ignored and the default merge is "none". The result is validated; a
/// syntactically correct but inconsistent spec throws SpecValidationError
/// listing every violation.
ArchitectureSpec parse_spec(std::string_view text);

/// Canonical text form; parse_spec(render_spec(s)) == s.
std::string render_spec(const ArchitectureSpec& spec);

/// The 13-input, three-level, ten-hidden-layer network.
ArchitectureSpec default_architecture();

}  // namespace mldnn
