#include <gtest/gtest.h>

#include "mldnn/modelspec.hpp"

namespace mldnn {
namespace {

constexpr const char* kDefaultText = R"(input 13
batchnorm
level 1: branches 6, units 128, relu, merge pairs
level 2: branches 3, units 128, relu, merge all
level 3: branches 1, units 128, relu
output: 1, linear
)";

TEST(ParseSpec, DefaultText) {
  EXPECT_EQ(parse_spec(kDefaultText), default_architecture());
}

TEST(ParseSpec, CaseCommentsAndBlankLines) {
  const auto spec = parse_spec("# header\n\nINPUT 4\nLevel 1: Branches 2, Units 3, ReLU, Merge All  # tail\nOutput: 1, Linear\n");
  ASSERT_EQ(spec.levels.size(), 1u);
  EXPECT_EQ(spec.input_width, 4u);
  EXPECT_FALSE(spec.use_batchnorm);
  EXPECT_EQ(spec.levels[0].merge, Merge::all);
  EXPECT_EQ(spec.levels[0].units, 3u);
}

TEST(ParseSpec, RenderRoundTrip) {
  const auto spec = default_architecture();
  EXPECT_EQ(parse_spec(render_spec(spec)), spec);
  EXPECT_EQ(render_spec(parse_spec(render_spec(spec))), render_spec(spec));
}

TEST(ParseSpec, EmptyInputIsPositioned) {
  try {
    parse_spec("");
    FAIL();
  } catch (const SpecSyntaxError& e) {
    EXPECT_NE(e.expected().find("input"), std::string::npos);
  }
}

TEST(ParseSpec, SyntaxErrorReportsLine) {
  try {
    parse_spec("input 13\nlevel 1: branches six, units 8, relu\noutput: 1, linear\n");
    FAIL();
  } catch (const SpecSyntaxError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(ParseSpec, LevelNumberingMustBeSequential) {
  EXPECT_THROW(parse_spec("input 3\nlevel 2: branches 1, units 2, relu\noutput: 1, linear\n"), SpecSyntaxError);
}

TEST(ParseSpec, InconsistentSpecListsEveryViolation) {
  try {
    parse_spec("input 13\nlevel 1: branches 3, units 8, relu, merge pairs\n"
               "level 2: branches 4, units 8, relu\noutput: 1, linear\n");
    FAIL();
  } catch (const SpecValidationError& e) {
    EXPECT_GE(e.violations().size(), 2u);
  }
}

TEST(ValidateSpec, DefaultIsValid) { EXPECT_TRUE(validate_spec(default_architecture()).empty()); }

TEST(ValidateSpec, BranchMismatchMessage) {
  auto spec = default_architecture();
  spec.levels[1].branches = 4;
  const auto v = validate_spec(spec);
  ASSERT_FALSE(v.empty());
  EXPECT_NE(v.front().find("branches 4"), std::string::npos);
  EXPECT_NE(v.front().find("streams 3"), std::string::npos);
}

TEST(ValidateSpec, PairsNeedEvenBranches) {
  ArchitectureSpec spec{4, false, {{3, 8, Activation::relu, Merge::pairs}, {1, 8, Activation::relu, Merge::none}}, 1,
                        Activation::linear};
  bool found = false;
  for (const auto& msg : validate_spec(spec)) found |= msg.find("even") != std::string::npos;
  EXPECT_TRUE(found);
}

TEST(ValidateSpec, ZeroSizesRejected) {
  ArchitectureSpec spec{0, false, {{1, 0, Activation::relu, Merge::none}}, 0, Activation::linear};
  EXPECT_GE(validate_spec(spec).size(), 3u);
}

TEST(ValidateSpec, OutputNeedsSingleStream) {
  ArchitectureSpec spec{4, false, {{2, 8, Activation::relu, Merge::none}}, 1, Activation::linear};
  EXPECT_FALSE(validate_spec(spec).empty());
  spec.levels[0].merge = Merge::all;
  EXPECT_TRUE(validate_spec(spec).empty());
}

TEST(StreamsAfter, PerMergeMode) {
  EXPECT_EQ(streams_after({6, 1, Activation::relu, Merge::pairs}), 3u);
  EXPECT_EQ(streams_after({6, 1, Activation::relu, Merge::all}), 1u);
  EXPECT_EQ(streams_after({6, 1, Activation::relu, Merge::none}), 6u);
}

}  // namespace
}  // namespace mldnn
