#include <gtest/gtest.h>

#include "mldnn/checkpoint.hpp"
#include "test_support.hpp"

namespace mldnn {
namespace {

CheckpointExtras sample_extras() {
  CheckpointExtras e;
  e.metadata["split_seed"] = "7";
  e.metadata["note"] = "x=y";
  e.tensors.push_back({"normalizer.mu", test::random_matrix(1, 13, 1)});
  return e;
}

TEST(Checkpoint, SaveLoadSaveIsByteIdentical) {
  ModelGraph g = build_default(2);
  forward(g, test::random_matrix(16, 13, 3), Mode::train);  // move BN running stats
  const std::string a = checkpoint_encode(g, sample_extras());
  const Checkpoint c = checkpoint_decode(a);
  EXPECT_EQ(checkpoint_encode(c.graph, c.extras), a);
  EXPECT_EQ(c.extras, sample_extras());
  EXPECT_EQ(c.graph.state_tensors(), g.state_tensors());
}

TEST(Checkpoint, LoadedModelPredictsIdentically) {
  ModelGraph g = build_default(4);
  const auto dir = test::scratch_dir("ckpt_predict");
  checkpoint_save(g, dir / "m.ckpt");
  const Checkpoint c = checkpoint_load(dir / "m.ckpt");
  const Matrix x = test::random_matrix(5, 13, 9);
  EXPECT_EQ(predict(c.graph, x), predict(g, x));
}

TEST(Checkpoint, BadMagicNamesExpected) {
  std::string bytes = checkpoint_encode(build_default(0));
  bytes[0] = 'X';
  try {
    checkpoint_decode(bytes);
    FAIL();
  } catch (const CheckpointError& e) {
    EXPECT_NE(std::string(e.what()).find("MLDNN1"), std::string::npos);
  }
}

TEST(Checkpoint, TruncationAndTrailingBytes) {
  const std::string bytes = checkpoint_encode(build_default(0));
  for (std::size_t cut : {std::size_t{3}, std::size_t{10}, bytes.size() / 2, bytes.size() - 1})
    EXPECT_THROW(checkpoint_decode(bytes.substr(0, cut)), CheckpointError) << cut;
  EXPECT_THROW(checkpoint_decode(bytes + "z"), CheckpointError);
}

TEST(Checkpoint, VersionMismatch) {
  std::string bytes = checkpoint_encode(build_default(0));
  bytes[6] = 9;
  EXPECT_THROW(checkpoint_decode(bytes), CheckpointError);
}

TEST(Checkpoint, GraphWithoutSpecCannotBeSaved) {
  GraphBuilder b(0);
  b.dense(b.input(2), 1, Activation::linear);
  EXPECT_THROW(checkpoint_encode(b.finish()), Error);
}

TEST(Checkpoint, MissingFile) {
  EXPECT_THROW(checkpoint_load("/nonexistent/dir/m.ckpt"), IoError);
}

}  // namespace
}  // namespace mldnn
