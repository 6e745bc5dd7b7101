#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "manifest.hpp"
#include "mldnn/csv.hpp"
#include "test_support.hpp"

namespace mldnn::cli {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  const auto r = run({"train", "--bogus", "--out", "x"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run({"train", "--data", test::data_path().string()}).code, kExitUsage);
}

TEST(Cli, DomainErrorsExitOne) {
  const auto dir = test::scratch_dir("cli_domain");
  EXPECT_EQ(run({"train", "--data", "/nonexistent.csv", "--out", dir.string()}).code, kExitDomainError);
  EXPECT_EQ(run({"eval", "--checkpoint", (dir / "missing.ckpt").string(), "--data", test::data_path().string()}).code,
            kExitDomainError);
  EXPECT_EQ(run({"train", "--data", test::data_path().string(), "--out", dir.string(), "--epochs", "0"}).code,
            kExitDomainError);
}

TEST(Cli, SpecValidate) {
  const auto dir = test::scratch_dir("cli_spec");
  {
    std::ofstream(dir / "good.spec") << "input 13\nlevel 1: branches 2, units 4, relu, merge all\noutput: 1, linear\n";
    std::ofstream(dir / "bad.spec") << "input 13\nlevel 1: branches 3, units 4, relu, merge pairs\noutput: 1, linear\n";
  }
  EXPECT_EQ(run({"spec-validate", (dir / "good.spec").string()}).code, kExitOk);
  const auto bad = run({"spec-validate", (dir / "bad.spec").string()});
  EXPECT_EQ(bad.code, kExitDomainError);
  EXPECT_NE(bad.err.find("even"), std::string::npos);
}

TEST(Cli, GradcheckSmallSpec) {
  const auto dir = test::scratch_dir("cli_gradcheck");
  std::ofstream(dir / "s.spec") << "input 13\nbatchnorm\nlevel 1: branches 2, units 8, relu, merge pairs\n"
                                   "level 2: branches 1, units 4, relu\noutput: 1, linear\n";
  const auto r = run({"gradcheck", "--spec", (dir / "s.spec").string(), "--seed", "2"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
}

TEST(Cli, TrainEvalCompareEndToEnd) {
  const auto dir = test::scratch_dir("cli_e2e");
  std::ofstream(dir / "s.spec") << "input 13\nbatchnorm\nlevel 1: branches 2, units 8, relu, merge all\n"
                                   "output: 1, linear\n";
  const std::string data = test::data_path().string();
  auto r = run({"train", "--data", data, "--spec", (dir / "s.spec").string(), "--epochs", "3", "--seed", "4",
                "--out", (dir / "run").string(), "--quiet"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  ASSERT_TRUE(std::filesystem::exists(dir / "run" / "model.ckpt"));
  const auto manifest = KeyValueFile::load(dir / "run" / "manifest.txt");
  ASSERT_NE(manifest.find("seed"), nullptr);
  EXPECT_EQ(*manifest.find("seed"), "4");
  EXPECT_EQ(parse_csv(read_file(dir / "run" / "history.csv")).rows.size(), 3u);

  const std::string ckpt = (dir / "run" / "model.ckpt").string();
  r = run({"eval", "--checkpoint", ckpt, "--data", data, "--report-dir", (dir / "report").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  for (const char* f : {"scatter.csv", "scatter.svg", "histogram.csv", "histogram.svg", "true_vs_predicted.csv"})
    EXPECT_TRUE(std::filesystem::exists(dir / "report" / f)) << f;
  EXPECT_EQ(parse_csv(read_file(dir / "report" / "scatter.csv")).rows.size(), 101u);

  r = run({"compare", "--checkpoint", ckpt, "--data", data, "--out", (dir / "cmp.csv").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string table = read_file(dir / "cmp.csv");
  EXPECT_NE(table.find("Linear Regression (OLS)"), std::string::npos);
  EXPECT_NE(table.find("Multi-level NN"), std::string::npos);
}

TEST(Cli, ConfigFileAndFlagPrecedence) {
  const auto dir = test::scratch_dir("cli_config");
  std::ofstream(dir / "s.spec") << "input 13\nlevel 1: branches 1, units 4, relu\noutput: 1, linear\n";
  std::ofstream(dir / "cfg.txt") << "epochs=2\nseed=9\n";
  const std::string data = test::data_path().string();
  auto r = run({"train", "--data", data, "--spec", (dir / "s.spec").string(), "--config", (dir / "cfg.txt").string(),
                "--seed", "11", "--out", (dir / "a").string(), "--quiet"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto m = KeyValueFile::load(dir / "a" / "manifest.txt");
  EXPECT_EQ(*m.find("seed"), "11");
  EXPECT_EQ(*m.find("epochs"), "2");

  std::ofstream(dir / "bad.txt") << "epochz=2\n";
  r = run({"train", "--data", data, "--config", (dir / "bad.txt").string(), "--out", (dir / "b").string()});
  EXPECT_EQ(r.code, kExitDomainError);
  EXPECT_NE(r.err.find("epochz"), std::string::npos);
}

TEST(Manifest, ParseRenderRoundTrip) {
  KeyValueFile f;
  f.set("b", "2");
  f.set("a", "x=1");
  const auto back = KeyValueFile::parse(f.render("comment"));
  EXPECT_EQ(back.entries(), f.entries());
  f.set("b", "3");
  EXPECT_EQ(*f.find("b"), "3");
  EXPECT_EQ(f.entries().size(), 2u);
  EXPECT_EQ(f.find("zz"), nullptr);
}

}  // namespace
}  // namespace mldnn::cli
