#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "../support/synth.hpp"
#include "histofeat/cli.hpp"
#include "histofeat/deepfeat.hpp"

using namespace histofeat;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = synth::scratch_dir(std::string("cli_") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    root_ = dir_ / "data";
    synth::write_dataset(root_, 6, 48, 5);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_, root_;
};

}  // namespace

TEST_F(CliTest, ExtractShapes) {
  const auto out = dir_ / "feat";
  const CliRun r = run({"extract", "--root", root_.string(), "--desc", "lbp", "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const FeatureTable t = read_feature_csv(out / "lbp.csv");
  EXPECT_EQ(t.rows.size(), 12u);
  EXPECT_EQ(t.dim, 36u);
}

TEST_F(CliTest, ExtractAllNineIsDeterministic) {
  const auto out = dir_ / "feat";
  const std::vector<std::string> args{"extract", "--root", root_.string(), "--desc",
                                      "ch1,ch2,lm,zm,har,lbp,hist,ac,haar", "--out", out.string()};
  ASSERT_EQ(run(args).code, 0);
  std::map<std::string, std::string> first;
  for (const auto& e : fs::directory_iterator(out)) first[e.path().filename().string()] = slurp(e.path());
  EXPECT_EQ(first.size(), 9u);
  ::setenv("HISTOFEAT_THREADS", "1", 1);
  ASSERT_EQ(run(args).code, 0);
  ::unsetenv("HISTOFEAT_THREADS");
  for (const auto& [name, text] : first) EXPECT_EQ(slurp(out / name), text) << name;
}

TEST_F(CliTest, EvaluateGridAndDeterminism) {
  const auto out = dir_ / "run";
  ASSERT_EQ(run({"extract", "--root", root_.string(), "--desc", "lbp,hist", "--out", out.string()}).code, 0);
  const std::vector<std::string> args{"evaluate", "--root", root_.string(), "--desc", "lbp,hist",
                                      "--seed", "3", "--folds", "3", "--out", out.string()};
  const CliRun r = run(args);
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = slurp(out / "report.csv");
  EXPECT_EQ(line_count(csv), 9u);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "classifier,descriptor,a,p,r,s,f1,mcc,bacc,seed");
  const std::string md = slurp(out / "report.md");
  EXPECT_NE(md.find("| Desc | A | P | R | S | F1 | MCC | BACC |"), std::string::npos);
  ASSERT_EQ(run(args).code, 0);
  EXPECT_EQ(slurp(out / "report.csv"), csv);

  // report re-renders the markdown from the CSV.
  fs::remove(out / "report.md");
  ASSERT_EQ(run({"report", "--out", out.string()}).code, 0);
  EXPECT_TRUE(fs::exists(out / "report.md"));
}

TEST_F(CliTest, EvaluateWithDeepFeaturesAndModels) {
  const auto out = dir_ / "run";
  ASSERT_EQ(run({"extract", "--root", root_.string(), "--desc", "hist", "--out", out.string()}).code, 0);
  // A stand-in "deep" table: the histogram features under another name.
  fs::copy_file(out / "hist.csv", dir_ / "fake.csv");
  const CliRun r = run({"evaluate", "--root", root_.string(), "--deep", "fakenet=" + (dir_ / "fake.csv").string(),
                     "--clf", "rf", "--folds", "3", "--save-models", "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(slurp(out / "report.csv").find("rf,fakenet,"), std::string::npos);
  EXPECT_TRUE(fs::exists(out / "models" / "fakenet.rf.hfm"));
}

TEST_F(CliTest, MissingFeatureFileNamesExtractCommand) {
  const auto out = dir_ / "empty";
  const CliRun r = run({"evaluate", "--root", root_.string(), "--desc", "zm", "--out", out.string()});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("histofeat extract"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(out / "report.csv"));
}

TEST_F(CliTest, UnknownIdentifiersRejected) {
  EXPECT_NE(run({"extract", "--root", root_.string(), "--desc", "sift", "--out", (dir_ / "x").string()}).code, 0);
  EXPECT_FALSE(fs::exists(dir_ / "x" / "sift.csv"));
  EXPECT_NE(run({"evaluate", "--root", root_.string(), "--desc", "lbp", "--clf", "nb"}).code, 0);
  EXPECT_NE(run({"evaluate", "--root", root_.string(), "--positive", "tumour"}).code, 0);
  EXPECT_NE(run({}).code, 0);
}

TEST_F(CliTest, FailedExtractLeavesNoFiles) {
  const auto tiny = dir_ / "tiny";
  fs::create_directories(tiny / "normal");
  fs::create_directories(tiny / "abnormal");
  write_png(GrayImage(3, 3, std::uint8_t{1}), tiny / "normal" / "a.png");
  write_png(GrayImage(3, 3, std::uint8_t{2}), tiny / "abnormal" / "b.png");
  const auto out = dir_ / "out";
  const CliRun r = run({"extract", "--root", tiny.string(), "--desc", "lbp,haar", "--out", out.string()});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("haar"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("sample "), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(out / "lbp.csv"));
  EXPECT_FALSE(fs::exists(out / "haar.csv"));
}

TEST_F(CliTest, CombineSumsDimsAndReportsMismatch) {
  const auto out = dir_ / "feat";
  ASSERT_EQ(run({"extract", "--root", root_.string(), "--desc", "hist,har,zm", "--out", out.string()}).code, 0);
  const auto combined = dir_ / "combo.csv";
  const CliRun r = run({"combine", (out / "hist.csv").string(), (out / "har.csv").string(), (out / "zm.csv").string(),
                     "--out", combined.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const FeatureTable t = read_feature_csv(combined);
  EXPECT_EQ(t.dim, 7u + 13u + 12u);

  // Drop one row from a copy to break alignment.
  FeatureTable partial = read_feature_csv(out / "hist.csv");
  partial.rows.erase(partial.rows.begin());
  const std::string dropped = read_feature_csv(out / "hist.csv").rows.begin()->first;
  write_feature_csv(partial, dir_ / "partial.csv");
  const CliRun bad = run({"combine", (dir_ / "partial.csv").string(), (out / "har.csv").string(), "--out",
                       (dir_ / "bad.csv").string()});
  EXPECT_NE(bad.code, 0);
  EXPECT_NE(bad.err.find(dropped), std::string::npos) << bad.err;
  EXPECT_FALSE(fs::exists(dir_ / "bad.csv"));
}

TEST_F(CliTest, ConfigFileAndFlagPrecedence) {
  const auto out = dir_ / "cfg_out";
  const auto cfg = dir_ / "run.cfg";
  std::ofstream(cfg) << "# experiment\nroot = " << root_.string() << "\ndesc = hist,lbp\nseed = 11\nfolds = 3\n"
                     << "clf = dt\nout = " << out.string() << "\n";
  ASSERT_EQ(run({"extract", "--config", cfg.string()}).code, 0);
  EXPECT_TRUE(fs::exists(out / "hist.csv"));
  EXPECT_TRUE(fs::exists(out / "lbp.csv"));

  ASSERT_EQ(run({"evaluate", "--config", cfg.string(), "--desc", "hist"}).code, 0);
  const std::string csv = slurp(out / "report.csv");
  EXPECT_EQ(line_count(csv), 2u);
  EXPECT_NE(csv.find("dt,hist,"), std::string::npos);
  EXPECT_NE(csv.find(",11\n"), std::string::npos);
}

TEST_F(CliTest, DescriptorsDefaultToAllNine) {
  const auto out = dir_ / "all";
  ASSERT_EQ(run({"extract", "--root", root_.string(), "--out", out.string()}).code, 0);
  EXPECT_EQ(std::distance(fs::directory_iterator(out), fs::directory_iterator{}), 9);
  const CliRun r = run({"evaluate", "--root", root_.string(), "--clf", "knn", "--folds", "3", "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(line_count(slurp(out / "report.csv")), 10u);
}
