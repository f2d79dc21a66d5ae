#include <gtest/gtest.h>

#include "../support/oracles.hpp"
#include "../support/synth.hpp"
#include "histofeat/error.hpp"
#include "histofeat/evaluation.hpp"

using namespace histofeat;

namespace {
constexpr Label N = Label::Normal;
constexpr Label A = Label::Abnormal;
}  // namespace

TEST(Confusion, Examples) {
  const std::vector<Label> y{N, N, N, A, A};
  EXPECT_EQ(confusion(y, y, N), (ConfusionMatrix{3, 0, 0, 2}));
  std::vector<Label> flipped;
  for (Label l : y) flipped.push_back(l == N ? A : N);
  EXPECT_EQ(confusion(y, flipped, N), (ConfusionMatrix{0, 2, 3, 0}));
  EXPECT_THROW(confusion(y, std::vector<Label>{N}, N), Error);
  EXPECT_THROW(confusion(std::vector<Label>{}, std::vector<Label>{}, N), Error);
}

TEST(Confusion, MatchesTally) {
  SplitMix64 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Label> t(10), p(10);
    for (std::size_t i = 0; i < 10; ++i) {
      t[i] = rng.bounded(2) ? A : N;
      p[i] = rng.bounded(2) ? A : N;
    }
    for (Label pos : {N, A}) {
      ConfusionMatrix want;
      for (std::size_t i = 0; i < 10; ++i) {
        if (t[i] == pos && p[i] == pos) ++want.tp;
        else if (t[i] != pos && p[i] == pos) ++want.fp;
        else if (t[i] == pos) ++want.fn;
        else ++want.tn;
      }
      EXPECT_EQ(confusion(t, p, pos), want);
    }
  }
}

TEST(Metrics, Examples) {
  const auto m = compute_metrics({3, 1, 2, 4});
  EXPECT_NEAR(m.a, 0.7, 1e-15);
  EXPECT_NEAR(m.p, 0.75, 1e-15);
  EXPECT_NEAR(m.r, 0.6, 1e-15);
  EXPECT_NEAR(m.s, 0.8, 1e-15);
  EXPECT_NEAR(m.f1, 0.6667, 1e-4);
  EXPECT_NEAR(m.mcc, 0.4082, 1e-4);
  EXPECT_NEAR(m.bacc, 0.7, 1e-15);

  const auto perfect = compute_metrics({5, 0, 0, 5});
  for (double v : {perfect.a, perfect.p, perfect.r, perfect.s, perfect.f1, perfect.mcc, perfect.bacc})
    EXPECT_EQ(v, 1.0);

  // Everything predicted positive on balanced data.
  const auto all_pos = compute_metrics({5, 5, 0, 0});
  EXPECT_EQ(all_pos.a, 0.5);
  EXPECT_EQ(all_pos.s, 0.0);
  EXPECT_EQ(all_pos.mcc, 0.0);
  EXPECT_EQ(all_pos.bacc, 0.5);

  EXPECT_THROW(compute_metrics({}), Error);
}

TEST(Metrics, ExhaustiveGridAgainstOracle) {
  for (int tp = 0; tp <= 10; ++tp)
    for (int fp = 0; fp <= 10; ++fp)
      for (int fn = 0; fn <= 10; ++fn)
        for (int tn = 0; tn <= 10; ++tn) {
          if (tp + fp + fn + tn == 0) continue;
          const auto got = compute_metrics({std::uint64_t(tp), std::uint64_t(fp), std::uint64_t(fn), std::uint64_t(tn)});
          const auto want = oracle::metrics(tp, fp, fn, tn);
          ASSERT_NEAR(got.a, want.a, 1e-12);
          ASSERT_NEAR(got.p, want.p, 1e-12);
          ASSERT_NEAR(got.r, want.r, 1e-12);
          ASSERT_NEAR(got.s, want.s, 1e-12);
          ASSERT_NEAR(got.f1, want.f1, 1e-12);
          ASSERT_NEAR(got.mcc, want.mcc, 1e-12);
          ASSERT_NEAR(got.bacc, want.bacc, 1e-12);
          ASSERT_GE(got.mcc, -1.0);
          ASSERT_LE(got.mcc, 1.0);
          ASSERT_NEAR(got.bacc, 0.5 * (got.r + got.s), 1e-12);
        }
}

TEST(Metrics, PositiveClassSwap) {
  SplitMix64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Label> t(30), p(30);
    for (std::size_t i = 0; i < 30; ++i) {
      t[i] = rng.bounded(2) ? A : N;
      p[i] = rng.bounded(3) ? t[i] : (t[i] == A ? N : A);
    }
    const auto cn = confusion(t, p, N);
    const auto ca = confusion(t, p, A);
    EXPECT_EQ(ca, (ConfusionMatrix{cn.tn, cn.fn, cn.fp, cn.tp}));
    const auto mn = compute_metrics(cn), ma = compute_metrics(ca);
    EXPECT_NEAR(mn.a, ma.a, 1e-15);
    EXPECT_NEAR(mn.mcc, ma.mcc, 1e-12);
  }
}

TEST(Format, Percent) {
  EXPECT_EQ(format_percent(0.7957), "79.57");
  EXPECT_EQ(format_percent(-0.0361), "-3.61");
  EXPECT_EQ(format_percent(-0.00001), "0.00");
  EXPECT_EQ(format_percent(1.0), "100.00");
}

TEST(CrossValidate, SeparableCopiesAndPartition) {
  Matrix x;
  std::vector<Label> y;
  synth::blobs(50, 20.0, 3, x, y);
  const FoldPlan plan = stratified_folds(y, 5, 9);
  for (auto kind : {ClassifierKind::DT, ClassifierKind::KNN, ClassifierKind::SVM, ClassifierKind::RF}) {
    ClassifierSpec spec;
    spec.kind = kind;
    spec.trees = 10;
    const CvResult r = cross_validate(x, y, spec, plan);
    EXPECT_EQ(r.metrics.a, 1.0) << to_string(kind);
    EXPECT_EQ(r.pooled.total(), 100u);
    ConfusionMatrix sum;
    for (const auto& f : r.folds) sum += f;
    EXPECT_EQ(sum, r.pooled);
    EXPECT_EQ(confusion(y, r.predictions, N), r.pooled);
  }
}

TEST(CrossValidate, PermutationNull) {
  double total = 0;
  const int seeds = 20;
  for (int seed = 0; seed < seeds; ++seed) {
    SplitMix64 rng(1000 + seed);
    Matrix x(100, 3);
    std::vector<Label> y(100);
    for (std::size_t i = 0; i < 100; ++i) {
      for (std::size_t j = 0; j < 3; ++j) x(i, j) = rng.uniform();
      y[i] = i % 2 ? A : N;
    }
    ClassifierSpec spec;
    spec.kind = static_cast<ClassifierKind>(seed % 4);
    spec.trees = 15;
    spec.seed = static_cast<std::uint64_t>(seed);
    const auto r = cross_validate(x, y, spec, stratified_folds(y, 5, seed));
    total += r.metrics.mcc;
  }
  EXPECT_LT(std::abs(total / seeds), 0.15);
}

TEST(CrossValidate, SingleClassTrainingSplitIsAnError) {
  const Matrix x = Matrix::from_rows({{0}, {1}, {2}, {3}});
  const std::vector<Label> y{N, N, A, A};
  FoldPlan plan;
  plan.k = 2;
  plan.assignment = {0, 0, 1, 1};
  try {
    cross_validate(x, y, {}, plan);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Training);
  }
}

TEST(CrossValidate, ThreadCountDoesNotMatter) {
  Matrix x;
  std::vector<Label> y;
  synth::blobs(40, 1.0, 4, x, y);
  const FoldPlan plan = stratified_folds(y, 5, 1);
  for (auto kind : {ClassifierKind::DT, ClassifierKind::KNN, ClassifierKind::SVM, ClassifierKind::RF}) {
    ClassifierSpec spec;
    spec.kind = kind;
    spec.trees = 20;
    spec.threads = 1;
    const auto a = cross_validate(x, y, spec, plan, {N, 1});
    spec.threads = 3;
    const auto b = cross_validate(x, y, spec, plan, {N, 5});
    EXPECT_EQ(a.predictions, b.predictions);
    EXPECT_EQ(a.pooled, b.pooled);
  }
}

TEST(Report, MarkdownAndCsv) {
  CvResult lbp;
  lbp.descriptor = "lbp";
  lbp.classifier = ClassifierKind::RF;
  lbp.seed = 3;
  lbp.metrics = {0.7957, 0.8, 0.81, 0.7, 0.805, -0.0361, 0.755};
  CvResult ch1 = lbp;
  ch1.descriptor = "ch1";
  ch1.classifier = ClassifierKind::DT;
  CvResult har = lbp;
  har.descriptor = "har";
  har.nonconverged_folds = 1;
  har.classifier = ClassifierKind::SVM;
  const std::vector<CvResult> results{lbp, ch1, har};

  const std::string md = render_markdown(results);
  EXPECT_NE(md.find("| Desc | A | P | R | S | F1 | MCC | BACC |"), std::string::npos);
  EXPECT_NE(md.find("79.57"), std::string::npos);
  EXPECT_NE(md.find("-3.61"), std::string::npos);
  EXPECT_NE(md.find("pooled"), std::string::npos);
  EXPECT_LT(md.find("## DT"), md.find("## SVM"));
  EXPECT_LT(md.find("## SVM"), md.find("## RF"));
  EXPECT_EQ(md.find("nan"), std::string::npos);
  EXPECT_NE(md.find("har*"), std::string::npos);

  const std::string csv = render_csv(results);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "classifier,descriptor,a,p,r,s,f1,mcc,bacc,seed");
  EXPECT_NE(csv.find("rf,lbp,0.7957,"), std::string::npos);
  const auto back = parse_report_csv(csv);
  ASSERT_EQ(back.size(), 3u);
  EXPECT_EQ(render_csv(back), csv);
  EXPECT_THROW(parse_report_csv("bogus\n"), Error);
}
