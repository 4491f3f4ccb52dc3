#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "partrace/bench.hpp"

using namespace partrace;

TEST(Suite, ParsesLinesAndComments) {
  auto s = parse_suite("# header\nnz, a/nz.imp, safe\n\nbad,/abs/bad.imp,unsafe # trailing\nx,y.aut,any\n",
                       "/base");
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].label, "nz");
  EXPECT_EQ(s[0].path, "/base/a/nz.imp");
  EXPECT_EQ(s[0].expected, Expectation::Safe);
  EXPECT_EQ(s[1].path, "/abs/bad.imp");
  EXPECT_EQ(s[1].expected, Expectation::Unsafe);
  EXPECT_EQ(s[2].expected, Expectation::Any);
  EXPECT_THROW(parse_suite("only,two\n"), std::invalid_argument);
  EXPECT_THROW(parse_suite("a,b,maybe\n"), std::invalid_argument);
}

TEST(Csv, QuotesWhenNeeded) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_field("two\nlines"), "\"two\nlines\"");
}

TEST(Bench, SweepRowsAndCorrectness) {
  std::vector<TaskSpec> suite{{"nz", "", Expectation::Safe, oracle::kNotZero},
                              {"nz-wrong", "", Expectation::Unsafe, oracle::kNotZero},
                              {"bad", "", Expectation::Unsafe, oracle::kNotZeroBad}};
  BenchConfig cfg;
  cfg.worker_counts = {1, 2};
  cfg.repetitions = 2;
  cfg.executor = ExecutorKind::Synchronous;
  auto rows = bench_sweep(suite, cfg);
  ASSERT_EQ(rows.size(), suite.size() * cfg.worker_counts.size() * cfg.repetitions);
  for (const auto& r : rows) {
    if (r.label == "nz-wrong") {
      EXPECT_FALSE(r.correct);
      EXPECT_EQ(r.verdict, VerdictKind::Safe);
    } else {
      EXPECT_TRUE(r.correct) << r.label;
    }
  }
  auto summary = summarize(rows);
  ASSERT_EQ(summary.size(), 6u);
  for (const auto& s : summary) {
    if (s.workers == 1) EXPECT_DOUBLE_EQ(s.speedup, 1.0);
    EXPECT_EQ(s.correct + s.incorrect, 2u);
  }

  std::ostringstream csv;
  write_records_csv(csv, rows);
  std::string text = csv.str();
  EXPECT_EQ(text.rfind("label,workers,repetition,verdict,expected,correct,wall_time_s,", 0), 0u);
  std::size_t lines = 0;
  for (std::size_t p = text.find("\r\n"); p != std::string::npos; p = text.find("\r\n", p + 2)) {
    ++lines;
  }
  EXPECT_EQ(lines, rows.size() + 1);
}

TEST(Bench, UnreadableTaskBecomesUnknownRow) {
  std::vector<TaskSpec> suite{{"missing", "/nonexistent/file.imp", Expectation::Safe, ""}};
  BenchConfig cfg;
  cfg.worker_counts = {1};
  cfg.repetitions = 1;
  auto rows = bench_sweep(suite, cfg);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].verdict, VerdictKind::Unknown);
  EXPECT_FALSE(rows[0].correct);
  EXPECT_FALSE(rows[0].reason.empty());
}

TEST(Bench, LoadsBothFormats) {
  ProgramAutomaton p = load_program_text(oracle::kNotZero, false);
  std::string aut = serialize(p.automaton());
  ProgramAutomaton q = load_program_text(aut, true);
  EXPECT_TRUE(structurally_equal(p.automaton(), q.automaton()));
  EXPECT_EQ(parse_expectation("safe"), Expectation::Safe);
  EXPECT_EQ(to_string(Expectation::Unsafe), "unsafe");
}
