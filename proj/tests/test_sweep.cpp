#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "qdel/errors.hpp"
#include "qdel/report.hpp"
#include "qdel/selftest.hpp"
#include "qdel/sweep.hpp"

namespace {

using qdel::MachineParams;
using qdel::SweepSpec;
using qdel::SweptParam;

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (char c : line) {
      if (c == '"') {
        quoted = !quoted;
      } else if (c == ',' && !quoted) {
        cells.push_back(cell);
        cell.clear();
      } else {
        cell += c;
      }
    }
    cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

int column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

SweepSpec spec_for(SweptParam p, double from, double to, int steps) {
  SweepSpec s;
  s.param = p;
  s.from = from;
  s.to = to;
  s.steps = steps;
  return s;
}

TEST(FormatNumber, TwelveSignificantDigits) {
  EXPECT_EQ(qdel::format_number(0.5), "0.5");
  EXPECT_EQ(qdel::format_number(2.0 / 3.0), "0.666666666667");
  EXPECT_EQ(qdel::format_number(-0.0), "0");
  EXPECT_EQ(qdel::format_number(1e-20), "1e-20");
  EXPECT_EQ(qdel::round_sig(2.0 / 3.0), 0.666666666667);
}

TEST(SweepSpec, Validation) {
  EXPECT_THROW(spec_for(SweptParam::lambda, 0, 0.4, 1).validate(), qdel::InvalidInput);
  EXPECT_THROW(spec_for(SweptParam::lambda, 0, 0.6, 3).validate(), qdel::InvalidInput);
  EXPECT_THROW(spec_for(SweptParam::alpha2, -0.1, 1, 3).validate(), qdel::InvalidInput);
  EXPECT_NO_THROW(spec_for(SweptParam::y, 0, 2, 3).validate());
  EXPECT_EQ(qdel::parse_swept_param("beta_phase"), SweptParam::beta_phase);
  EXPECT_FALSE(qdel::parse_swept_param("gamma").has_value());
}

TEST(Sweep, DeletionFidelityConstantOverLambda) {
  const auto spec = spec_for(SweptParam::lambda, 0.0, 0.49, 50);
  const auto rows = qdel::run_sweep(spec);
  ASSERT_EQ(rows.size(), 50u);
  const auto csv = parse_csv(qdel::sweep_csv(spec, rows));
  ASSERT_EQ(csv.size(), 51u);
  const int f2 = column(csv[0], "F2");
  ASSERT_GE(f2, 0);
  for (std::size_t i = 1; i < csv.size(); ++i) EXPECT_NEAR(std::stod(csv[i][f2]), 0.5, 1e-10);
}

TEST(Sweep, RetainedFidelitySymmetricAtLambdaZero) {
  const auto spec = spec_for(SweptParam::alpha2, 0.0, 1.0, 21);
  const auto rows = qdel::run_sweep(spec);
  double lo = 1.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double f = rows[i].report->f1.numeric;
    EXPECT_NEAR(f, rows[rows.size() - 1 - i].report->f1.numeric, 1e-12);
    lo = std::min(lo, f);
  }
  EXPECT_NEAR(lo, 0.5, 1e-12);
  EXPECT_NEAR(rows[10].report->f1.numeric, 0.5, 1e-12);
}

TEST(Sweep, MachineOverlapConstant) {
  auto spec = spec_for(SweptParam::alpha2, 0.0, 1.0, 11);
  spec.fixed.y = 0.2;
  for (const auto& row : qdel::run_sweep(spec)) EXPECT_NEAR(row.report->fc.numeric, 0.04, 1e-10);
}

TEST(Sweep, InfeasibleRowsFlagged) {
  auto spec = spec_for(SweptParam::y, 0.0, 0.6, 7);
  spec.fixed.lambda = 0.2;
  const auto rows = qdel::run_sweep(spec);
  const auto csv = parse_csv(qdel::sweep_csv(spec, rows));
  ASSERT_EQ(csv.size(), 8u);
  const int f1 = column(csv[0], "F1");
  const int note = column(csv[0], "note");
  int flagged = 0;
  for (std::size_t i = 1; i < csv.size(); ++i) {
    ASSERT_EQ(csv[i].size(), csv[0].size());
    const double y = std::stod(csv[i][1]);
    if (3 * y * y > 1 - 2 * 0.2) {
      ++flagged;
      EXPECT_TRUE(csv[i][f1].empty());
      EXPECT_NE(csv[i][note].find("infeasible"), std::string::npos);
    } else {
      EXPECT_FALSE(csv[i][f1].empty());
    }
  }
  EXPECT_EQ(flagged, 2);
}

TEST(Sweep, DeterministicAcrossThreadCounts) {
  auto spec = spec_for(SweptParam::beta_phase, 0.0, 6.0, 13);
  spec.fixed.lambda = 0.3;
  spec.transformer = true;
  const auto a = qdel::sweep_csv(spec, qdel::run_sweep(spec, 1));
  const auto b = qdel::sweep_csv(spec, qdel::run_sweep(spec, 8));
  EXPECT_EQ(a, b);
  EXPECT_EQ(qdel::sweep_json(spec, qdel::run_sweep(spec, 1)).dump(),
            qdel::sweep_json(spec, qdel::run_sweep(spec, 5)).dump());
}

TEST(Sweep, JsonRowsFollowReportSchema) {
  const auto spec = spec_for(SweptParam::lambda, 0.0, 0.5, 3);
  const auto j = qdel::sweep_json(spec, qdel::run_sweep(spec));
  ASSERT_TRUE(j.is_array());
  ASSERT_EQ(j.size(), 3u);
  for (const auto& row : j) {
    for (const char* key : {"inputs", "conventional", "modified", "classification"})
      EXPECT_TRUE(row.contains(key)) << key;
    for (const char* f : {"F1", "F2", "Fc"})
      for (const char* k : {"numeric", "closed", "diff"})
        EXPECT_TRUE(row["conventional"][f].contains(k));
    for (const char* f : {"F3", "F4", "Fc"}) EXPECT_TRUE(row["modified"].contains(f));
  }
  EXPECT_EQ(j[2]["classification"], "ideal");
}

TEST(Sweep, EmittedFidelitiesWithinUnitInterval) {
  auto spec = spec_for(SweptParam::alpha2, 0.0, 1.0, 11);
  spec.fixed.lambda = 0.5;
  spec.transformer = true;
  for (const auto& row : qdel::run_sweep(spec)) {
    for (double f : {row.report->f1.numeric, row.report->f2.numeric, row.report->f3.numeric,
                     row.report->f4.numeric, row.report->fc.numeric}) {
      EXPECT_GE(f, 0.0);
      EXPECT_LE(f, 1.0);
    }
  }
}

TEST(Limit, DefaultSequenceConverges) {
  const auto rep = qdel::run_limit(qdel::LimitSpec{});
  ASSERT_EQ(rep.rows.size(), 3u);
  EXPECT_TRUE(rep.f3_monotone);
  EXPECT_TRUE(rep.f4_monotone);
  EXPECT_TRUE(rep.exact_matches_closed);
  EXPECT_NEAR(rep.f4_exact, 0.75, 1e-12);
  EXPECT_NEAR(rep.f3_closed, 0.853553390593, 1e-12);
  EXPECT_NEAR(std::abs(rep.rows.back().f4 - 0.75), 1e-4 / 2 * 1.5, 1e-6);
  EXPECT_TRUE(rep.pass());
}

TEST(Limit, RejectsNonDecreasingEps) {
  qdel::LimitSpec spec;
  spec.eps = {1e-3, 1e-2};
  EXPECT_THROW(qdel::run_limit(spec), qdel::InvalidInput);
  spec.eps = {0.0};
  EXPECT_THROW(qdel::run_limit(spec), qdel::InvalidInput);
}

TEST(SelfTest, FaultTransformerSwap) {
  qdel::SelfTestOptions opt;
  opt.swap_transformer_columns = true;
  const auto rep = qdel::run_selftest(opt);
  EXPECT_FALSE(rep.pass());
  for (const auto& c : rep.checks) {
    if (c.id == "1") EXPECT_TRUE(c.pass);
    if (c.id == "4a") EXPECT_FALSE(c.pass);
    if (c.id == "6b") EXPECT_TRUE(c.pass);
  }
}

TEST(SelfTest, FaultGramCorrupt) {
  qdel::SelfTestOptions opt;
  opt.corrupt_gram = true;
  const auto rep = qdel::run_selftest(opt);
  EXPECT_FALSE(rep.pass());
  for (const auto& c : rep.checks)
    if (c.id == "6a") EXPECT_FALSE(c.pass);
}

TEST(SelfTest, CleanRunReportsEveryCriterion) {
  const auto rep = qdel::run_selftest();
  std::vector<std::string> ids;
  for (const auto& c : rep.checks) ids.push_back(c.id);
  for (const char* want : {"1", "2a", "3a", "4a", "5a", "6a", "7a", "8a", "9", "10"})
    EXPECT_NE(std::find(ids.begin(), ids.end(), want), ids.end()) << want;
  for (const auto& c : rep.checks)
    if (c.id != "8c") EXPECT_TRUE(c.pass || !c.gating) << c.id << " " << c.observed;
  const std::string text = qdel::format_selftest(rep);
  EXPECT_NE(text.find("overall:"), std::string::npos);
}

}  // namespace
