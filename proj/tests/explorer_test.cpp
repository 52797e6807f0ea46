// Copyright 2026 The teleportsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "teleportsim/explorer.hpp"

namespace teleportsim {
namespace {

const double kL3 = std::log2(3.0);

std::vector<SweepRecord> with_curve(const SweepResult& r, const std::string& curve) {
  std::vector<SweepRecord> out;
  for (const auto& rec : r.records) {
    if (rec.curve == curve) out.push_back(rec);
  }
  return out;
}

TEST(Linspace, Endpoints) {
  const auto v = linspace(0.0, 1.0, 5);
  ASSERT_EQ(v.size(), 5u);
  EXPECT_EQ(v.front(), 0.0);
  EXPECT_EQ(v.back(), 1.0);
  EXPECT_EQ(v[2], 0.5);
}

TEST(SweepDegenerate, ShapeOfSum) {
  const SweepResult r = sweep_degenerate(41);
  ASSERT_EQ(r.records.size(), 41u);
  EXPECT_EQ(r.skipped_infeasible, 0u);
  EXPECT_NEAR(r.records.front().sum, 3.0, 1e-12);
  EXPECT_NEAR(r.records.back().sum, 3.0, 1e-12);
  const double balanced = 0.5 * (1.0 + 2.0 - 0.75 * kL3) + 2.5;
  EXPECT_NEAR(r.records[20].sum, balanced, 1e-12);
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    EXPECT_NEAR(r.records[i].sum, r.records[r.records.size() - 1 - i].sum, 1e-12);
    EXPECT_LE(r.records[i].sum, balanced + 1e-12);
    EXPECT_NEAR(r.records[i].e_channel, 1.0, 1e-15);
  }
}

TEST(SweepCaseOne, MinimumOfMeasurementEntanglement) {
  const SweepResult r = sweep_case1(25, 7);
  const auto blue = with_curve(r, "blue");
  ASSERT_FALSE(blue.empty());
  const auto it = std::min_element(blue.begin(), blue.end(), [](auto& x, auto& y) { return x.e12 < y.e12; });
  EXPECT_NEAR(it->a0, 1e-4, 1e-12);
  EXPECT_NEAR(it->e12, 0.906, 1e-3);
  for (const auto& rec : r.records) {
    EXPECT_GE(rec.sum, rec.bound_lower - 1e-9);
    ASSERT_TRUE(rec.bound_upper.has_value());
    EXPECT_LE(rec.sum, *rec.bound_upper + 1e-9);
  }
}

TEST(SweepCaseTwo, RegionAndGreenCurve) {
  const SweepResult r = sweep_case2(20, 7);
  const auto green = with_curve(r, "green");
  const auto region = with_curve(r, "region");
  ASSERT_FALSE(green.empty());
  ASSERT_FALSE(region.empty());
  for (const auto& rec : r.records) {
    EXPECT_NEAR(rec.a1, 1.0 / std::sqrt(2.0), 1e-12);
    EXPECT_GE(rec.sum, rec.bound_lower - 1e-9);
    EXPECT_FALSE(rec.bound_upper.has_value());
  }
  // the green curve starts on the channel with squares (1/4, 1/2, 1/4)
  const auto start =
      std::min_element(green.begin(), green.end(), [](auto& x, auto& y) { return x.theta3 < y.theta3; });
  EXPECT_NEAR(start->a2, 0.5, 1e-9);
  EXPECT_NEAR(start->e_channel, 1.5, 1e-9);
  EXPECT_NEAR(start->sum, lower_bound_f2(1.5), 1e-6);
  // the a2 -> 0 end approaches the degenerate minimum
  const auto near = std::min_element(region.begin(), region.end(), [](auto& x, auto& y) { return x.a2 < y.a2; });
  EXPECT_LT(near->a2, 1e-3);
  EXPECT_NEAR(near->e_channel, 1.0, 1e-3);
}

TEST(Bounds, TableShape) {
  const auto rows = bounds_table(default_entropy_grid(3));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NEAR(rows.back().e, kL3, 0.0);
  EXPECT_NEAR(rows.back().lower, 1.0 + std::log2(6.0), 1e-9);
  ASSERT_TRUE(rows.back().upper.has_value());
  EXPECT_NEAR(*rows.back().upper, rows.back().lower, 1e-9);
  for (const auto& row : rows) {
    if (row.upper) {
      EXPECT_GE(*row.upper, row.lower - 1e-9);
    }
  }
  EXPECT_THROW(default_entropy_grid(0), ValidationError);
}

TEST(Csv, HeaderAndFooter) {
  std::ostringstream os;
  write_csv(os, sweep_degenerate(3));
  const std::string s = os.str();
  EXPECT_EQ(s.substr(0, s.find('\n')),
            "a0,a1,a2,theta1,theta2,theta3,e_channel,e12,h12,sum,bound_lower,bound_upper,curve");
  EXPECT_NE(s.find("# skipped_infeasible=0"), std::string::npos);
  std::ostringstream bs;
  write_csv(bs, bounds_table({1.0, 1.5}));
  EXPECT_EQ(bs.str().substr(0, bs.str().find('\n')), "E,lower,upper");
}

TEST(Csv, RoundTripPrecision) {
  const double x = 0.1 + 0.2;
  EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(Json, Deterministic) {
  const std::string a = to_json(sweep_case1(8, 11)).dump();
  const std::string b = to_json(sweep_case1(8, 11)).dump();
  EXPECT_EQ(a, b);
  const auto j = to_json(sweep_degenerate(3));
  EXPECT_EQ(j["records"].size(), 3u);
  EXPECT_TRUE(j["records"][0].contains("bound_upper"));
}

TEST(Density, Validation) { EXPECT_THROW(sweep_case1(1, 0), ValidationError); }

}  // namespace
}  // namespace teleportsim
