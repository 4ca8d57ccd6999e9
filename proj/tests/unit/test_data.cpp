// Copyright 2026 The FedSCS Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "data/csv.hpp"
#include "data/partition.hpp"
#include "data/split.hpp"
#include "data/synth.hpp"
#include "expect_error.hpp"

namespace fedscs::data {
namespace {

Table parse(const std::string& text, CsvSchema schema = {}) {
  std::istringstream in(text);
  return parse_csv(in, schema, "mem.csv");
}

Table numbered(std::size_t n) {
  Table t;
  t.data.n_classes = 2;
  t.data.features = Matrix(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    t.data.features(i, 0) = static_cast<double>(i);
    t.data.labels.push_back(static_cast<int32_t>(i % 2));
  }
  return t;
}

TEST(Csv, MapsLabelsToDenseClasses) {
  const Table t = parse("x,label\n1,a\n2,b\n3,a\n");
  EXPECT_EQ(t.data.labels, (std::vector<int32_t>{0, 1, 0}));
  EXPECT_EQ(t.data.n_classes, 2);
  EXPECT_EQ(t.feature_names, std::vector<std::string>{"x"});
  EXPECT_EQ(t.data.features(2, 0), 3.0);
  EXPECT_FALSE(t.has_ids());
}

TEST(Csv, IdColumnIsNotAFeature) {
  CsvSchema schema;
  schema.id_column = "site";
  const Table t = parse("site,x,y,label\ns1,1,2,0\ns2,3,4,1\n", schema);
  EXPECT_EQ(t.data.n_features(), 2u);
  EXPECT_EQ(t.ids, (std::vector<std::string>{"s1", "s2"}));
}

TEST(Csv, BadCellNamesLineAndColumn) {
  try {
    parse("x,y,label\n1,2,a\n3,NaN,b\n");
    FAIL() << "accepted NaN";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIngest);
    const std::string what = e.what();
    EXPECT_NE(what.find("line 3"), std::string::npos) << what;
    EXPECT_NE(what.find("'y'"), std::string::npos) << what;
  }
  EXPECT_FEDSCS_ERROR(parse("x,label\n1,a,extra\n"), ErrorCode::kIngest);
  EXPECT_FEDSCS_ERROR(parse("x,y\n1,2\n"), ErrorCode::kIngest);
  EXPECT_FEDSCS_ERROR(parse("x,label\nabc,a\n"), ErrorCode::kIngest);
}

TEST(Csv, MissingFileIsAnIoError) {
  try {
    load_csv("/nonexistent/dir/data.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/data.csv"), std::string::npos);
  }
}

TEST(Csv, WriteThenLoadRoundtrips) {
  BlobSpec spec;
  spec.rows = 50;
  spec.features = 3;
  spec.classes = 4;
  const Table t = make_blobs(spec);
  CsvSchema schema;
  schema.id_column = "id";
  const auto path = std::filesystem::temp_directory_path() / "fedscs_roundtrip.csv";
  write_csv(path.string(), t, schema);
  const Table back = load_csv(path.string(), schema);
  std::filesystem::remove(path);
  EXPECT_EQ(back.data.features, t.data.features);
  EXPECT_EQ(back.ids, t.ids);
  ASSERT_EQ(back.data.n_rows(), t.data.n_rows());
  for (std::size_t i = 0; i < t.data.n_rows(); ++i) {
    EXPECT_EQ(back.class_names[back.data.labels[i]], t.class_names[t.data.labels[i]]);
  }
}

TEST(Hash, GoldenValues) {
  EXPECT_EQ(stable_hash(std::string_view("abc"), 0), 0xc8ef6554788f4268ULL);
  EXPECT_EQ(stable_hash(uint64_t{42}, 7), 0xc942f83fa34176bdULL);
  EXPECT_EQ(stable_hash(std::string_view(""), 0), 0x813f0174a2367c13ULL);
}

TEST(Split, FullFractionKeepsEverything) {
  const Table t = numbered(100);
  const Split s = hash_split(t, SplitSpec{1.0, 3, false});
  EXPECT_EQ(s.train.size(), 100u);
  EXPECT_TRUE(s.valid.empty());
  EXPECT_TRUE(hash_split(t, SplitSpec{0.0, 3, false}).train.empty());
}

TEST(Split, FractionWithinThreeSigma) {
  const Table t = numbered(10000);
  const Split s = hash_split(t, SplitSpec{0.8, 1, false});
  const double sigma = std::sqrt(10000 * 0.8 * 0.2);
  EXPECT_NEAR(static_cast<double>(s.train.size()), 8000.0, 3 * sigma);
  EXPECT_EQ(s.train.size() + s.valid.size(), 10000u);
  EXPECT_TRUE(std::is_sorted(s.train.begin(), s.train.end()));
}

TEST(Split, DeterministicAndSeeded) {
  const Table t = numbered(500);
  const Split a = hash_split(t, SplitSpec{0.5, 9, false});
  const Split b = hash_split(t, SplitSpec{0.5, 9, false});
  const Split c = hash_split(t, SplitSpec{0.5, 10, false});
  EXPECT_EQ(a.train, b.train);
  EXPECT_NE(a.train, c.train);
  EXPECT_FEDSCS_ERROR(hash_split(t, SplitSpec{0.5, 0, true}), ErrorCode::kConfig);
}

TEST(Split, IdKeyKeepsGroupsTogether) {
  BlobSpec spec;
  spec.rows = 400;
  spec.ids = 20;
  const Table t = make_blobs(spec);
  const Split s = hash_split(t, SplitSpec{0.5, 2, true});
  std::set<std::string> train_ids;
  for (auto i : s.train) train_ids.insert(t.ids[i]);
  for (auto i : s.valid) EXPECT_FALSE(train_ids.count(t.ids[i]));
}

void expect_disjoint_cover(const Partition& p, std::size_t n) {
  std::vector<int> seen(n, 0);
  for (const auto& rows : p.rows) {
    EXPECT_FALSE(rows.empty());
    EXPECT_TRUE(std::is_sorted(rows.begin(), rows.end()));
    for (auto r : rows) ++seen[r];
  }
  for (int s : seen) EXPECT_EQ(s, 1);
}

TEST(Partition, ById) {
  BlobSpec spec;
  spec.rows = 300;
  spec.ids = 8;
  const Table t = make_blobs(spec);
  const auto p = partition_clients(t, parse_partition("id", 0));
  EXPECT_EQ(p.rows.size(), 8u);
  expect_disjoint_cover(p, 300);
  for (std::size_t c = 0; c < p.rows.size(); ++c) {
    for (auto r : p.rows[c]) EXPECT_EQ(t.ids[r], p.names[c]);
  }
  EXPECT_FEDSCS_ERROR(partition_clients(numbered(5), parse_partition("id", 0)),
                      ErrorCode::kPartition);
}

TEST(Partition, IidOneIsIdentity) {
  const auto p = partition_clients(numbered(40), parse_partition("iid:1", 5));
  ASSERT_EQ(p.rows.size(), 1u);
  std::vector<std::size_t> all(40);
  std::iota(all.begin(), all.end(), std::size_t{0});
  EXPECT_EQ(p.rows[0], all);
}

TEST(Partition, IidBalanced) {
  const auto p = partition_clients(numbered(1003), parse_partition("iid:8", 5));
  expect_disjoint_cover(p, 1003);
  for (const auto& rows : p.rows) EXPECT_NEAR(static_cast<double>(rows.size()), 1003 / 8.0, 1.0);
}

TEST(Partition, SmallAlphaSkewsLabels) {
  BlobSpec spec;
  spec.rows = 4000;
  spec.classes = 4;
  const Table t = make_blobs(spec);
  const auto p = partition_clients(t, parse_partition("skew:4:0.1", 3));
  expect_disjoint_cover(p, 4000);
  // Chi-square of the client x class table against independence.
  std::vector<std::vector<double>> counts(4, std::vector<double>(4, 0.0));
  for (std::size_t c = 0; c < 4; ++c) {
    for (auto r : p.rows[c]) counts[c][t.data.labels[r]] += 1.0;
  }
  double chi2 = 0.0;
  for (std::size_t c = 0; c < 4; ++c) {
    double rowsum = std::accumulate(counts[c].begin(), counts[c].end(), 0.0);
    for (std::size_t k = 0; k < 4; ++k) {
      double colsum = 0.0;
      for (std::size_t j = 0; j < 4; ++j) colsum += counts[j][k];
      const double expected = rowsum * colsum / 4000.0;
      if (expected > 0) chi2 += (counts[c][k] - expected) * (counts[c][k] - expected) / expected;
    }
  }
  // 9 degrees of freedom; the 0.999 quantile is about 27.9.
  EXPECT_GT(chi2, 27.9);
}

TEST(Partition, Errors) {
  EXPECT_FEDSCS_ERROR(partition_clients(numbered(3), parse_partition("iid:4", 0)),
                      ErrorCode::kPartition);
  EXPECT_FEDSCS_ERROR(parse_partition("bogus", 0), ErrorCode::kConfig);
  EXPECT_FEDSCS_ERROR(parse_partition("iid:x", 0), ErrorCode::kConfig);
  EXPECT_EQ(format_partition(parse_partition("skew:4:0.25", 0)), "skew:4:0.25");
}

TEST(Blobs, DeterministicAndWellFormed) {
  BlobSpec spec;
  spec.rows = 200;
  spec.discrete = 2;
  const Table a = make_blobs(spec), b = make_blobs(spec);
  EXPECT_EQ(a.data.features, b.data.features);
  EXPECT_EQ(a.data.labels, b.data.labels);
  EXPECT_NO_THROW(a.data.validate());
  for (std::size_t i = 0; i < a.data.n_rows(); ++i) {
    EXPECT_EQ(a.data.features(i, 0), std::round(a.data.features(i, 0)));
  }
}

}  // namespace
}  // namespace fedscs::data
