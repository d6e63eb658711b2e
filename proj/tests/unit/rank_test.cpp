/* Copyright 2026 The idiom-forge Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "idiomforge/rank.hpp"
#include "test_support.hpp"

namespace idiomforge {
namespace {

using testing::fixture_registry;

TEST(QueryVector, KeepsPosteriorWeights) {
  std::vector<ApiScore> post{{ApiId{4}, 0.1}, {ApiId{2}, 0.05}};
  auto v = query_vector(post, 10);
  ASSERT_EQ(v.nnz(), 2u);
  EXPECT_EQ(v.get(4), 0.1);
  EXPECT_EQ(v.get(2), 0.05);
  EXPECT_TRUE(query_vector({}, 10).is_zero());
}

TEST(QueryVector, TruncatesToTopK) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  std::vector<ApiScore> post;
  for (std::uint32_t i = 0; i < 150; ++i) post.push_back({ApiId{i}, d(rng)});
  auto v = query_vector(post, 200, 100);
  ASSERT_EQ(v.nnz(), 100u);
  auto sorted = post;
  std::sort(sorted.begin(), sorted.end(), [](auto& a, auto& b) { return a.prob > b.prob; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    EXPECT_EQ(v.get(sorted[i].api.value) != 0.0, i < 100) << i;
  }
}

TEST(Cosine, Basics) {
  SparseVector a(5, {{0, 0.1}, {1, 0.05}});
  SparseVector b(5, {{0, 1.0}, {1, 1.0}, {2, 1.0}});
  EXPECT_NEAR(cosine(a, b), 0.15 / (std::sqrt(0.0125) * std::sqrt(3.0)), 1e-15);
  EXPECT_NEAR(cosine(a, b), 0.7746, 1e-4);
  EXPECT_NEAR(cosine(a, a), 1.0, 1e-12);
  EXPECT_EQ(cosine(a, SparseVector(5, {{3, 1.0}})), 0.0);
  EXPECT_EQ(cosine(a, SparseVector(5)), 0.0);
  EXPECT_EQ(cosine(a, b), cosine(b, a));
  EXPECT_THROW(cosine(a, SparseVector(6)), Error);
}

ScsIndex fixture_index() {
  const auto& reg = fixture_registry();
  return build_index(read_corpus(testing::fixture_dir() / "corpus"), reg).index;
}

TEST(Retrieve, RegexMatchGroupRanksFirst) {
  const auto& reg = fixture_registry();
  const auto index = fixture_index();
  SparseVector qv(reg.dims(), {{testing::id(reg, "Regex.Match(string)").value, 0.3},
                               {testing::id(reg, "get(Match.Success)").value, 0.2},
                               {testing::id(reg, "get(Match.Groups)").value, 0.1}});
  auto hits = retrieve(qv, index, 3);
  ASSERT_FALSE(hits.empty());
  EXPECT_EQ(index.groups()[hits[0].group].key,
            "Regex.Match(string);if(get(Match.Success)){get(Match.Groups)}else{}");
}

TEST(Retrieve, ZeroQueryFallsBackToFrequency) {
  const auto index = fixture_index();
  auto hits = retrieve(SparseVector(index.dims()), index, index.size());
  ASSERT_EQ(hits.size(), index.size());
  for (std::size_t i = 1; i < hits.size(); ++i) {
    EXPECT_EQ(hits[i].score, 0.0);
    const auto& a = index.groups()[hits[i - 1].group];
    const auto& b = index.groups()[hits[i].group];
    EXPECT_TRUE(a.frequency > b.frequency || (a.frequency == b.frequency && a.key < b.key));
  }
}

TEST(Retrieve, TracerRestrictsCandidates) {
  const auto& reg = fixture_registry();
  const auto index = fixture_index();
  const ApiId tracer = testing::id(reg, "Regex.Match(string)");
  SparseVector qv(reg.dims(), {{testing::id(reg, "StreamReader.Close()").value, 1.0}});
  auto hits = retrieve(qv, index, 100, tracer);
  ASSERT_FALSE(hits.empty());
  for (const auto& h : hits) {
    auto apis = index.groups()[h.group].scs.apis();
    EXPECT_NE(std::find(apis.begin(), apis.end(), reg.api(tracer)), apis.end());
  }
  EXPECT_TRUE(retrieve(qv, ScsIndex(reg.dims(), {}), 5).empty());
}

TEST(Retrieve, ScaleInvariantOrder) {
  const auto& reg = fixture_registry();
  const auto index = fixture_index();
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> d(0.01, 1.0);
  std::vector<std::pair<std::uint32_t, double>> e;
  for (std::uint32_t i = 0; i < reg.dims(); i += 3) e.emplace_back(i, d(rng));
  SparseVector qv(reg.dims(), e);
  auto scaled = e;
  for (auto& x : scaled) x.second *= 0.37;
  auto a = retrieve(qv, index, index.size());
  auto b = retrieve(SparseVector(reg.dims(), scaled), index, index.size());
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].group, b[i].group) << i;
}

TEST(Retrieve, EqualsBruteForceOracle) {
  const std::size_t types = 50;
  const std::size_t members = 20;
  const Registry reg = testing::synthetic_registry(types, members);
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const auto index = testing::random_index(reg, 1000, types, members, 4, rng);
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(reg.dims() - 1));
    std::uniform_real_distribution<double> w(0.0, 1.0);
    std::map<std::uint32_t, double> q;
    for (int k = 0; k < 30; ++k) q[pick(rng)] = w(rng);
    SparseVector qv(reg.dims(), {q.begin(), q.end()});
    EXPECT_EQ(retrieve(qv, index, 10), testing::brute_force_retrieve(qv, index, 10)) << trial;
  }
}

}  // namespace
}  // namespace idiomforge
