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

#include "idiomforge/rank.hpp"

#include <algorithm>
#include <numeric>

namespace idiomforge {

SparseVector query_vector(std::span<const ApiScore> posterior, std::size_t dims,
                          std::size_t top_k) {
  std::vector<ApiScore> kept;
  kept.reserve(posterior.size());
  for (const auto& s : posterior) {
    if (s.prob > 0.0 && s.api.value < dims) kept.push_back(s);
  }
  auto better = [](const ApiScore& a, const ApiScore& b) {
    return a.prob != b.prob ? a.prob > b.prob : a.api < b.api;
  };
  if (kept.size() > top_k) {
    std::nth_element(kept.begin(), kept.begin() + static_cast<std::ptrdiff_t>(top_k), kept.end(),
                     better);
    kept.resize(top_k);
  }
  std::vector<std::pair<std::uint32_t, double>> entries;
  entries.reserve(kept.size());
  for (const auto& s : kept) entries.emplace_back(s.api.value, s.prob);
  return SparseVector(dims, std::move(entries));
}

namespace {

double dot(const SparseVector& a, const SparseVector& b) {
  const auto& x = a.entries();
  const auto& y = b.entries();
  double sum = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i].first < y[j].first) {
      ++i;
    } else if (y[j].first < x[i].first) {
      ++j;
    } else {
      sum += x[i++].second * y[j++].second;
    }
  }
  return sum;
}

}  // namespace

double cosine(const SparseVector& a, const SparseVector& b) {
  if (a.dims() != b.dims()) {
    throw Error("cosine: dimension mismatch (" + std::to_string(a.dims()) + " vs " +
                std::to_string(b.dims()) + ")");
  }
  if (a.is_zero() || b.is_zero()) return 0.0;
  return dot(a, b) / (a.norm() * b.norm());
}

std::vector<Hit> retrieve(const SparseVector& qv, const ScsIndex& index, std::size_t m,
                          std::optional<ApiId> tracer) {
  const auto& groups = index.groups();
  if (groups.empty() || m == 0) return {};
  if (qv.dims() != index.dims()) {
    throw Error("retrieve: query vector has " + std::to_string(qv.dims()) +
                " dimensions, index has " + std::to_string(index.dims()));
  }

  std::vector<std::uint32_t> candidates;
  if (tracer) {
    auto t = index.tracer(*tracer);
    candidates.assign(t.begin(), t.end());
  } else {
    candidates.resize(groups.size());
    std::iota(candidates.begin(), candidates.end(), 0u);
  }

  // Dense lookup of the query weights.  Products are accumulated in index
  // order, the same order as a merge join, so scores match cosine() exactly.
  std::vector<double> dense(qv.dims(), 0.0);
  for (const auto& [i, w] : qv.entries()) dense[i] = w;
  const double qn = qv.norm();

  std::vector<Hit> hits;
  hits.reserve(candidates.size());
  for (auto g : candidates) {
    const auto& v = groups[g].vector;
    double score = 0.0;
    if (!qv.is_zero() && !v.is_zero()) {
      double sum = 0.0;
      for (const auto& [i, w] : v.entries()) {
        const double q = dense[i];
        if (q != 0.0) sum += q * w;
      }
      score = sum / (qn * v.norm());
    }
    hits.push_back({g, score});
  }

  auto better = [&](const Hit& a, const Hit& b) {
    if (a.score != b.score) return a.score > b.score;
    const auto& ga = groups[a.group];
    const auto& gb = groups[b.group];
    if (ga.frequency != gb.frequency) return ga.frequency > gb.frequency;
    return ga.key < gb.key;
  };
  const std::size_t n = std::min(m, hits.size());
  std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(n), hits.end(),
                    better);
  hits.resize(n);
  return hits;
}

}  // namespace idiomforge
