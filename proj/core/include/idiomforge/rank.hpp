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

#ifndef IDIOMFORGE_RANK_HPP_
#define IDIOMFORGE_RANK_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "idiomforge/align.hpp"
#include "idiomforge/extract.hpp"
#include "idiomforge/scs.hpp"

namespace idiomforge {

inline constexpr std::size_t kDefaultTopK = 100;

// Posterior mass at each API's vocabulary index, keeping only the `top_k`
// most probable APIs (ties broken by lower index).
SparseVector query_vector(std::span<const ApiScore> posterior, std::size_t dims,
                          std::size_t top_k = kDefaultTopK);

// 0 when either side is zero.  Throws Error on a dimension mismatch.
double cosine(const SparseVector& a, const SparseVector& b);

struct Hit {
  std::uint32_t group = 0;  // position in ScsIndex::groups()
  double score = 0.0;
  friend bool operator==(const Hit&, const Hit&) = default;
};

// Scores every group, or only the groups naming `tracer`, and returns the
// best `m` by score, then frequency (descending), then canonical form.
std::vector<Hit> retrieve(const SparseVector& qv, const ScsIndex& index, std::size_t m,
                          std::optional<ApiId> tracer = std::nullopt);

}  // namespace idiomforge

#endif  // IDIOMFORGE_RANK_HPP_
