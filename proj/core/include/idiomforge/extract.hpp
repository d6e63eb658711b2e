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

#ifndef IDIOMFORGE_EXTRACT_HPP_
#define IDIOMFORGE_EXTRACT_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "idiomforge/minilang.hpp"
#include "idiomforge/registry.hpp"
#include "idiomforge/scs.hpp"

namespace idiomforge {

class IndexFileError : public Error {
 public:
  using Error::Error;
};

struct SourceRef {
  std::string file;
  std::string method;  // Class.method
  friend auto operator<=>(const SourceRef&, const SourceRef&) = default;
};

struct ScsGroup {
  std::string key;  // canonical form
  Scs scs;
  std::uint64_t frequency = 0;
  std::string root_type;
  SparseVector vector;
  SourceRef source;  // smallest (file, method) that produced the group
  friend bool operator==(const ScsGroup&, const ScsGroup&) = default;
};

// Grouped, counted SCSs plus the tracer index.  Groups are ordered by key.
class ScsIndex {
 public:
  ScsIndex() = default;
  // Keys must be unique.
  ScsIndex(std::size_t dims, std::vector<ScsGroup> groups);

  std::size_t dims() const { return dims_; }
  const std::vector<ScsGroup>& groups() const { return groups_; }
  std::size_t size() const { return groups_.size(); }
  bool empty() const { return groups_.empty(); }
  const ScsGroup* find(std::string_view key) const;

  // Groups (by position) whose SCS names `api` as an action or creation.
  std::span<const std::uint32_t> tracer(ApiId api) const;
  const std::map<ApiId, std::vector<std::uint32_t>>& tracers() const { return tracers_; }

  // Throws IndexFileError if the index does not fit `reg` (dimension or
  // vector mismatch, unknown API).
  void validate(const Registry& reg) const;

  friend bool operator==(const ScsIndex& a, const ScsIndex& b) {
    return a.dims_ == b.dims_ && a.groups_ == b.groups_;
  }

 private:
  std::size_t dims_ = 0;
  std::vector<ScsGroup> groups_;
  std::map<ApiId, std::vector<std::uint32_t>> tracers_;
};

struct NameCount {
  std::string name;
  std::uint64_t count = 0;
  friend bool operator==(const NameCount&, const NameCount&) = default;
};

// Variable names observed for the result of each creating member, sorted by
// count descending, then name.
struct NameModel {
  std::map<ApiRef, std::vector<NameCount>> by_creator;
  std::map<ApiRef, std::vector<NameCount>> by_field;

  // Candidate names for a variable initialised from `creator`.
  std::vector<std::string> candidates(const ApiRef& creator) const;
  friend bool operator==(const NameModel&, const NameModel&) = default;
};

struct ExtractedSequence {
  std::string variable;
  std::string type;
  Scs scs;  // simplified
};

// One entry per lifetime of every unaliased local of a registry type.
std::vector<ExtractedSequence> extract_method(const minilang::TypedMethod& method,
                                              const Registry& reg);

struct CorpusFile {
  std::string path;
  std::string source;
};

struct ExtractStats {
  std::size_t files = 0;
  std::size_t parsed = 0;
  std::size_t methods = 0;
  std::size_t sequences = 0;
  std::vector<std::string> failures;  // "path: message", sorted
};

// Accumulates groups and name counts.  Merging is associative and
// commutative, so partial builders can be combined in any order.
class IndexBuilder {
 public:
  void add_file(const CorpusFile& file, const Registry& reg);
  void add_sequence(const Scs& simplified, const std::string& root_type, const SourceRef& source,
                    std::uint64_t count = 1);
  void add_name(bool field, const ApiRef& creator, const std::string& name,
                std::uint64_t count = 1);
  void merge(IndexBuilder&& other);

  ScsIndex build_index(const Registry& reg) const;
  NameModel build_names() const;
  ExtractStats stats() const;

 private:
  struct Partial {
    Scs scs;
    std::uint64_t frequency = 0;
    std::string root_type;
    SourceRef source;
  };
  std::map<std::string, Partial> groups_;
  std::map<ApiRef, std::map<std::string, std::uint64_t>> creator_names_;
  std::map<ApiRef, std::map<std::string, std::uint64_t>> field_names_;
  ExtractStats stats_;
};

struct ExtractResult {
  ScsIndex index;
  NameModel names;
  ExtractStats stats;
};

// Per-file parse errors are recorded in stats, never fatal.  `threads` = 0
// picks the hardware concurrency.
ExtractResult build_index(std::span<const CorpusFile> corpus, const Registry& reg,
                          unsigned threads = 1);

// Every *.mini file under `dir`, sorted by relative path.
std::vector<CorpusFile> read_corpus(const std::filesystem::path& dir);

inline constexpr int kIndexFormatVersion = 1;
inline constexpr const char* kIndexFileName = "scs-index.jsonl";
inline constexpr const char* kNamesFileName = "names.jsonl";

void save_index(const std::filesystem::path& dir, const ScsIndex& index, const NameModel& names);
// Throws IndexFileError on missing, corrupt or version-mismatched files.
ScsIndex load_index(const std::filesystem::path& dir);
NameModel load_names(const std::filesystem::path& dir);

// JSON-lines text of each artifact, as written by save_index.
std::string index_to_jsonl(const ScsIndex& index);
std::string names_to_jsonl(const NameModel& names);
ScsIndex index_from_jsonl(std::string_view text);
NameModel names_from_jsonl(std::string_view text);

}  // namespace idiomforge

#endif  // IDIOMFORGE_EXTRACT_HPP_
