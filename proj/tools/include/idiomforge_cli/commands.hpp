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

#ifndef IDIOMFORGE_CLI_COMMANDS_HPP_
#define IDIOMFORGE_CLI_COMMANDS_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace idiomforge::cli {

struct ExtractArgs {
  std::filesystem::path corpus;
  std::filesystem::path registry;
  std::filesystem::path out;
  unsigned threads = 1;
};

struct TrainArgs {
  std::filesystem::path clicks;
  std::filesystem::path docs;
  std::filesystem::path registry;
  std::filesystem::path out;
  int iters = 10;
  double tolerance = 1e-6;
  double add_k = 0.0;
};

struct QueryArgs {
  std::filesystem::path model;
  std::filesystem::path index;
  std::filesystem::path registry;
  std::string text;
  std::size_t top = 10;
  int depth = 3;
  std::size_t top_k = 100;
  bool idiomatic_bool = false;
  std::filesystem::path json;  // optional result file
};

struct EvalArgs {
  std::filesystem::path cases;
  std::filesystem::path model;
  std::filesystem::path index;
  std::filesystem::path registry;
  int depth = 3;
};

// Each returns the process exit status.  Results go to `out`, progress and
// errors to `err`.
int cmd_extract(const ExtractArgs& args, std::ostream& out, std::ostream& err);
int cmd_train(const TrainArgs& args, std::ostream& out, std::ostream& err);
int cmd_query(const QueryArgs& args, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err);

// Parses `argv` and dispatches to a subcommand.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace idiomforge::cli

#endif  // IDIOMFORGE_CLI_COMMANDS_HPP_
