// Copyright 2026 The symwit Authors
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

#ifndef SYMWIT_CONFIG_HPP
#define SYMWIT_CONFIG_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace symwit {

/// Solver tolerances and seeds. Read from flat "key = value" text; '#'
/// starts a comment.
struct SolverConfig {
  double barrier_tol = 1e-6;  // PPT duality gap
  double cut_tol = 1e-6;      // cutting-plane model gap
  int seesaw_restarts = 50;
  double seesaw_tol = 1e-12;
  int seesaw_max_iterations = 2000;
  std::uint64_t seed = 1;
  /// One '+' or '-' per qubit; '-' flips recorded outcomes of that qubit.
  std::string sign_map;

  static SolverConfig parse(std::string_view text);
  static SolverConfig load(const std::string& path);
  std::string to_text() const;
};

}  // namespace symwit

#endif  // SYMWIT_CONFIG_HPP
