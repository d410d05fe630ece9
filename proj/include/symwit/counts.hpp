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

#ifndef SYMWIT_COUNTS_HPP
#define SYMWIT_COUNTS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "symwit/compiler.hpp"
#include "symwit/linalg.hpp"

namespace symwit {

/// One line of a counts file. outcomes[k] is '+' or '-' for the +1 / -1
/// eigenvalue of n_hat . sigma on qubit k.
struct CountsRecord {
  std::array<double, 3> setting{};
  std::string outcomes;
  std::uint64_t count = 0;
};

struct CountsDataset {
  int num_qubits = 0;
  std::vector<CountsRecord> records;

  /// Newline-delimited JSON, one {"setting":[..],"outcomes":"+-..","count":n}
  /// object per line.
  static CountsDataset from_ndjson(std::string_view text);
  std::string to_ndjson() const;
};

/// Flips the outcomes of every qubit marked '-' in `sign_map`.
CountsDataset apply_sign_map(const CountsDataset& data, const std::string& sign_map);

/// Samples `shots` outcomes per schedule setting from the Born distribution
/// of rho. Setting i uses the generator seeded with seed + i.
CountsDataset simulate_counts(const DenseOperator& rho, const Schedule& schedule, std::uint64_t shots, std::uint64_t seed);

struct TermEstimate {
  std::string setting;  // empty for the identity term
  double coefficient = 0.0;
  double estimator = 0.0;
  double contribution = 0.0;
};

struct EvaluationResult {
  double witness_value = 0.0;
  double standard_error = 0.0;
  std::optional<double> fidelity_bound;
  std::optional<double> fidelity_bound_error;
  std::vector<TermEstimate> terms;

  std::string to_json() const;
};

struct EvaluationOptions {
  double scale = 1.0;  // multiplies every coefficient of the schedule
  int bootstrap = 1000;
  std::uint64_t seed = 1;
  std::optional<double> alpha;  // both set: report the fidelity bound
  std::optional<double> lambda_sq;
};

EvaluationResult evaluate_counts(const Schedule& schedule, const CountsDataset& data, const EvaluationOptions& options = {});

/// Standard deviation of the schedule value over `resamples` multinomial
/// resamples of each setting's counts; resample b is seeded with seed + b.
double bootstrap_error(const CountsDataset& data, const Schedule& schedule, double scale, int resamples, std::uint64_t seed);

/// Infinite-statistics limit of evaluate_counts: every setting's outcome
/// distribution taken from rho exactly.
double expected_schedule_value(const Schedule& schedule, const DenseOperator& rho);

}  // namespace symwit

#endif  // SYMWIT_COUNTS_HPP
