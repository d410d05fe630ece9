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

#ifndef SYMWIT_LP_HPP
#define SYMWIT_LP_HPP

#include <string>

#include <Eigen/Dense>

namespace symwit {

/// minimize f^T x  subject to  G x >= h.
///
/// Meant for few variables and many rows (cutting-plane master problems).
/// Box bounds and equalities are expressed as rows.
struct LinearProgram {
  Eigen::VectorXd f;
  Eigen::MatrixXd g;
  Eigen::VectorXd h;

  void add_row(const Eigen::RowVectorXd& row, double rhs);
  void add_equality(const Eigen::RowVectorXd& row, double rhs);
  void add_bounds(Eigen::Index var, double lo, double hi);
};

struct LpSolution {
  enum class Status { optimal, infeasible, unbounded, iteration_limit };
  Status status = Status::iteration_limit;
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
};

std::string to_string(LpSolution::Status s);

LpSolution solve(const LinearProgram& lp, int max_iterations = 100000);

}  // namespace symwit

#endif  // SYMWIT_LP_HPP
