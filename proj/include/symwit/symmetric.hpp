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

#ifndef SYMWIT_SYMMETRIC_HPP
#define SYMWIT_SYMMETRIC_HPP

#include <array>
#include <span>
#include <string>
#include <vector>

#include "symwit/linalg.hpp"

namespace symwit {

/// |D_N^(m)>: N qubits with m excitations (|1>s), symmetrized.
struct DickeLabel {
  int num_qubits = 0;
  int excitations = 0;
};

StateVector dicke(DickeLabel label);
inline StateVector dicke(int n, int m) { return dicke(DickeLabel{n, m}); }

/// Direction of a collective spin component; x, y, z or any nonzero real
/// 3-vector (not normalized).
class CollectiveAxis {
 public:
  static CollectiveAxis x() { return CollectiveAxis({1.0, 0.0, 0.0}); }
  static CollectiveAxis y() { return CollectiveAxis({0.0, 1.0, 0.0}); }
  static CollectiveAxis z() { return CollectiveAxis({0.0, 0.0, 1.0}); }
  /// Parses "x", "y" or "z".
  static CollectiveAxis parse(const std::string& name);

  explicit CollectiveAxis(std::array<double, 3> direction);

  const std::array<double, 3>& direction() const { return direction_; }
  /// d . sigma as a 2x2 matrix.
  Matrix pauli() const;

 private:
  std::array<double, 3> direction_;
};

/// J_a = (1/2) sum_k (a . sigma)^(k).
DenseOperator collective_j(int num_qubits, const CollectiveAxis& axis);

/// (J_a - shift)^power, built in the eigenbasis of a . sigma.
DenseOperator collective_j_power(int num_qubits, const CollectiveAxis& axis, int power, double shift = 0.0);

/// Conjugates `a` by the qubit relabeling in which qubit q moves to
/// position perm[q] (0-based).
DenseOperator permute_qubits(const DenseOperator& a, std::span<const int> perm);
StateVector permute_qubits(const StateVector& psi, std::span<const int> perm);

/// Average of P A P^dagger over all qubit permutations.
DenseOperator symmetrize(const DenseOperator& a);

/// True iff every adjacent transposition leaves `a` fixed within `tol`.
bool is_permutation_invariant(const DenseOperator& a, double tol = 1e-10);

}  // namespace symwit

#endif  // SYMWIT_SYMMETRIC_HPP
