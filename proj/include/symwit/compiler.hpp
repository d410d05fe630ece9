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

#ifndef SYMWIT_COMPILER_HPP
#define SYMWIT_COMPILER_HPP

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "symwit/linalg.hpp"
#include "symwit/rational.hpp"
#include "symwit/symmetric.hpp"

namespace symwit {

/// Symmetrized Pauli product with x sigma_x, y sigma_y, z sigma_z factors
/// and identity on the remaining qubits.
struct PauliClass {
  int x = 0;
  int y = 0;
  int z = 0;
  double coefficient = 0.0;
};

/// Sum over the distinct qubit arrangements of one Pauli product.
DenseOperator class_operator(int num_qubits, int x, int y, int z);

struct PauliPolynomial {
  int num_qubits = 0;
  std::vector<PauliClass> classes;  // distinct (x, y, z) keys, nonzero coefficients

  DenseOperator realize() const;
};

/// A collective measurement direction, stored canonically: integer vectors
/// are reduced by their gcd, other directions are normalized to unit length,
/// and the first nonzero component is made positive. The zero vector is the
/// trivial setting (nothing to measure).
class Setting {
 public:
  Setting() = default;
  explicit Setting(std::array<double, 3> direction);
  /// Accepts an already canonical vector verbatim (after validation).
  static Setting from_canonical(std::array<double, 3> n);

  const std::array<double, 3>& n() const { return n_; }
  bool is_trivial() const { return n_[0] == 0.0 && n_[1] == 0.0 && n_[2] == 0.0; }
  bool is_integer() const;
  double norm() const;
  std::array<double, 3> unit() const;
  /// "x", "x+y-z", "2x-z" for integer settings; a bracketed triple otherwise.
  std::string label() const;

  /// Component-wise equality within 1e-12.
  bool same_as(const Setting& other) const;

 private:
  std::array<double, 3> n_{0.0, 0.0, 0.0};
};

/// coefficient * (scale * n_hat . sigma + identity_weight * 1)^(tensor N).
/// scale is kept non-negative; trivial terms have scale 0 and weight 1.
struct LocalTerm {
  double coefficient = 0.0;
  Setting setting;
  double scale = 0.0;
  double identity_weight = 1.0;
  std::optional<Rational> exact;  // coefficient as a fraction when known

  /// Normalizes the sign conventions above.
  static LocalTerm make(int num_qubits, double coefficient, std::array<double, 3> direction, double identity_weight);

  Matrix single_qubit() const;
};

class Schedule {
 public:
  Schedule() = default;
  explicit Schedule(int num_qubits) : num_qubits_(num_qubits) {}

  int num_qubits() const { return num_qubits_; }
  const std::vector<LocalTerm>& terms() const { return terms_; }
  /// Nontrivial settings in first-use order.
  const std::vector<Setting>& settings() const { return settings_; }

  /// Adds a term, merging with an existing one of equal setting, scale and
  /// identity weight.
  void add(const LocalTerm& term);
  void add(const Schedule& other, double factor = 1.0);
  void add(const Schedule& other, const Rational& factor);
  /// Drops terms whose operator-norm bound falls below `threshold`, then
  /// rebuilds the setting list.
  void prune(double threshold);

  DenseOperator reconstruct() const;
  std::string to_json() const;
  static Schedule from_json(std::string_view text);

 private:
  void rebuild_settings();

  int num_qubits_ = 0;
  std::vector<LocalTerm> terms_;
  std::vector<Setting> settings_;
};

/// Hilbert-Schmidt projection onto the symmetrized Pauli classes. Rejects
/// non-Hermitian or non-permutation-invariant input.
PauliPolynomial pauli_decompose(const DenseOperator& a);

/// Tensor-power expansion of coefficient * class_operator via the sign-vector
/// identities: 2^(N-1) terms, or one term for the identity class.
std::vector<LocalTerm> symmetrized_product_to_powers(int num_qubits, const PauliClass& cls);

/// Right-hand side of the sign-vector identity for arbitrary single-qubit
/// factors B_1..B_N: 2^-(N-1) sum over s with s_1...s_N = +1 of
/// (s_1 B_1 + ... + s_N B_N)^(tensor N) for odd N, and of
/// s_1 (B_1 + s_2 B_2 + ... + s_N B_N)^(tensor N) for even N. Equals the sum
/// of B_p(1) (x) ... (x) B_p(N) over all N! permutations p.
DenseOperator sign_vector_expansion(std::span<const Matrix> factors);

/// Full pipeline: decompose, expand every class, merge terms per setting.
Schedule compile(const DenseOperator& a);

struct SettingsBound {
  long long closed_form;  // (2/3)N^3 + N^2 + (4/3)N
  long long enumerated;   // primitive directions up to sign with |n|_1 <= N
};
SettingsBound settings_upper_bound(int num_qubits);

/// Signed sum of arrangements with an even number of sigma_b factors and
/// sigma_a elsewhere; the sign is (-1)^(k/2) for k sigma_b factors.
/// An empty `a` stands for the identity.
DenseOperator mermin_operator(int num_qubits, const std::optional<CollectiveAxis>& a, const CollectiveAxis& b);

/// The N-setting trigonometric decomposition of mermin_operator.
Schedule mermin_decomposition(int num_qubits, const std::optional<CollectiveAxis>& a, const CollectiveAxis& b);

/// Hand-optimized decompositions: "D63" for 64|D_6^(3)><D_6^(3)|, "D42" for
/// 16|D_4^(2)><D_4^(2)|.
Schedule canned_decomposition(std::string_view name);

}  // namespace symwit

#endif  // SYMWIT_COMPILER_HPP
