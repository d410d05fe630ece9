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

#ifndef SYMWIT_LINALG_HPP
#define SYMWIT_LINALG_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace symwit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Raised when a numerical routine cannot produce a trustworthy answer
/// (non-convergence, infeasibility, loss of definiteness).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr int kMaxQubits = 12;

/// Dimension of the Hilbert space of `num_qubits` qubits.
inline Eigen::Index qubit_dim(int num_qubits) { return Eigen::Index{1} << num_qubits; }

/// Complex operator on N qubits, stored densely.
///
/// Qubit 0 is the most significant bit of the computational-basis index, so
/// kron(a, b) places `a` on the leading qubits.
class DenseOperator {
 public:
  DenseOperator() = default;
  DenseOperator(int num_qubits, Matrix entries);

  static DenseOperator identity(int num_qubits);
  static DenseOperator zero(int num_qubits);
  /// Single-qubit operator from a 2x2 matrix.
  static DenseOperator single(const Matrix& m2);

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }
  Complex operator()(Eigen::Index r, Eigen::Index c) const { return entries_(r, c); }

  DenseOperator adjoint() const;
  DenseOperator transpose() const;
  Complex trace() const { return entries_.trace(); }
  double max_abs() const;
  /// max |A - A^dagger| entrywise.
  double hermiticity_defect() const;
  bool is_hermitian(double tol = kHermitianTolerance) const { return hermiticity_defect() < tol; }

  /// Checks hermiticity (throws std::invalid_argument with the defect) and
  /// returns (A + A^dagger)/2.
  DenseOperator hermitian_part_checked() const;

  DenseOperator& operator+=(const DenseOperator& o);
  DenseOperator& operator-=(const DenseOperator& o);
  DenseOperator& operator*=(Complex s);

  friend DenseOperator operator+(DenseOperator a, const DenseOperator& b) { return a += b; }
  friend DenseOperator operator-(DenseOperator a, const DenseOperator& b) { return a -= b; }
  friend DenseOperator operator*(DenseOperator a, Complex s) { return a *= s; }
  friend DenseOperator operator*(Complex s, DenseOperator a) { return a *= s; }
  friend DenseOperator operator*(const DenseOperator& a, const DenseOperator& b);

 private:
  int num_qubits_ = 0;
  Matrix entries_;
};

/// Normalized pure state on N qubits.
class StateVector {
 public:
  StateVector() = default;
  /// Rejects vectors whose norm differs from one by more than 1e-12.
  StateVector(int num_qubits, Vector amplitudes);
  /// Normalizes `amplitudes` first; rejects the zero vector.
  static StateVector normalized(int num_qubits, Vector amplitudes);
  static StateVector basis(int num_qubits, std::uint64_t index);

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  const Vector& amplitudes() const { return amplitudes_; }
  Complex operator[](Eigen::Index i) const { return amplitudes_(i); }

  DenseOperator projector() const;
  /// <psi|A|psi>
  Complex expectation(const DenseOperator& a) const;

 private:
  int num_qubits_ = 0;
  Vector amplitudes_;
};

namespace pauli {
Matrix identity();
Matrix x();
Matrix y();
Matrix z();
/// n_x X + n_y Y + n_z Z + w I.
Matrix combination(double nx, double ny, double nz, double w = 0.0);
}  // namespace pauli

DenseOperator kron(const DenseOperator& a, const DenseOperator& b);
/// m^{(x)N} for a 2x2 matrix m.
DenseOperator tensor_power(const Matrix& m2, int n);
/// The operator `single` acting on `qubit` of an N-qubit register.
DenseOperator embed(const Matrix& single, int qubit, int num_qubits);

/// Transposes the tensor factors listed in `subset` (0-based qubit indices).
DenseOperator partial_transpose(const DenseOperator& a, std::span<const int> subset);
/// Traces out every qubit not listed in `keep`; the kept qubits retain their
/// relative order.
DenseOperator partial_trace(const DenseOperator& a, std::span<const int> keep);

/// Largest squared Schmidt coefficient over all 2^{N-1}-1 bipartitions.
double schmidt_max_sq(const StateVector& psi);

/// Bit mask of the qubit subset in basis-index convention (qubit 0 = MSB).
std::uint64_t qubit_mask(std::span<const int> qubits, int num_qubits);

}  // namespace symwit

#endif  // SYMWIT_LINALG_HPP
