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

#include "symwit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "symwit/spectral.hpp"

namespace symwit {
namespace {

void check_qubit_count(int num_qubits) {
  if (num_qubits < 0 || num_qubits > kMaxQubits) {
    throw std::invalid_argument("qubit count " + std::to_string(num_qubits) + " outside [0, " +
                                std::to_string(kMaxQubits) + "]");
  }
}

void check_same_shape(const DenseOperator& a, const DenseOperator& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw std::invalid_argument("operator qubit counts differ: " + std::to_string(a.num_qubits()) + " vs " +
                                std::to_string(b.num_qubits()));
  }
}

// Scatters the low `bits.size()` bits of `compact` onto the given positions.
std::uint64_t deposit(std::uint64_t compact, const std::vector<int>& positions) {
  std::uint64_t out = 0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (compact >> (positions.size() - 1 - i) & 1u) out |= std::uint64_t{1} << positions[i];
  }
  return out;
}

std::vector<int> sorted_unique_checked(std::span<const int> qubits, int n, const char* what) {
  std::vector<int> out(qubits.begin(), qubits.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (int q : out) {
    if (q < 0 || q >= n) {
      throw std::invalid_argument(std::string(what) + ": qubit index " + std::to_string(q) + " out of range [0, " +
                                  std::to_string(n) + ")");
    }
  }
  return out;
}

}  // namespace

DenseOperator::DenseOperator(int num_qubits, Matrix entries) : num_qubits_(num_qubits), entries_(std::move(entries)) {
  check_qubit_count(num_qubits);
  const Eigen::Index d = qubit_dim(num_qubits);
  if (entries_.rows() != d || entries_.cols() != d) {
    std::ostringstream msg;
    msg << "operator on " << num_qubits << " qubits needs dimension " << d << ", got " << entries_.rows() << "x"
        << entries_.cols();
    throw std::invalid_argument(msg.str());
  }
}

DenseOperator DenseOperator::identity(int num_qubits) {
  check_qubit_count(num_qubits);
  const Eigen::Index d = qubit_dim(num_qubits);
  return DenseOperator(num_qubits, Matrix::Identity(d, d));
}

DenseOperator DenseOperator::zero(int num_qubits) {
  check_qubit_count(num_qubits);
  const Eigen::Index d = qubit_dim(num_qubits);
  return DenseOperator(num_qubits, Matrix::Zero(d, d));
}

DenseOperator DenseOperator::single(const Matrix& m2) { return DenseOperator(1, m2); }

DenseOperator DenseOperator::adjoint() const { return DenseOperator(num_qubits_, entries_.adjoint()); }

DenseOperator DenseOperator::transpose() const { return DenseOperator(num_qubits_, entries_.transpose()); }

double DenseOperator::max_abs() const { return entries_.size() == 0 ? 0.0 : entries_.cwiseAbs().maxCoeff(); }

double DenseOperator::hermiticity_defect() const {
  return entries_.size() == 0 ? 0.0 : (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

DenseOperator DenseOperator::hermitian_part_checked() const {
  const double defect = hermiticity_defect();
  if (!(defect < kHermitianTolerance)) {
    std::ostringstream msg;
    msg << "operator is not Hermitian: max |A - A^dagger| = " << defect;
    throw std::invalid_argument(msg.str());
  }
  return DenseOperator(num_qubits_, 0.5 * (entries_ + entries_.adjoint()));
}

DenseOperator& DenseOperator::operator+=(const DenseOperator& o) {
  check_same_shape(*this, o);
  entries_ += o.entries_;
  return *this;
}

DenseOperator& DenseOperator::operator-=(const DenseOperator& o) {
  check_same_shape(*this, o);
  entries_ -= o.entries_;
  return *this;
}

DenseOperator& DenseOperator::operator*=(Complex s) {
  entries_ *= s;
  return *this;
}

DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
  check_same_shape(a, b);
  return DenseOperator(a.num_qubits(), a.matrix() * b.matrix());
}

StateVector::StateVector(int num_qubits, Vector amplitudes) : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
  check_qubit_count(num_qubits);
  if (amplitudes_.size() != qubit_dim(num_qubits)) {
    throw std::invalid_argument("state on " + std::to_string(num_qubits) + " qubits needs " +
                                std::to_string(qubit_dim(num_qubits)) + " amplitudes, got " +
                                std::to_string(amplitudes_.size()));
  }
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "state vector is not normalized: norm = " << norm;
    throw std::invalid_argument(msg.str());
  }
}

StateVector StateVector::normalized(int num_qubits, Vector amplitudes) {
  const double norm = amplitudes.norm();
  if (norm == 0.0) throw std::invalid_argument("cannot normalize the zero vector");
  amplitudes /= norm;
  return StateVector(num_qubits, std::move(amplitudes));
}

StateVector StateVector::basis(int num_qubits, std::uint64_t index) {
  Vector v = Vector::Zero(qubit_dim(num_qubits));
  if (static_cast<Eigen::Index>(index) >= v.size()) throw std::invalid_argument("basis index out of range");
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVector(num_qubits, std::move(v));
}

DenseOperator StateVector::projector() const {
  return DenseOperator(num_qubits_, amplitudes_ * amplitudes_.adjoint());
}

Complex StateVector::expectation(const DenseOperator& a) const {
  if (a.num_qubits() != num_qubits_) throw std::invalid_argument("state and operator qubit counts differ");
  return amplitudes_.dot(a.matrix() * amplitudes_);
}

namespace pauli {

Matrix identity() { return Matrix::Identity(2, 2); }

Matrix x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Matrix y() {
  Matrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

Matrix z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

Matrix combination(double nx, double ny, double nz, double w) {
  return nx * x() + ny * y() + nz * z() + w * identity();
}

}  // namespace pauli

DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
  const Eigen::Index da = a.dim(), db = b.dim();
  Matrix out(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) {
      out.block(i * db, j * db, db, db) = a(i, j) * b.matrix();
    }
  }
  return DenseOperator(a.num_qubits() + b.num_qubits(), std::move(out));
}

DenseOperator tensor_power(const Matrix& m2, int n) {
  if (m2.rows() != 2 || m2.cols() != 2) throw std::invalid_argument("tensor_power expects a 2x2 matrix");
  check_qubit_count(n);
  DenseOperator single = DenseOperator::single(m2);
  DenseOperator out(0, Matrix::Ones(1, 1));
  for (int k = 0; k < n; ++k) out = kron(out, single);
  return out;
}

DenseOperator embed(const Matrix& single, int qubit, int num_qubits) {
  if (qubit < 0 || qubit >= num_qubits) throw std::invalid_argument("embed: qubit index out of range");
  DenseOperator left = DenseOperator::identity(qubit);
  DenseOperator right = DenseOperator::identity(num_qubits - qubit - 1);
  return kron(kron(left, DenseOperator::single(single)), right);
}

std::uint64_t qubit_mask(std::span<const int> qubits, int num_qubits) {
  std::uint64_t mask = 0;
  for (int q : qubits) {
    if (q < 0 || q >= num_qubits) throw std::invalid_argument("qubit index " + std::to_string(q) + " out of range");
    mask |= std::uint64_t{1} << (num_qubits - 1 - q);
  }
  return mask;
}

DenseOperator partial_transpose(const DenseOperator& a, std::span<const int> subset) {
  const int n = a.num_qubits();
  sorted_unique_checked(subset, n, "partial_transpose");
  const std::uint64_t mask = qubit_mask(subset, n);
  const auto d = static_cast<std::uint64_t>(a.dim());
  Matrix out(a.dim(), a.dim());
  const Matrix& m = a.matrix();
  for (std::uint64_t c = 0; c < d; ++c) {
    for (std::uint64_t r = 0; r < d; ++r) {
      const std::uint64_t r2 = (r & ~mask) | (c & mask);
      const std::uint64_t c2 = (c & ~mask) | (r & mask);
      out(static_cast<Eigen::Index>(r2), static_cast<Eigen::Index>(c2)) =
          m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return DenseOperator(n, std::move(out));
}

DenseOperator partial_trace(const DenseOperator& a, std::span<const int> keep) {
  const int n = a.num_qubits();
  const std::vector<int> kept = sorted_unique_checked(keep, n, "partial_trace");
  std::vector<int> kept_pos, traced_pos;
  for (int q = 0; q < n; ++q) {
    const int pos = n - 1 - q;
    if (std::binary_search(kept.begin(), kept.end(), q)) {
      kept_pos.push_back(pos);
    } else {
      traced_pos.push_back(pos);
    }
  }
  const std::uint64_t dk = std::uint64_t{1} << kept_pos.size();
  const std::uint64_t dt = std::uint64_t{1} << traced_pos.size();
  std::vector<std::uint64_t> kept_index(dk), traced_index(dt);
  for (std::uint64_t i = 0; i < dk; ++i) kept_index[i] = deposit(i, kept_pos);
  for (std::uint64_t i = 0; i < dt; ++i) traced_index[i] = deposit(i, traced_pos);

  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  const Matrix& m = a.matrix();
  for (std::uint64_t c = 0; c < dk; ++c) {
    for (std::uint64_t r = 0; r < dk; ++r) {
      Complex acc = 0.0;
      for (std::uint64_t t = 0; t < dt; ++t) {
        acc += m(static_cast<Eigen::Index>(kept_index[r] | traced_index[t]),
                 static_cast<Eigen::Index>(kept_index[c] | traced_index[t]));
      }
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = acc;
    }
  }
  return DenseOperator(static_cast<int>(kept.size()), std::move(out));
}

double schmidt_max_sq(const StateVector& psi) {
  const int n = psi.num_qubits();
  if (n < 2) return 1.0;
  double best = 0.0;
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  // Subsets containing qubit 0 (the MSB) enumerate each bipartition once.
  const std::uint64_t msb = std::uint64_t{1} << (n - 1);
  for (std::uint64_t rest = 0; rest < msb; ++rest) {
    const std::uint64_t mask_a = msb | rest;
    if (mask_a == full) continue;
    std::vector<int> pos_a, pos_b;
    for (int p = n - 1; p >= 0; --p) {
      if (mask_a >> p & 1u) {
        pos_a.push_back(p);
      } else {
        pos_b.push_back(p);
      }
    }
    const std::uint64_t da = std::uint64_t{1} << pos_a.size();
    const std::uint64_t db = std::uint64_t{1} << pos_b.size();
    Matrix coeffs(static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(db));
    for (std::uint64_t i = 0; i < da; ++i) {
      const std::uint64_t ia = deposit(i, pos_a);
      for (std::uint64_t j = 0; j < db; ++j) {
        coeffs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            psi[static_cast<Eigen::Index>(ia | deposit(j, pos_b))];
      }
    }
    const Matrix gram = da <= db ? Matrix(coeffs * coeffs.adjoint()) : Matrix(coeffs.adjoint() * coeffs);
    const RealVector ev = hermitian_eig_raw(gram, false).values;
    best = std::max(best, ev(ev.size() - 1));
  }
  return best;
}

}  // namespace symwit
