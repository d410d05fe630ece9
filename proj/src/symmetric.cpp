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

#include "symwit/symmetric.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "symwit/spectral.hpp"

namespace symwit {
namespace {

// Index map for the basis relabeling where qubit q moves to position perm[q].
std::vector<std::uint64_t> relabeling(int n, std::span<const int> perm) {
  if (static_cast<int>(perm.size()) != n) throw std::invalid_argument("permutation length does not match qubit count");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[static_cast<std::size_t>(p)]) throw std::invalid_argument("invalid qubit permutation");
    seen[static_cast<std::size_t>(p)] = true;
  }
  const std::uint64_t d = std::uint64_t{1} << n;
  std::vector<std::uint64_t> map(d);
  for (std::uint64_t r = 0; r < d; ++r) {
    std::uint64_t out = 0;
    for (int q = 0; q < n; ++q) {
      if (r >> (n - 1 - q) & 1u) out |= std::uint64_t{1} << (n - 1 - perm[static_cast<std::size_t>(q)]);
    }
    map[r] = out;
  }
  return map;
}

std::uint64_t swap_bits(std::uint64_t r, int p, int q) {
  const std::uint64_t bp = r >> p & 1u, bq = r >> q & 1u;
  if (bp == bq) return r;
  return r ^ ((std::uint64_t{1} << p) | (std::uint64_t{1} << q));
}

// Adds T A T (T = transposition of qubits i and j) to `acc`.
void accumulate_transposed(const Matrix& a, int n, int i, int j, Matrix& acc) {
  const int p = n - 1 - i, q = n - 1 - j;
  const auto d = static_cast<std::uint64_t>(a.rows());
  for (std::uint64_t c = 0; c < d; ++c) {
    const auto c2 = static_cast<Eigen::Index>(swap_bits(c, p, q));
    for (std::uint64_t r = 0; r < d; ++r) {
      acc(static_cast<Eigen::Index>(swap_bits(r, p, q)), c2) += a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
}

}  // namespace

StateVector dicke(DickeLabel label) {
  const int n = label.num_qubits, m = label.excitations;
  if (n < 1 || n > kMaxQubits) throw std::invalid_argument("dicke: qubit count out of range");
  if (m < 0 || m > n) {
    throw std::invalid_argument("dicke: excitation count " + std::to_string(m) + " outside [0, " + std::to_string(n) + "]");
  }
  const Eigen::Index d = qubit_dim(n);
  Vector v = Vector::Zero(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (std::popcount(static_cast<std::uint64_t>(i)) == m) v(i) = 1.0;
  }
  return StateVector::normalized(n, std::move(v));
}

CollectiveAxis::CollectiveAxis(std::array<double, 3> direction) : direction_(direction) {
  if (direction[0] == 0.0 && direction[1] == 0.0 && direction[2] == 0.0) {
    throw std::invalid_argument("collective axis direction must be nonzero");
  }
}

CollectiveAxis CollectiveAxis::parse(const std::string& name) {
  if (name == "x") return x();
  if (name == "y") return y();
  if (name == "z") return z();
  throw std::invalid_argument("unknown axis '" + name + "' (expected x, y or z)");
}

Matrix CollectiveAxis::pauli() const { return pauli::combination(direction_[0], direction_[1], direction_[2]); }

DenseOperator collective_j(int num_qubits, const CollectiveAxis& axis) {
  return collective_j_power(num_qubits, axis, 1);
}

DenseOperator collective_j_power(int num_qubits, const CollectiveAxis& axis, int power, double shift) {
  if (num_qubits < 1) throw std::invalid_argument("collective_j: need at least one qubit");
  if (power < 0) throw std::invalid_argument("collective_j: negative power");
  const auto& d = axis.direction();
  const double len = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
  const Eigen::Index dim = qubit_dim(num_qubits);

  // Spectrum of J_a in the product eigenbasis of the single-qubit a.sigma.
  RealVector diag(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const int ones = std::popcount(static_cast<std::uint64_t>(i));
    const double jz = 0.5 * (num_qubits - 2 * ones) * len;
    diag(i) = std::pow(jz - shift, power);
  }
  const bool along_z = d[0] == 0.0 && d[1] == 0.0 && d[2] > 0.0;
  if (along_z) return DenseOperator(num_qubits, diag.cast<Complex>().asDiagonal());

  // Columns: eigenvector for +1 then -1.
  Spectrum s = hermitian_eig_raw(axis.pauli() / len, true);
  Matrix u(2, 2);
  u.col(0) = s.vectors.col(1);
  u.col(1) = s.vectors.col(0);
  const Matrix v = tensor_power(u, num_qubits).matrix();
  return DenseOperator(num_qubits, v * diag.cast<Complex>().asDiagonal() * v.adjoint());
}

DenseOperator permute_qubits(const DenseOperator& a, std::span<const int> perm) {
  const auto map = relabeling(a.num_qubits(), perm);
  Matrix out(a.dim(), a.dim());
  const Matrix& m = a.matrix();
  for (std::size_t c = 0; c < map.size(); ++c) {
    for (std::size_t r = 0; r < map.size(); ++r) {
      out(static_cast<Eigen::Index>(map[r]), static_cast<Eigen::Index>(map[c])) =
          m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return DenseOperator(a.num_qubits(), std::move(out));
}

StateVector permute_qubits(const StateVector& psi, std::span<const int> perm) {
  const auto map = relabeling(psi.num_qubits(), perm);
  Vector out(psi.dim());
  for (std::size_t r = 0; r < map.size(); ++r) out(static_cast<Eigen::Index>(map[r])) = psi[static_cast<Eigen::Index>(r)];
  return StateVector::normalized(psi.num_qubits(), std::move(out));
}

DenseOperator symmetrize(const DenseOperator& a) {
  // Left cosets of S_k in S_{k+1} are represented by the identity and the
  // transpositions (i k), so averaging over them extends a symmetrization
  // over qubits 0..k-1 to one over 0..k.
  const int n = a.num_qubits();
  Matrix current = a.matrix();
  for (int k = 1; k < n; ++k) {
    Matrix acc = current;
    for (int i = 0; i < k; ++i) accumulate_transposed(current, n, i, k, acc);
    current = acc / static_cast<double>(k + 1);
  }
  return DenseOperator(n, std::move(current));
}

bool is_permutation_invariant(const DenseOperator& a, double tol) {
  const int n = a.num_qubits();
  const auto d = static_cast<std::uint64_t>(a.dim());
  const Matrix& m = a.matrix();
  for (int i = 0; i + 1 < n; ++i) {
    const int p = n - 1 - i, q = n - 2 - i;
    for (std::uint64_t c = 0; c < d; ++c) {
      const auto c2 = static_cast<Eigen::Index>(swap_bits(c, p, q));
      for (std::uint64_t r = 0; r < d; ++r) {
        const Complex diff = m(static_cast<Eigen::Index>(swap_bits(r, p, q)), c2) -
                             m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        if (std::abs(diff) >= tol) return false;
      }
    }
  }
  return true;
}

}  // namespace symwit
