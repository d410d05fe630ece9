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

#ifndef SYMWIT_SPECTRAL_HPP
#define SYMWIT_SPECTRAL_HPP

#include "symwit/linalg.hpp"

namespace symwit {

struct Spectrum {
  RealVector values;  // ascending
  Matrix vectors;     // column k belongs to values(k); empty if not requested
};

/// Eigen-decomposition of a complex Hermitian matrix.
///
/// Householder reduction to a real symmetric tridiagonal matrix followed by
/// implicit QL iterations with Wilkinson shifts. Only the lower triangle of
/// `a` is read; callers are responsible for hermiticity.
Spectrum hermitian_eig_raw(const Matrix& a, bool want_vectors = true);

/// Checked variant: rejects operators whose hermiticity defect exceeds
/// 1e-12 and symmetrizes before decomposing.
Spectrum hermitian_eig(const DenseOperator& a);
RealVector hermitian_eigenvalues(const DenseOperator& a);
double min_eigenvalue(const DenseOperator& a);

/// Largest eigenvalue and a unit eigenvector; `a` must be Hermitian.
std::pair<double, Vector> top_eigenpair(const Matrix& a);

}  // namespace symwit

#endif  // SYMWIT_SPECTRAL_HPP
