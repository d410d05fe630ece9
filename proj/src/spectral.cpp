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

#include "symwit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace symwit {
namespace {

// Reduces the Hermitian matrix held in the lower triangle of `a` to real
// tridiagonal form. On return `diag` and `sub` hold the tridiagonal entries
// and, when requested, `q` holds the unitary with A = Q T Q^dagger.
void tridiagonalize(Matrix& a, RealVector& diag, RealVector& sub, Matrix* q) {
  const Eigen::Index n = a.rows();
  diag.resize(n);
  sub = RealVector::Zero(n);
  std::vector<Vector> reflectors;
  if (q) reflectors.reserve(static_cast<std::size_t>(std::max<Eigen::Index>(n - 2, 0)));

  Vector cplx_sub = Vector::Zero(n);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const Eigen::Index m = n - k - 1;
    auto x = a.col(k).segment(k + 1, m);
    const double tail_norm = m > 1 ? x.tail(m - 1).norm() : 0.0;
    if (tail_norm == 0.0) {
      cplx_sub(k) = x(0);
      if (q) reflectors.emplace_back();
      continue;
    }
    const double xnorm = x.norm();
    const double ax0 = std::abs(x(0));
    const Complex phase = ax0 == 0.0 ? Complex(1.0) : x(0) / ax0;
    const Complex alpha = -phase * xnorm;

    Vector v = x;
    v(0) -= alpha;
    v /= v.norm();

    auto block = a.block(k + 1, k + 1, m, m);
    Vector p = block.selfadjointView<Eigen::Lower>() * v;
    const Complex kappa = v.dot(p);  // v^dagger A v, real for Hermitian A
    Vector w = p - kappa.real() * v;
    block.selfadjointView<Eigen::Lower>().rankUpdate(v, w, Complex(-2.0));

    cplx_sub(k) = alpha;
    if (q) reflectors.push_back(std::move(v));
  }
  for (Eigen::Index i = 0; i < n; ++i) diag(i) = a(i, i).real();

  // Scale by a diagonal phase so the subdiagonal becomes real non-negative.
  Vector phases = Vector::Ones(n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double mag = std::abs(cplx_sub(i));
    sub(i) = mag;
    phases(i + 1) = mag == 0.0 ? phases(i) : phases(i) * cplx_sub(i) / mag;
  }

  if (q) {
    *q = Matrix::Identity(n, n);
    for (Eigen::Index k = static_cast<Eigen::Index>(reflectors.size()) - 1; k >= 0; --k) {
      const Vector& v = reflectors[static_cast<std::size_t>(k)];
      if (v.size() == 0) continue;
      const Eigen::Index m = v.size();
      auto rows = q->bottomRows(m);
      Eigen::RowVectorXcd vq = v.adjoint() * rows;
      rows.noalias() -= 2.0 * v * vq;
    }
    *q = (*q) * phases.asDiagonal();
  }
}

// Implicit QL with Wilkinson shifts on a real symmetric tridiagonal matrix.
// `sub(i)` couples i and i+1. Eigenvectors accumulate into `z` when given.
void tridiagonal_ql(RealVector& d, RealVector& sub, Eigen::MatrixXd* z) {
  const Eigen::Index n = d.size();
  if (n == 0) return;
  RealVector e = sub;
  e(n - 1) = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  // Deflation also accepts |e| below eps * ||T||. A purely relative test
  // stalls on large clusters of tiny eigenvalues, where the reduction has
  // already left couplings at the eps ||T|| noise level.
  double norm = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) norm = std::max(norm, std::abs(d(i)) + std::abs(e(i)));
  const double floor = eps * norm;

  for (Eigen::Index l = 0; l < n; ++l) {
    int iter = 0;
    Eigen::Index m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d(m)) + std::abs(d(m + 1));
        if (std::abs(e(m)) <= eps * dd || std::abs(e(m)) <= floor) break;
      }
      if (m != l) {
        if (iter++ == 80) throw NumericalError("tridiagonal QL failed to converge");
        double g = (d(l + 1) - d(l)) / (2.0 * e(l));
        double r = std::hypot(g, 1.0);
        g = d(m) - d(l) + e(l) / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        Eigen::Index i;
        bool underflow = false;
        for (i = m - 1; i >= l; --i) {
          double f = s * e(i);
          const double b = c * e(i);
          r = std::hypot(f, g);
          e(i + 1) = r;
          if (r == 0.0) {
            d(i + 1) -= p;
            e(m) = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d(i + 1) - p;
          r = (d(i) - g) * s + 2.0 * c * b;
          p = s * r;
          d(i + 1) = g + p;
          g = c * r - b;
          if (z) {
            for (Eigen::Index k = 0; k < n; ++k) {
              f = (*z)(k, i + 1);
              (*z)(k, i + 1) = s * (*z)(k, i) + c * f;
              (*z)(k, i) = c * (*z)(k, i) - s * f;
            }
          }
        }
        if (underflow) continue;
        d(l) -= p;
        e(l) = g;
        e(m) = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

Spectrum hermitian_eig_raw(const Matrix& input, bool want_vectors) {
  if (input.rows() != input.cols()) throw std::invalid_argument("hermitian_eig: matrix is not square");
  const Eigen::Index n = input.rows();
  Spectrum out;
  if (n == 0) return out;

  Matrix a = input;
  RealVector d, sub;
  Matrix q;
  tridiagonalize(a, d, sub, want_vectors ? &q : nullptr);

  Eigen::MatrixXd z;
  if (want_vectors) z = Eigen::MatrixXd::Identity(n, n);
  tridiagonal_ql(d, sub, want_vectors ? &z : nullptr);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) { return d(x) < d(y); });

  out.values.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) out.values(k) = d(order[static_cast<std::size_t>(k)]);
  if (want_vectors) {
    Eigen::MatrixXd zs(n, n);
    for (Eigen::Index k = 0; k < n; ++k) zs.col(k) = z.col(order[static_cast<std::size_t>(k)]);
    out.vectors = q * zs.cast<Complex>();
  }
  return out;
}

Spectrum hermitian_eig(const DenseOperator& a) {
  return hermitian_eig_raw(a.hermitian_part_checked().matrix(), true);
}

RealVector hermitian_eigenvalues(const DenseOperator& a) {
  return hermitian_eig_raw(a.hermitian_part_checked().matrix(), false).values;
}

double min_eigenvalue(const DenseOperator& a) { return hermitian_eigenvalues(a)(0); }

std::pair<double, Vector> top_eigenpair(const Matrix& a) {
  Spectrum s = hermitian_eig_raw(a, true);
  const Eigen::Index last = s.values.size() - 1;
  return {s.values(last), s.vectors.col(last)};
}

}  // namespace symwit
