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

#include "symwit/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace symwit {

void LinearProgram::add_row(const Eigen::RowVectorXd& row, double rhs) {
  if (row.size() != f.size()) throw std::invalid_argument("LinearProgram: row length does not match variable count");
  g.conservativeResize(g.rows() + 1, f.size());
  g.row(g.rows() - 1) = row;
  h.conservativeResize(h.size() + 1);
  h(h.size() - 1) = rhs;
}

void LinearProgram::add_equality(const Eigen::RowVectorXd& row, double rhs) {
  add_row(row, rhs);
  add_row(-row, -rhs);
}

void LinearProgram::add_bounds(Eigen::Index var, double lo, double hi) {
  Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(f.size());
  e(var) = 1.0;
  add_row(e, lo);
  add_row(-e, -hi);
}

std::string to_string(LpSolution::Status s) {
  switch (s) {
    case LpSolution::Status::optimal: return "optimal";
    case LpSolution::Status::infeasible: return "infeasible";
    case LpSolution::Status::unbounded: return "unbounded";
    case LpSolution::Status::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

namespace {

// Primal simplex on the dual  max h^T y  s.t.  G^T y = f, y >= 0,  written
// as  min c^T y, A y = b  with c = -h. The basis has one column per primal
// variable, so every factorization is tiny no matter how many rows G has.
class DualSimplex {
 public:
  DualSimplex(const LinearProgram& lp) : n_(lp.f.size()), m_(lp.g.rows()) {
    a_ = lp.g.transpose();
    b_ = lp.f;
    c_ = Eigen::VectorXd::Zero(m_ + n_);
    c_.head(m_) = -lp.h;
    sign_ = Eigen::VectorXd::Ones(n_);
    for (Eigen::Index i = 0; i < n_; ++i) {
      if (b_(i) < 0.0) {
        sign_(i) = -1.0;
        a_.row(i) *= -1.0;
        b_(i) = -b_(i);
      }
    }
    for (Eigen::Index i = 0; i < n_; ++i) basis_.push_back(m_ + i);
  }

  LpSolution run(int max_iterations) {
    LpSolution out;
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(m_ + n_);
    phase1.tail(n_).setOnes();
    auto st = iterate(phase1, true, max_iterations, out.iterations);
    if (st != LpSolution::Status::optimal) {
      out.status = st;
      return out;
    }
    if (phase1.dot(basic_values_full()) > 1e-9 * std::max(1.0, b_.lpNorm<Eigen::Infinity>())) {
      // The dual is infeasible, so the primal is unbounded (or infeasible).
      out.status = LpSolution::Status::unbounded;
      return out;
    }
    drive_out_artificials();
    st = iterate(c_, false, max_iterations, out.iterations);
    if (st != LpSolution::Status::optimal) {
      // Dual unbounded: the primal rows are inconsistent.
      out.status = st == LpSolution::Status::unbounded ? LpSolution::Status::infeasible : st;
      return out;
    }
    const Eigen::VectorXd pi = multipliers(c_);
    out.x = -(pi.array() * sign_.array()).matrix();
    out.status = LpSolution::Status::optimal;
    return out;
  }

 private:
  Eigen::VectorXd column(Eigen::Index j) const {
    if (j < m_) return a_.col(j);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n_);
    e(j - m_) = 1.0;
    return e;
  }

  void factor() {
    Eigen::MatrixXd bm(n_, n_);
    for (Eigen::Index k = 0; k < n_; ++k) bm.col(k) = column(basis_[static_cast<std::size_t>(k)]);
    lu_.compute(bm);
    xb_ = lu_.solve(b_);
  }

  Eigen::VectorXd multipliers(const Eigen::VectorXd& cost) const {
    Eigen::VectorXd cb(n_);
    for (Eigen::Index k = 0; k < n_; ++k) cb(k) = cost(basis_[static_cast<std::size_t>(k)]);
    return lu_.transpose().solve(cb);
  }

  Eigen::VectorXd basic_values_full() const {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m_ + n_);
    for (Eigen::Index k = 0; k < n_; ++k) y(basis_[static_cast<std::size_t>(k)]) = std::max(0.0, xb_(k));
    return y;
  }

  bool is_basic(Eigen::Index j) const {
    for (auto b : basis_) {
      if (b == j) return true;
    }
    return false;
  }

  LpSolution::Status iterate(const Eigen::VectorXd& cost, bool allow_artificial, int max_iterations, int& iterations) {
    constexpr double kPriceTol = 1e-11;
    constexpr double kPivotTol = 1e-11;
    int degenerate_streak = 0;
    factor();
    while (true) {
      if (iterations >= max_iterations) return LpSolution::Status::iteration_limit;
      const Eigen::VectorXd pi = multipliers(cost);
      const bool bland = degenerate_streak > 50;
      Eigen::Index entering = -1;
      double best = -kPriceTol;
      const Eigen::Index limit = allow_artificial ? m_ + n_ : m_;
      for (Eigen::Index j = 0; j < limit; ++j) {
        if (is_basic(j)) continue;
        const double scale = 1.0 + std::abs(cost(j));
        const double d = (cost(j) - (j < m_ ? pi.dot(a_.col(j)) : pi(j - m_))) / scale;
        if (d < best) {
          entering = j;
          if (bland) break;
          best = d;
        }
      }
      if (entering < 0) return LpSolution::Status::optimal;

      const Eigen::VectorXd u = lu_.solve(column(entering));
      Eigen::Index leaving = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index k = 0; k < n_; ++k) {
        if (u(k) <= kPivotTol) continue;
        const double r = std::max(0.0, xb_(k)) / u(k);
        if (r < ratio - 1e-15 ||
            (r <= ratio + 1e-15 && leaving >= 0 && basis_[static_cast<std::size_t>(k)] < basis_[static_cast<std::size_t>(leaving)])) {
          ratio = r;
          leaving = k;
        }
      }
      if (leaving < 0) return LpSolution::Status::unbounded;
      degenerate_streak = ratio <= 1e-14 ? degenerate_streak + 1 : 0;
      basis_[static_cast<std::size_t>(leaving)] = entering;
      ++iterations;
      factor();
    }
  }

  void drive_out_artificials() {
    for (Eigen::Index k = 0; k < n_; ++k) {
      if (basis_[static_cast<std::size_t>(k)] < m_) continue;
      Eigen::VectorXd ek = Eigen::VectorXd::Zero(n_);
      ek(k) = 1.0;
      const Eigen::VectorXd row = lu_.transpose().solve(ek);  // row k of B^-1
      Eigen::Index pick = -1;
      double best = 1e-9;
      for (Eigen::Index j = 0; j < m_; ++j) {
        if (is_basic(j)) continue;
        const double v = std::abs(row.dot(a_.col(j)));
        if (v > best) {
          best = v;
          pick = j;
        }
      }
      if (pick >= 0) {
        basis_[static_cast<std::size_t>(k)] = pick;
        factor();
      }
    }
  }

  Eigen::Index n_, m_;
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_, c_, sign_, xb_;
  std::vector<Eigen::Index> basis_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

}  // namespace

LpSolution solve(const LinearProgram& lp, int max_iterations) {
  if (lp.g.cols() != lp.f.size() || lp.g.rows() != lp.h.size()) {
    throw std::invalid_argument("LinearProgram: inconsistent dimensions");
  }
  if (lp.f.size() == 0) throw std::invalid_argument("LinearProgram: no variables");
  LpSolution out = DualSimplex(lp).run(max_iterations);
  if (out.status == LpSolution::Status::optimal) out.value = lp.f.dot(out.x);
  return out;
}

}  // namespace symwit
