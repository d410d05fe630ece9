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

#include "symwit/optimizer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include <gsl/gsl_multimin.h>
#include <json.hpp>

#include "symwit/compiler.hpp"
#include "symwit/lp.hpp"
#include "symwit/spectral.hpp"
#include "symwit/symmetric.hpp"

namespace symwit {

std::string SolverReport::to_json() const {
  nlohmann::ordered_json j;
  j["solver"] = solver;
  j["status"] = status;
  j["optimum"] = optimum;
  j["bound"] = bound;
  j["gap"] = gap;
  j["primal_residual"] = primal_residual;
  j["dual_residual"] = dual_residual;
  j["min_eig_slack"] = min_eig_slack;
  j["iterations"] = iterations;
  j["converged"] = converged;
  return j.dump();
}

namespace {

Matrix kron_m(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index c = 0; c < a.cols(); ++c)
    for (Eigen::Index r = 0; r < a.rows(); ++r) out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

double tr_prod(const Matrix& a, const Matrix& b) { return a.cwiseProduct(b.transpose()).sum().real(); }

Vector random_state(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = Complex(g(rng), g(rng));
  return v / v.norm();
}

void check_part(int n, const std::vector<int>& part) {
  if (part.empty() || static_cast<int>(part.size()) >= n) {
    throw std::invalid_argument("bipartition: both sides must be nonempty");
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int q : part) {
    if (q < 0 || q >= n || seen[static_cast<std::size_t>(q)]) throw std::invalid_argument("bipartition: bad qubit index");
    seen[static_cast<std::size_t>(q)] = true;
  }
}

// perm[q] = position of qubit q once the qubits of `part` lead.
std::vector<int> leading_permutation(int n, const std::vector<int>& part) {
  std::vector<int> sorted = part;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> perm(static_cast<std::size_t>(n), -1);
  int pos = 0;
  for (int q : sorted) perm[static_cast<std::size_t>(q)] = pos++;
  for (int q = 0; q < n; ++q) {
    if (perm[static_cast<std::size_t>(q)] < 0) perm[static_cast<std::size_t>(q)] = pos++;
  }
  return perm;
}

std::vector<int> inverse(const std::vector<int>& perm) {
  std::vector<int> inv(perm.size());
  for (std::size_t q = 0; q < perm.size(); ++q) inv[static_cast<std::size_t>(perm[q])] = static_cast<int>(q);
  return inv;
}

bool swap_invariant(const DenseOperator& m, int i, int j, double tol) {
  std::vector<int> perm(static_cast<std::size_t>(m.num_qubits()));
  for (std::size_t q = 0; q < perm.size(); ++q) perm[q] = static_cast<int>(q);
  std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  return (permute_qubits(m, perm).matrix() - m.matrix()).cwiseAbs().maxCoeff() < tol;
}

bool range_invariant(const DenseOperator& m, int begin, int end, double tol) {
  for (int q = begin; q + 1 < end; ++q) {
    if (!swap_invariant(m, q, q + 1, tol)) return false;
  }
  return true;
}

double invariance_tol(const DenseOperator& m) { return 1e-10 * std::max(1.0, m.max_abs()); }

// ---------------------------------------------------------------------------
// Witness optimization

std::optional<std::size_t> identity_index(const std::vector<BasisTerm>& basis) {
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const auto& b = basis[k];
    if (b.kind == BasisTerm::Kind::identity || (b.kind == BasisTerm::Kind::j_power && b.power == 0)) return k;
  }
  return std::nullopt;
}

void check_independent(const std::vector<Matrix>& ops) {
  const auto k = static_cast<Eigen::Index>(ops.size());
  Eigen::MatrixXd gram(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) gram(i, j) = tr_prod(ops[static_cast<std::size_t>(i)], ops[static_cast<std::size_t>(j)]);
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram, Eigen::EigenvaluesOnly).eigenvalues();
  if (ev(0) < 1e-10 * std::max(1.0, ev(k - 1))) {
    throw std::invalid_argument("optimize_witness: basis operators are linearly dependent");
  }
}

}  // namespace

std::vector<BasisTerm> moment_basis(const StateVector& target, const std::string& axes, int max_power, bool odd_powers) {
  if (max_power < 1) throw std::invalid_argument("moment_basis: max_power must be positive");
  std::vector<BasisTerm> out{BasisTerm::identity()};
  const int n = target.num_qubits();
  for (int p = odd_powers ? 1 : 2; p <= max_power; p += odd_powers ? 1 : 2) {
    for (char a : axes) {
      double shift = target.expectation(collective_j(n, CollectiveAxis::parse(std::string(1, a)))).real();
      if (std::abs(shift) < 1e-12) shift = 0.0;
      out.push_back(BasisTerm::j(a, p, shift));
    }
  }
  return out;
}

std::pair<WitnessSpec, SolverReport> optimize_witness(const WitnessOptimizationProblem& p, const SolverConfig& config) {
  const int n = p.target.num_qubits();
  if (p.basis.empty()) throw std::invalid_argument("optimize_witness: empty basis");
  if (p.noise.rho.num_qubits() != n) throw std::invalid_argument("optimize_witness: noise acts on a different register");
  const double lambda_sq = p.lambda_sq ? *p.lambda_sq : schmidt_max_sq(p.target);
  const auto nb = static_cast<Eigen::Index>(p.basis.size());
  const Eigen::Index nv = nb + 1;  // coefficients, then alpha
  const Eigen::Index dim = qubit_dim(n);

  // Work with basis operators scaled to unit RMS eigenvalue.
  std::vector<Matrix> ops;
  Eigen::VectorXd scale(nb);
  for (Eigen::Index k = 0; k < nb; ++k) {
    Matrix b = p.basis[static_cast<std::size_t>(k)].realize(p.target).hermitian_part_checked().matrix();
    scale(k) = b.norm() / std::sqrt(static_cast<double>(dim));
    if (scale(k) == 0.0) throw std::invalid_argument("optimize_witness: zero basis operator");
    ops.push_back(b / scale(k));
  }
  check_independent(ops);
  const Matrix rho = p.target.projector().matrix();
  const Matrix wp = lambda_sq * Matrix::Identity(dim, dim) - rho;
  Eigen::VectorXd t(nb), noise(nb);
  for (Eigen::Index k = 0; k < nb; ++k) {
    t(k) = tr_prod(ops[static_cast<std::size_t>(k)], rho);
    noise(k) = tr_prod(ops[static_cast<std::size_t>(k)], p.noise.rho.matrix());
  }
  const auto id = identity_index(p.basis);

  LinearProgram lp;
  lp.f = Eigen::VectorXd::Zero(nv);
  lp.f.head(nb) = noise;
  lp.g.resize(0, nv);
  Eigen::RowVectorXd norm_row = Eigen::RowVectorXd::Zero(nv);
  norm_row.head(nb) = t.transpose();
  lp.add_equality(norm_row, -1.0);
  const double box = 1e4;
  for (Eigen::Index k = 0; k < nb; ++k) lp.add_bounds(k, -box, box);
  lp.add_bounds(nb, 1e-9, p.alpha_max);

  auto operator_at = [&](const Eigen::VectorXd& x) {
    Matrix m = -x(nb) * wp;
    for (Eigen::Index k = 0; k < nb; ++k) m += x(k) * ops[static_cast<std::size_t>(k)];
    return m;
  };

  SolverReport report;
  report.solver = "cutting_plane";
  double upper = std::numeric_limits<double>::infinity();
  double lower = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd best;
  constexpr int kMaxIterations = 5000;
  constexpr Eigen::Index kCutsPerRound = 8;

  for (int it = 0; it < kMaxIterations; ++it) {
    report.iterations = it + 1;
    const LpSolution sol = solve(lp);
    if (sol.status == LpSolution::Status::infeasible) {
      throw NumericalError("optimize_witness: no alpha > 0 admits W - alpha W^(P) >= 0 with Tr(W rho) = -1 in this basis");
    }
    if (sol.status != LpSolution::Status::optimal) {
      throw NumericalError("optimize_witness: master problem " + to_string(sol.status));
    }
    lower = std::max(lower, sol.value);
    const Spectrum s = hermitian_eig_raw(operator_at(sol.x), true);
    const double lmin = s.values(0);

    if (lmin >= 0.0) {
      if (sol.value < upper) {
        upper = sol.value;
        best = sol.x;
      }
    } else if (id) {
      // Shift by the identity, then rescale to restore Tr(W rho) = -1.
      const double shift = -lmin;
      if (shift < 1.0) {
        Eigen::VectorXd x = sol.x / (1.0 - shift);
        x(static_cast<Eigen::Index>(*id)) += shift * scale(static_cast<Eigen::Index>(*id)) / (1.0 - shift);
        const double value = noise.dot(x.head(nb));
        if (value < upper) {
          upper = value;
          best = x;
        }
      }
    }
    if (upper - lower < config.cut_tol) break;

    for (Eigen::Index c = 0; c < std::min<Eigen::Index>(kCutsPerRound, dim) && s.values(c) < 0.0; ++c) {
      const Vector v = s.vectors.col(c);
      Eigen::RowVectorXd row(nv);
      for (Eigen::Index k = 0; k < nb; ++k) row(k) = v.dot(ops[static_cast<std::size_t>(k)] * v).real();
      row(nb) = -v.dot(wp * v).real();
      lp.add_row(row / row.norm(), 0.0);
    }
  }

  if (best.size() == 0) {
    throw NumericalError("optimize_witness: no feasible witness found after " + std::to_string(report.iterations) +
                         " iterations");
  }

  WitnessSpec w;
  w.name = "optimized";
  w.num_qubits = n;
  w.basis = p.basis;
  for (Eigen::Index k = 0; k < nb; ++k) w.coefficients.push_back(best(k) / scale(k));
  w.exact.assign(p.basis.size(), std::nullopt);
  w.alpha = best(nb);
  w.lambda_sq = lambda_sq;
  w.target = p.target;
  w.target_label = p.target_label;

  const Matrix wm = w.realize().matrix();
  report.optimum = upper;
  report.bound = lower;
  report.gap = upper - lower;
  report.min_eig_slack = hermitian_eig_raw(wm - *w.alpha * wp, false).values(0);
  report.primal_residual = std::abs(tr_prod(wm, rho) + 1.0);
  report.dual_residual = 0.0;
  const bool at_box = (best.head(nb).cwiseAbs().array() >= box * (1.0 - 1e-9)).any() ||
                      best(nb) >= p.alpha_max * (1.0 - 1e-9);
  report.converged = report.gap < config.cut_tol && report.min_eig_slack >= -1e-9 && !at_box;
  report.status = report.converged ? "optimal" : (at_box ? "bound_active" : "iteration_limit");
  return {std::move(w), report};
}

// ---------------------------------------------------------------------------
// PPT maximization

namespace {

// Hermitian operator basis for one side of the cut, orthonormal in the
// Hilbert-Schmidt product, plus the isometries that block-diagonalize every
// operator in its span.
struct SideBasis {
  std::vector<Matrix> ops;
  std::vector<int> transpose_sign;
  std::vector<Matrix> iso;
  std::vector<int> mult;
};

Matrix pauli_string(int k, std::uint64_t code, int& ys) {
  const Matrix singles[4] = {pauli::identity(), pauli::x(), pauli::y(), pauli::z()};
  Matrix out = Matrix::Ones(1, 1);
  ys = 0;
  for (int q = 0; q < k; ++q) {
    const auto digit = static_cast<int>(code >> (2 * (k - 1 - q)) & 3u);
    if (digit == 2) ++ys;
    out = kron_m(out, singles[digit]);
  }
  return out;
}

SideBasis full_side(int k) {
  SideBasis s;
  const double norm = std::sqrt(static_cast<double>(qubit_dim(k)));
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << (2 * k)); ++code) {
    int ys = 0;
    s.ops.push_back(pauli_string(k, code, ys) / norm);
    s.transpose_sign.push_back(ys % 2 ? -1 : 1);
  }
  s.iso.push_back(Matrix::Identity(qubit_dim(k), qubit_dim(k)));
  s.mult.push_back(1);
  return s;
}

// Permutation-invariant side: symmetrized Pauli classes, and one copy of
// each spin-j irrep built from a highest-weight vector.
SideBasis symmetric_side(int k) {
  SideBasis s;
  for (int total = 0; total <= k; ++total) {
    for (int x = total; x >= 0; --x) {
      for (int y = total - x; y >= 0; --y) {
        const int z = total - x - y;
        Matrix c = class_operator(k, x, y, z).matrix();
        s.ops.push_back(c / c.norm());
        s.transpose_sign.push_back(y % 2 ? -1 : 1);
      }
    }
  }
  const Eigen::Index d = qubit_dim(k);
  const Matrix jp = collective_j(k, CollectiveAxis::x()).matrix() + Complex(0, 1) * collective_j(k, CollectiveAxis::y()).matrix();
  const Matrix jm = jp.adjoint();
  for (int r = 0; 2 * r <= k; ++r) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < d; ++i) {
      if (std::popcount(static_cast<std::uint64_t>(i)) == r) idx.push_back(i);
    }
    Matrix sub = Matrix::Zero(d, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) sub(idx[c], static_cast<Eigen::Index>(c)) = 1.0;
    const Matrix raised = jp * sub;
    const Spectrum sp = hermitian_eig_raw(raised.adjoint() * raised, true);
    int kernel = 0;
    while (kernel < sp.values.size() && sp.values(kernel) < 1e-9) ++kernel;
    if (kernel == 0) throw std::logic_error("symmetric_side: missing highest-weight vector");
    const int two_j = k - 2 * r;
    Matrix u(d, two_j + 1);
    u.col(0) = sub * sp.vectors.col(0);
    for (int m = 1; m <= two_j; ++m) {
      const Vector next = jm * u.col(m - 1);
      u.col(m) = next / next.norm();
    }
    s.iso.push_back(std::move(u));
    s.mult.push_back(kernel);
  }
  return s;
}

struct BlockSystem {
  Eigen::Index k_ops = 0;
  std::vector<int> sign;         // per operator: sign under the partial transpose
  std::vector<int> mult;         // per block
  std::vector<Eigen::Index> size;
  std::vector<std::vector<Matrix>> blocks;  // blocks[b][i]
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (ia, ib) per operator
};

BlockSystem make_blocks(const SideBasis& a, const SideBasis& b) {
  BlockSystem bs;
  for (std::size_t ia = 0; ia < a.ops.size(); ++ia) {
    for (std::size_t ib = 0; ib < b.ops.size(); ++ib) {
      bs.pairs.emplace_back(ia, ib);
      bs.sign.push_back(a.transpose_sign[ia]);
    }
  }
  bs.k_ops = static_cast<Eigen::Index>(bs.pairs.size());
  for (std::size_t ba = 0; ba < a.iso.size(); ++ba) {
    std::vector<Matrix> sa;
    for (const auto& op : a.ops) sa.push_back(a.iso[ba].adjoint() * op * a.iso[ba]);
    for (std::size_t bb = 0; bb < b.iso.size(); ++bb) {
      std::vector<Matrix> sb;
      for (const auto& op : b.ops) sb.push_back(b.iso[bb].adjoint() * op * b.iso[bb]);
      std::vector<Matrix> per_op;
      per_op.reserve(bs.pairs.size());
      for (const auto& [ia, ib] : bs.pairs) per_op.push_back(kron_m(sa[ia], sb[ib]));
      bs.mult.push_back(a.mult[ba] * b.mult[bb]);
      bs.size.push_back(per_op.front().rows());
      bs.blocks.push_back(std::move(per_op));
    }
  }
  return bs;
}

std::vector<Matrix> assemble(const BlockSystem& bs, const Eigen::VectorXd& x, bool transposed) {
  std::vector<Matrix> out;
  for (std::size_t b = 0; b < bs.blocks.size(); ++b) {
    Matrix r = Matrix::Zero(bs.size[b], bs.size[b]);
    for (Eigen::Index i = 0; i < bs.k_ops; ++i) {
      const double coeff = transposed ? x(i) * bs.sign[static_cast<std::size_t>(i)] : x(i);
      if (coeff != 0.0) r += coeff * bs.blocks[b][static_cast<std::size_t>(i)];
    }
    out.push_back(std::move(r));
  }
  return out;
}

// Sum of mult * log det over blocks; nullopt if some block is not positive
// definite.
std::optional<double> log_det(const BlockSystem& bs, const std::vector<Matrix>& r) {
  double total = 0.0;
  for (std::size_t b = 0; b < r.size(); ++b) {
    Eigen::LLT<Matrix> llt(r[b]);
    if (llt.info() != Eigen::Success) return std::nullopt;
    const Matrix& l = llt.matrixLLT();
    for (Eigen::Index i = 0; i < l.rows(); ++i) {
      const double dii = l(i, i).real();
      if (!(dii > 0.0)) return std::nullopt;
      total += 2.0 * bs.mult[b] * std::log(dii);
    }
  }
  return total;
}

// Adds the gradient and Gauss-Newton blocks of -log det for one cone.
void barrier_derivatives(const BlockSystem& bs, const std::vector<Matrix>& r, bool transposed, Eigen::VectorXd& grad,
                         Eigen::MatrixXd& hess) {
  Eigen::Index rows = 0;
  for (auto s : bs.size) rows += s * s;
  Matrix phi(rows, bs.k_ops);
  Eigen::Index offset = 0;
  for (std::size_t b = 0; b < r.size(); ++b) {
    Eigen::LLT<Matrix> llt(r[b]);
    const auto l = llt.matrixL();
    const double w = std::sqrt(static_cast<double>(bs.mult[b]));
    const Eigen::Index n = bs.size[b];
    for (Eigen::Index i = 0; i < bs.k_ops; ++i) {
      const double sign = transposed ? bs.sign[static_cast<std::size_t>(i)] : 1.0;
      Matrix y = l.solve(bs.blocks[b][static_cast<std::size_t>(i)] * sign);
      y = l.solve(y.adjoint().eval());  // L^-1 E L^-dagger (Hermitian)
      grad(i) -= bs.mult[b] * y.trace().real();
      phi.block(offset, i, n * n, 1) = w * Eigen::Map<const Vector>(y.data(), n * n);
    }
    offset += n * n;
  }
  hess.noalias() += (phi.adjoint() * phi).real();
}

}  // namespace

PptResult max_ppt(const PptProblem& p, const SolverConfig& config) {
  const int n = p.m.num_qubits();
  if (n < 2 || n > 8) throw std::invalid_argument("max_ppt: supports 2 to 8 qubits");
  check_part(n, p.part);
  const DenseOperator herm = p.m.hermitian_part_checked();
  const auto perm = leading_permutation(n, p.part);
  const DenseOperator m = permute_qubits(herm, perm);
  const int k = static_cast<int>(p.part.size());
  const double tol = invariance_tol(m);
  const SideBasis a = range_invariant(m, 0, k, tol) && k > 1 ? symmetric_side(k) : full_side(k);
  const SideBasis b = range_invariant(m, k, n, tol) && n - k > 1 ? symmetric_side(n - k) : full_side(n - k);
  if (a.ops.size() * b.ops.size() > 5000) {
    throw std::invalid_argument("max_ppt: observable lacks the qubit-permutation symmetry needed at this size");
  }
  const BlockSystem bs = make_blocks(a, b);
  const Eigen::Index kk = bs.k_ops;
  const Eigen::Index dim = qubit_dim(n);

  auto dense_op = [&](Eigen::Index i) {
    const auto& [ia, ib] = bs.pairs[static_cast<std::size_t>(i)];
    return kron_m(a.ops[ia], b.ops[ib]);
  };
  Eigen::VectorXd obj(kk);
  for (Eigen::Index i = 0; i < kk; ++i) obj(i) = tr_prod(m.matrix(), dense_op(i));

  Eigen::VectorXd x = Eigen::VectorXd::Zero(kk);
  x(0) = 1.0 / std::sqrt(static_cast<double>(dim));  // rho = 1/d

  std::vector<Matrix> dense(static_cast<std::size_t>(kk));
  for (Eigen::Index i = 0; i < kk; ++i) dense[static_cast<std::size_t>(i)] = dense_op(i);

  double mu = 1.0;
  auto merit = [&](const Eigen::VectorXd& y) -> std::optional<double> {
    const auto l1 = log_det(bs, assemble(bs, y, false));
    if (!l1) return std::nullopt;
    const auto l2 = log_det(bs, assemble(bs, y, true));
    if (!l2) return std::nullopt;
    return -obj.dot(y) - mu * (*l1 + *l2);
  };

  // Any Z >= 0 certifies Tr(M rho') <= lambda_max(M + Z^T) for every PPT
  // rho'; near the central path Z = mu (rho^T)^-1 makes this tight.
  auto dual_bound = [&](const Eigen::VectorXd& y) {
    const auto rt = assemble(bs, y, true);
    std::vector<Matrix> z;
    for (const auto& blk : rt) z.push_back(mu * blk.llt().solve(Matrix::Identity(blk.rows(), blk.cols())));
    Matrix acc = m.matrix();
    for (Eigen::Index i = 0; i < kk; ++i) {
      double zi = 0.0;
      for (std::size_t blk = 0; blk < z.size(); ++blk) zi += bs.mult[blk] * tr_prod(z[blk], bs.blocks[blk][static_cast<std::size_t>(i)]);
      acc += zi * bs.sign[static_cast<std::size_t>(i)] * dense[static_cast<std::size_t>(i)];
    }
    return hermitian_eig_raw(0.5 * (acc + acc.adjoint()), false).values(dim - 1);
  };

  SolverReport report;
  report.solver = "log_barrier";
  double decrement = 0.0;
  double bound = std::numeric_limits<double>::infinity();
  constexpr int kMaxNewton = 200;
  for (int stage = 0; stage < 10; ++stage, mu /= 10.0) {
    for (int it = 0; it < kMaxNewton; ++it) {
      ++report.iterations;
      Eigen::VectorXd grad = Eigen::VectorXd::Zero(kk);
      Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(kk, kk);
      barrier_derivatives(bs, assemble(bs, x, false), false, grad, hess);
      barrier_derivatives(bs, assemble(bs, x, true), true, grad, hess);
      grad = mu * grad - obj;
      hess *= mu;
      // The identity coefficient is pinned by Tr rho = 1.
      const Eigen::VectorXd g = grad.tail(kk - 1);
      const Eigen::MatrixXd h = hess.bottomRightCorner(kk - 1, kk - 1);
      const Eigen::VectorXd step = -h.ldlt().solve(g);
      const double previous = decrement;
      decrement = -g.dot(step);
      if (!(decrement >= 0.0) || decrement < 1e-24 * mu) break;

      // Inside the quadratic-convergence region of the self-concordant
      // barrier full steps stay feasible; keep polishing while the decrement
      // still shrinks.
      if (decrement < 1e-2 * mu) {
        if (it > 0 && decrement >= 0.5 * previous) break;
        Eigen::VectorXd trial = x;
        trial.tail(kk - 1) += step;
        if (!merit(trial)) break;
        x = trial;
        continue;
      }
      const double f0 = *merit(x);
      double t = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
        Eigen::VectorXd trial = x;
        trial.tail(kk - 1) += t * step;
        const auto f1 = merit(trial);
        if (f1 && *f1 <= f0 - 0.25 * t * decrement) {
          x = trial;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    bound = std::min(bound, dual_bound(x));
  }

  Matrix rho = Matrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < kk; ++i) rho += x(i) * dense[static_cast<std::size_t>(i)];

  std::vector<int> a_side(static_cast<std::size_t>(k));
  for (int q = 0; q < k; ++q) a_side[static_cast<std::size_t>(q)] = q;
  const DenseOperator rho_op(n, 0.5 * (rho + rho.adjoint()));
  const double e1 = min_eigenvalue(rho_op);
  const double e2 = min_eigenvalue(partial_transpose(rho_op, a_side));

  PptResult out;
  out.value = tr_prod(m.matrix(), rho_op.matrix());
  out.rho = permute_qubits(rho_op, inverse(perm));
  report.optimum = out.value;
  report.bound = bound;
  report.gap = bound - out.value;
  report.min_eig_slack = std::min(e1, e2);
  report.primal_residual = std::abs(rho_op.trace().real() - 1.0) + std::max(0.0, -report.min_eig_slack);
  report.dual_residual = decrement;
  report.converged = report.gap < config.barrier_tol && report.min_eig_slack >= -1e-8;
  report.status = report.converged ? "optimal" : "not_converged";
  out.report = report;
  return out;
}

std::vector<std::vector<int>> bipartitions(int num_qubits, bool permutation_invariant) {
  if (num_qubits < 2) throw std::invalid_argument("bipartitions: need at least two qubits");
  std::vector<std::vector<int>> out;
  if (permutation_invariant) {
    for (int k = 1; 2 * k <= num_qubits; ++k) {
      std::vector<int> part(static_cast<std::size_t>(k));
      for (int q = 0; q < k; ++q) part[static_cast<std::size_t>(q)] = q;
      out.push_back(std::move(part));
    }
    return out;
  }
  const std::uint64_t rest = std::uint64_t{1} << (num_qubits - 1);
  for (std::uint64_t mask = 0; mask + 1 < rest; ++mask) {
    std::vector<int> part{0};
    for (int q = 1; q < num_qubits; ++q) {
      if (mask >> (q - 1) & 1u) part.push_back(q);
    }
    out.push_back(std::move(part));
  }
  std::sort(out.begin(), out.end());
  return out;
}

BipartiteMax max_ppt_all(const DenseOperator& m, const SolverConfig& config) {
  const bool pi = is_permutation_invariant(m, invariance_tol(m));
  BipartiteMax best;
  bool first = true;
  for (const auto& part : bipartitions(m.num_qubits(), pi)) {
    const PptResult r = max_ppt({m, part}, config);
    if (!r.report.converged) {
      throw NumericalError("max_ppt did not converge (gap " + std::to_string(r.report.gap) + ", slack " +
                           std::to_string(r.report.min_eig_slack) + ")");
    }
    if (first || r.value > best.value + 1e-9) {
      best = {r.value, part, r.report.bound};
      first = false;
    }
    best.bound = std::max(best.bound, r.report.bound);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Seesaw

SeesawResult max_bisep_seesaw(const DenseOperator& m_in, const std::vector<int>& part, const SolverConfig& config) {
  const int n = m_in.num_qubits();
  check_part(n, part);
  const auto perm = leading_permutation(n, part);
  const Matrix m = permute_qubits(m_in.hermitian_part_checked(), perm).matrix();
  const Eigen::Index da = qubit_dim(static_cast<int>(part.size()));
  const Eigen::Index db = qubit_dim(n) / da;

  auto reduce_to_a = [&](const Vector& b) {
    Matrix t(m.rows(), da);
    for (Eigen::Index c = 0; c < da; ++c) t.col(c) = m.middleCols(c * db, db) * b;
    Matrix out(da, da);
    for (Eigen::Index r = 0; r < da; ++r) out.row(r) = b.adjoint() * t.middleRows(r * db, db);
    return out;
  };
  auto reduce_to_b = [&](const Vector& a) {
    Matrix t = Matrix::Zero(m.rows(), db);
    for (Eigen::Index c = 0; c < da; ++c) t += a(c) * m.middleCols(c * db, db);
    Matrix out = Matrix::Zero(db, db);
    for (Eigen::Index r = 0; r < da; ++r) out += std::conj(a(r)) * t.middleRows(r * db, db);
    return out;
  };
  auto top = [](const Matrix& h) { return top_eigenpair(0.5 * (h + h.adjoint())); };

  SeesawResult best;
  best.value = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < config.seesaw_restarts; ++r) {
    std::mt19937_64 rng(config.seed + static_cast<std::uint64_t>(r));
    Vector b = random_state(db, rng);
    Vector a;
    std::vector<double> history;
    double value = -std::numeric_limits<double>::infinity();
    for (int it = 0; it < config.seesaw_max_iterations; ++it) {
      auto [va, veca] = top(reduce_to_a(b));
      a = std::move(veca);
      history.push_back(va);
      auto [vb, vecb] = top(reduce_to_b(a));
      b = std::move(vecb);
      history.push_back(vb);
      const double improvement = vb - value;
      value = vb;
      if (improvement < config.seesaw_tol) break;
    }
    best.restart_values.push_back(value);
    if (value > best.value) {
      best.value = value;
      best.a = a;
      best.b = b;
      best.history = std::move(history);
    }
  }
  return best;
}

BipartiteMax max_bisep_all(const DenseOperator& m, const SolverConfig& config) {
  if (m.num_qubits() > 8) throw std::invalid_argument("max_bisep_all: supports up to 8 qubits");
  const bool pi = is_permutation_invariant(m, invariance_tol(m));
  BipartiteMax best;
  bool first = true;
  for (const auto& part : bipartitions(m.num_qubits(), pi)) {
    const double v = max_bisep_seesaw(m, part, config).value;
    if (first || v > best.value + 1e-9) {
      best = {v, part, 0.0};
      first = false;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Symmetric products

namespace {

struct ProductObjective {
  const Matrix* m;
  int n;
};

double product_value(const Matrix& m, int n, double theta, double phi) {
  const Complex a0 = std::cos(theta / 2.0);
  const Complex a1 = std::polar(std::sin(theta / 2.0), phi);
  Vector psi = Vector::Ones(1);
  for (int q = 0; q < n; ++q) {
    Vector next(psi.size() * 2);
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
      next(2 * i) = psi(i) * a0;
      next(2 * i + 1) = psi(i) * a1;
    }
    psi = std::move(next);
  }
  return psi.dot(m * psi).real();
}

double negated_product_value(const gsl_vector* v, void* params) {
  const auto* o = static_cast<const ProductObjective*>(params);
  return -product_value(*o->m, o->n, gsl_vector_get(v, 0), gsl_vector_get(v, 1));
}

}  // namespace

SymmetricProductResult max_symmetric_product(const DenseOperator& m_in, int restarts, double tol, std::uint64_t seed) {
  if (restarts < 1) throw std::invalid_argument("max_symmetric_product: need at least one start");
  const Matrix m = m_in.hermitian_part_checked().matrix();
  ProductObjective obj{&m, m_in.num_qubits()};
  gsl_multimin_function fn{&negated_product_value, 2, &obj};
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2);
  gsl_vector* x = gsl_vector_alloc(2);
  gsl_vector* step = gsl_vector_alloc(2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double size_tol = std::sqrt(tol);

  SymmetricProductResult best;
  best.value = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(r));
    gsl_vector_set(x, 0, std::acos(1.0 - 2.0 * unit(rng)));
    gsl_vector_set(x, 1, 2.0 * std::numbers::pi * unit(rng));
    gsl_vector_set_all(step, 0.4);
    gsl_multimin_fminimizer_set(s, &fn, x, step);
    for (int it = 0; it < 10000; ++it) {
      if (gsl_multimin_fminimizer_iterate(s)) break;
      if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), size_tol) == GSL_SUCCESS) break;
    }
    const double v = -gsl_multimin_fminimizer_minimum(s);
    if (v > best.value) {
      best.value = v;
      best.theta = gsl_vector_get(s->x, 0);
      best.phi = gsl_vector_get(s->x, 1);
    }
  }
  gsl_vector_free(step);
  gsl_vector_free(x);
  gsl_multimin_fminimizer_free(s);
  return best;
}

// ---------------------------------------------------------------------------
// q scan

DenseOperator q_observable(int num_qubits, int excitations, double q) {
  if (excitations < 0 || excitations > num_qubits) throw std::invalid_argument("q_observable: bad excitation count");
  const double jz = 0.5 * (num_qubits - 2 * excitations);
  return collective_j_power(num_qubits, CollectiveAxis::x(), 2) + collective_j_power(num_qubits, CollectiveAxis::y(), 2) -
         Complex(q) * collective_j_power(num_qubits, CollectiveAxis::z(), 2, jz);
}

bool QScanResult::unimodal() const {
  std::size_t i = 1;
  while (i < rows.size() && rows[i].tolerance >= rows[i - 1].tolerance - 1e-12) ++i;
  while (i < rows.size() && rows[i].tolerance <= rows[i - 1].tolerance + 1e-12) ++i;
  return i >= rows.size();
}

QScanResult q_scan(int num_qubits, int excitations, const std::vector<double>& q_grid, const SolverConfig& config) {
  if (q_grid.empty()) throw std::invalid_argument("q_scan: empty grid");
  const StateVector target = dicke(num_qubits, excitations);
  const DenseOperator rho = target.projector();
  const NoiseModel white = NoiseModel::white(num_qubits);
  QScanResult out;
  for (double q : q_grid) {
    if (!(q >= 0.0)) throw std::invalid_argument("q_scan: q must be non-negative");
    const BipartiteMax c = max_ppt_all(q_observable(num_qubits, excitations, q), config);
    const DenseOperator w = independent_witness(target, c.bound, q).realize();
    // A witness that misses the target tolerates no noise at all.
    const double tol = expectation(w, rho) < 0.0 ? noise_tolerance(w, white, rho) : 0.0;
    out.rows.push_back({q, c.bound, tol});
    if (out.rows.back().tolerance > out.rows[out.best].tolerance + 1e-12) out.best = out.rows.size() - 1;
  }
  return out;
}

}  // namespace symwit
