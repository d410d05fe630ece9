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

#ifndef SYMWIT_OPTIMIZER_HPP
#define SYMWIT_OPTIMIZER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symwit/config.hpp"
#include "symwit/linalg.hpp"
#include "symwit/witness.hpp"

namespace symwit {

struct SolverReport {
  std::string solver;
  std::string status;
  double optimum = 0.0;         // primal objective at the returned point
  double bound = 0.0;           // dual / model bound on the optimum
  double gap = 0.0;             // |optimum - bound|
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double min_eig_slack = 0.0;   // smallest eigenvalue of the PSD constraints
  int iterations = 0;
  bool converged = false;

  std::string to_json() const;
};

struct WitnessOptimizationProblem {
  StateVector target;
  std::string target_label;
  NoiseModel noise;
  std::vector<BasisTerm> basis;
  std::optional<double> lambda_sq;  // defaults to schmidt_max_sq(target)
  double alpha_max = 1000.0;
};

/// identity, then (J_a - <J_a>)^p for p = 2, 4, ..., max_power (every p when
/// `odd_powers`) and each axis in `axes` ("xy", "xyz", ...).
std::vector<BasisTerm> moment_basis(const StateVector& target, const std::string& axes, int max_power,
                                    bool odd_powers = false);

/// Minimizes Tr(W rho_noise) over W = sum c_k B_k with Tr(W rho) = -1 and
/// W - alpha W^(P) >= 0 for some alpha > 0, by Kelley cutting planes.
/// Throws NumericalError when the constraints admit no solution.
std::pair<WitnessSpec, SolverReport> optimize_witness(const WitnessOptimizationProblem& p,
                                                      const SolverConfig& config = {});

struct PptProblem {
  DenseOperator m;
  std::vector<int> part;  // qubits on the transposed side
};

struct PptResult {
  double value = 0.0;  // Tr(M rho); report.bound is a certified upper bound
  DenseOperator rho;
  SolverReport report;
};

/// max Tr(M rho) over rho >= 0, Tr rho = 1, rho^{T_part} >= 0. Log-barrier
/// Newton method restricted to operators invariant under the qubit
/// permutations within each side that leave M fixed.
PptResult max_ppt(const PptProblem& p, const SolverConfig& config = {});

/// Bipartitions as the side containing qubit 0, lexicographically ordered.
/// With `permutation_invariant` only {0..k-1} for k = 1..N/2 are listed.
std::vector<std::vector<int>> bipartitions(int num_qubits, bool permutation_invariant);

struct BipartiteMax {
  double value = 0.0;
  std::vector<int> part;
  double bound = 0.0;  // PPT runs only
};

BipartiteMax max_ppt_all(const DenseOperator& m, const SolverConfig& config = {});

struct SeesawResult {
  double value = 0.0;
  Vector a, b;
  std::vector<double> restart_values;
  std::vector<double> history;  // objective per half-step of the best restart
};

/// Best <a,b|M|a,b> found by alternating top-eigenvector updates.
SeesawResult max_bisep_seesaw(const DenseOperator& m, const std::vector<int>& part, const SolverConfig& config = {});

BipartiteMax max_bisep_all(const DenseOperator& m, const SolverConfig& config = {});

struct SymmetricProductResult {
  double value = 0.0;
  double theta = 0.0;
  double phi = 0.0;
};

/// Best <a|^{(x)N} M |a>^{(x)N} over single-qubit |a>, Nelder-Mead on the
/// Bloch sphere from `restarts` random starts.
SymmetricProductResult max_symmetric_product(const DenseOperator& m, int restarts = 20, double tol = 1e-10,
                                             std::uint64_t seed = 1);

struct QScanRow {
  double q = 0.0;
  double c = 0.0;
  double tolerance = 0.0;
};

struct QScanResult {
  std::vector<QScanRow> rows;
  std::size_t best = 0;

  /// Nondecreasing then nonincreasing (within 1e-12).
  bool unimodal() const;
};

/// J_x^2 + J_y^2 - q (J_z - <J_z>)^2 for the target D(N, m).
DenseOperator q_observable(int num_qubits, int excitations, double q);

QScanResult q_scan(int num_qubits, int excitations, const std::vector<double>& q_grid, const SolverConfig& config = {});

}  // namespace symwit

#endif  // SYMWIT_OPTIMIZER_HPP
