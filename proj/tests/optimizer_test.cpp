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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "symwit/spectral.hpp"
#include "test_util.hpp"

using namespace symwit;
using symwit::testing::random_hermitian;

namespace {

DenseOperator jsq(int n, const std::string& axes) {
  DenseOperator out = DenseOperator::zero(n);
  for (char a : axes) out += collective_j_power(n, CollectiveAxis::parse(std::string(1, a)), 2);
  return out;
}

double optimized_tolerance(const std::string& axes) {
  const StateVector d63 = dicke(6, 3);
  const WitnessOptimizationProblem p{d63, "D(6,3)", NoiseModel::white(6), moment_basis(d63, axes, 6), std::nullopt};
  const auto [w, report] = optimize_witness(p);
  EXPECT_TRUE(report.converged) << report.to_json();
  EXPECT_LT(report.gap, 1e-6);
  EXPECT_GE(min_eigenvalue(w.realize() - Complex(*w.alpha) * w.projector_witness()), -1e-9);
  EXPECT_NEAR(expectation(w, d63.projector()), -1.0, 1e-9);
  return noise_tolerance(w, NoiseModel::white(6), d63.projector());
}

// Random permutation-invariant Hermitian operator.
DenseOperator random_pi(int n, std::mt19937_64& rng) {
  return symmetrize(random_hermitian(n, rng));
}

}  // namespace

TEST(moment_basis, even_powers_by_default) {
  const auto b = moment_basis(dicke(6, 3), "xy", 6);
  ASSERT_EQ(b.size(), 7u);
  EXPECT_EQ(b[0].kind, BasisTerm::Kind::identity);
  EXPECT_EQ(b[1].power, 2);
  EXPECT_EQ(b[6].power, 6);
  EXPECT_EQ(b[6].axis, 'y');
  EXPECT_EQ(moment_basis(dicke(6, 3), "xyz", 6, true).size(), 19u);
}

TEST(moment_basis, z_moments_are_centered) {
  const auto b = moment_basis(dicke(4, 1), "z", 2);
  EXPECT_DOUBLE_EQ(b[1].shift, 1.0);
  EXPECT_DOUBLE_EQ(moment_basis(dicke(6, 3), "z", 2)[1].shift, 0.0);
}

TEST(optimize_witness, two_setting_basis) { EXPECT_NEAR(optimized_tolerance("xy"), 0.1391, 1e-3); }

TEST(optimize_witness, three_setting_basis) { EXPECT_NEAR(optimized_tolerance("xyz"), 0.2735, 1e-3); }

TEST(optimize_witness, projector_span_recovers_the_projector_witness) {
  const StateVector d63 = dicke(6, 3);
  const WitnessOptimizationProblem p{d63, "", NoiseModel::white(6), {BasisTerm::identity(), BasisTerm::projector()},
                                     std::nullopt};
  const auto [w, report] = optimize_witness(p);
  // Tr(W^(P) rho) = -0.4 and Tr(W^(P) 1/64) = 0.6 - 1/64.
  const double a = -0.4, b = 0.6 - 1.0 / 64.0;
  EXPECT_NEAR(noise_tolerance(w, NoiseModel::white(6), d63.projector()), a / (a - b), 1e-6);
}

TEST(optimize_witness, never_worse_than_a_witness_in_the_span) {
  const StateVector d63 = dicke(6, 3);
  const WitnessSpec catalog_p3 = catalog("WP3_D63");
  const WitnessOptimizationProblem p{d63, "", NoiseModel::white(6), catalog_p3.basis, std::nullopt};
  const auto [w, report] = optimize_witness(p);
  const NoiseModel white = NoiseModel::white(6);
  EXPECT_GE(noise_tolerance(w, white, d63.projector()), noise_tolerance(catalog_p3, white, d63.projector()) - 1e-6);
}

TEST(optimize_witness, nonwhite_noise_gives_a_valid_witness) {
  // The infimum for this noise is only approached with unbounded
  // coefficients, so the solver must say that the box is active.
  const StateVector d63 = dicke(6, 3);
  const WitnessOptimizationProblem p{d63, "", nonwhite_noise(), moment_basis(d63, "xyz", 6), std::nullopt};
  const auto [w, report] = optimize_witness(p);
  EXPECT_FALSE(report.converged);
  EXPECT_EQ(report.status, "bound_active");
  EXPECT_GE(report.min_eig_slack, -1e-9);
  EXPECT_NEAR(expectation(w, d63.projector()), -1.0, 1e-9);
}

TEST(optimize_witness, infeasible_span_is_reported) {
  const StateVector d63 = dicke(6, 3);
  const WitnessOptimizationProblem p{d63, "", NoiseModel::white(6), {BasisTerm::identity()}, std::nullopt};
  EXPECT_THROW(optimize_witness(p), NumericalError);
}

TEST(optimize_witness, rejects_dependent_basis) {
  const StateVector d = dicke(4, 2);
  const WitnessOptimizationProblem p{d, "", NoiseModel::white(4), {BasisTerm::identity(), BasisTerm::j('z', 0)},
                                     std::nullopt};
  EXPECT_THROW(optimize_witness(p), std::invalid_argument);
}

TEST(optimize_witness, report_serializes) {
  SolverReport r;
  r.solver = "x";
  r.converged = true;
  EXPECT_NE(r.to_json().find("\"converged\":true"), std::string::npos);
}

TEST(bipartitions, enumeration) {
  EXPECT_EQ(bipartitions(6, false).size(), 31u);
  EXPECT_EQ(bipartitions(6, true).size(), 3u);
  const auto all = bipartitions(4, false);
  EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
  EXPECT_EQ(all.front(), (std::vector<int>{0}));
  for (const auto& p : all) EXPECT_EQ(p.front(), 0);
}

TEST(max_ppt, identity_gives_one) {
  const auto r = max_ppt({DenseOperator::identity(4), {0, 2}});
  EXPECT_NEAR(r.value, 1.0, 1e-9);
  EXPECT_TRUE(r.report.converged);
}

TEST(max_ppt, two_qubit_bell_projector) {
  // For two qubits PPT equals separable; the best separable overlap with a
  // maximally entangled state is 1/2.
  Vector phi = Vector::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  const auto r = max_ppt({StateVector(2, phi).projector(), {0}});
  EXPECT_NEAR(r.value, 0.5, 1e-6);
}

TEST(max_ppt, five_and_six_qubit_constants) {
  EXPECT_NEAR(max_ppt_all(jsq(5, "xy")).value, 7.8723, 1e-3);
  const auto six = max_ppt_all(jsq(6, "xy"));
  EXPECT_NEAR(six.value, 11.0179, 1e-3);
  EXPECT_EQ(six.part, (std::vector<int>{0}));
}

TEST(max_ppt, returned_state_is_feasible) {
  const auto r = max_ppt({jsq(5, "xy"), {1, 3}});
  EXPECT_TRUE(r.report.converged) << r.report.to_json();
  EXPECT_NEAR(r.rho.trace().real(), 1.0, 1e-10);
  const std::vector<int> part{1, 3};
  EXPECT_GE(min_eigenvalue(r.rho), -1e-8);
  EXPECT_GE(min_eigenvalue(partial_transpose(r.rho, part)), -1e-8);
  EXPECT_NEAR(expectation(jsq(5, "xy"), r.rho), r.value, 1e-9);
  EXPECT_GE(r.report.bound, r.value - 1e-12);
}

TEST(max_ppt, dominates_seesaw) {
  std::mt19937_64 rng(11);
  SolverConfig cfg;
  cfg.seesaw_restarts = 10;
  for (int trial = 0; trial < 4; ++trial) {
    const DenseOperator m = trial < 2 ? random_pi(4, rng) : random_hermitian(3, rng);
    for (const auto& part : bipartitions(m.num_qubits(), trial < 2)) {
      const auto ppt = max_ppt({m, part}, cfg);
      ASSERT_TRUE(ppt.report.converged) << ppt.report.to_json();
      EXPECT_GE(ppt.report.bound, max_bisep_seesaw(m, part, cfg).value - 1e-6);
    }
  }
}

TEST(max_ppt, rejects_bad_bipartitions) {
  const DenseOperator m = DenseOperator::identity(3);
  EXPECT_THROW(max_ppt({m, {}}), std::invalid_argument);
  EXPECT_THROW(max_ppt({m, {0, 1, 2}}), std::invalid_argument);
  EXPECT_THROW(max_ppt({m, {0, 0}}), std::invalid_argument);
  EXPECT_THROW(max_ppt({m, {3}}), std::invalid_argument);
}

TEST(seesaw, w_state_projector) {
  const auto best = max_bisep_all(dicke(4, 1).projector());
  EXPECT_NEAR(best.value, 0.75, 1e-9);
}

TEST(seesaw, diagonal_observable) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RealVector diag(16);
  for (Eigen::Index i = 0; i < 16; ++i) diag(i) = u(rng);
  const DenseOperator m(4, diag.cast<Complex>().asDiagonal());
  EXPECT_NEAR(max_bisep_seesaw(m, {0, 1}).value, diag.maxCoeff(), 1e-9);
}

TEST(seesaw, monotone_history) {
  std::mt19937_64 rng(3);
  const DenseOperator m = random_hermitian(5, rng);
  SolverConfig cfg;
  cfg.seesaw_restarts = 5;
  const auto r = max_bisep_seesaw(m, {0, 2}, cfg);
  ASSERT_GE(r.history.size(), 2u);
  for (std::size_t i = 1; i < r.history.size(); ++i) EXPECT_GE(r.history[i], r.history[i - 1] - 1e-12);
}

TEST(seesaw, fixed_point_is_locally_optimal) {
  std::mt19937_64 rng(9);
  const DenseOperator m = random_hermitian(4, rng);
  const auto r = max_bisep_seesaw(m, {0}, {});
  const Vector ab = [&] {
    Vector v(16);
    for (Eigen::Index i = 0; i < 2; ++i)
      for (Eigen::Index j = 0; j < 8; ++j) v(i * 8 + j) = r.a(i) * r.b(j);
    return v;
  }();
  EXPECT_NEAR(ab.dot(m.matrix() * ab).real(), r.value, 1e-9);
}

TEST(seesaw, six_qubit_constant_matches_ppt) {
  const auto best = max_bisep_all(jsq(6, "xy"));
  EXPECT_NEAR(best.value, 11.0179, 1e-3);
  EXPECT_NEAR(best.value, max_ppt_all(jsq(6, "xy")).value, 1e-3);
}

TEST(seesaw, restarts_agree) {
  const auto r = max_bisep_seesaw(jsq(6, "xy"), {0}, {});
  ASSERT_EQ(r.restart_values.size(), 50u);
  const auto hits = std::count_if(r.restart_values.begin(), r.restart_values.end(),
                                  [&](double v) { return std::abs(v - r.value) < 1e-6; });
  EXPECT_GE(hits, 45);
}

TEST(max_bisep_all, independent_witness_constants) {
  EXPECT_NEAR(max_bisep_all(q_observable(4, 1, 1.47)).value, 4.1234, 1e-3);
  EXPECT_NEAR(max_bisep_all(q_observable(5, 1, 2.22)).value, 5.6242, 1e-3);
  EXPECT_NEAR(max_bisep_all(q_observable(6, 1, 3.13)).value, 7.1095, 1e-3);
}

TEST(q_observable, matches_definition) {
  const DenseOperator jz = collective_j(4, CollectiveAxis::z());
  const DenseOperator shifted = jz - DenseOperator::identity(4);
  const DenseOperator expected = jsq(4, "xy") - Complex(1.5) * (shifted * shifted);
  EXPECT_LT((q_observable(4, 1, 1.5) - expected).max_abs(), 1e-12);
}

TEST(symmetric_product, reference_values) {
  EXPECT_NEAR(max_symmetric_product(collective_j_power(6, CollectiveAxis::z(), 2)).value, 9.0, 1e-8);
  EXPECT_NEAR(max_symmetric_product(jsq(6, "xy")).value, 10.5, 1e-8);
  EXPECT_NEAR(max_symmetric_product(DenseOperator::identity(5)).value, 1.0, 1e-12);
}

TEST(symmetric_product, bounded_by_biseparable_maximum) {
  std::mt19937_64 rng(21);
  const DenseOperator m = random_pi(4, rng);
  EXPECT_LE(max_symmetric_product(m).value, max_bisep_all(m).value + 1e-8);
}

TEST(q_scan, four_qubit_w_state) {
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(0.1 * i);
  const QScanResult r = q_scan(4, 1, grid);
  ASSERT_EQ(r.rows.size(), 41u);
  EXPECT_TRUE(r.unimodal());
  EXPECT_GE(r.rows[r.best].q, 1.4 - 1e-12);
  EXPECT_LE(r.rows[r.best].q, 1.6 + 1e-12);
  EXPECT_NEAR(r.rows[r.best].tolerance, 0.1476, 1e-3);
  EXPECT_NEAR(r.rows[0].c, max_ppt_all(jsq(4, "xy")).bound, 1e-9);
}

TEST(q_scan, unimodality_check) {
  QScanResult r;
  r.rows = {{0, 0, 0.1}, {1, 0, 0.2}, {2, 0, 0.3}, {3, 0, 0.2}};
  EXPECT_TRUE(r.unimodal());
  r.rows.push_back({4, 0, 0.25});
  EXPECT_FALSE(r.unimodal());
}
