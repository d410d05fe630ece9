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

#include "symwit/witness.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "symwit/spectral.hpp"
#include "test_util.hpp"

using namespace symwit;
using symwit::testing::max_diff;
using symwit::testing::random_hermitian;
using symwit::testing::random_matrix;

namespace {

DenseOperator white(int n) { return NoiseModel::white(n).rho; }

DenseOperator jsq(int n, const char* axes) {
  DenseOperator out = DenseOperator::zero(n);
  for (const char* a = axes; *a; ++a) {
    const DenseOperator j = collective_j(n, CollectiveAxis::parse(std::string(1, *a)));
    out += j * j;
  }
  return out;
}

DenseOperator random_density(int n, std::mt19937_64& rng) {
  const Matrix g = random_matrix(qubit_dim(n), qubit_dim(n), rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace();
  return DenseOperator(n, rho);
}

double tolerance_of(const char* name) {
  const WitnessSpec w = catalog(name);
  return noise_tolerance(w, NoiseModel::white(w.num_qubits), w.target.projector());
}

}  // namespace

TEST(projector_witness, dicke_constants) {
  EXPECT_NEAR(*projector_witness(dicke(6, 3)).lambda_sq, 0.5 * 6 / 5, 1e-12);
  EXPECT_NEAR(*projector_witness(dicke(4, 1)).lambda_sq, 3.0 / 4, 1e-12);
  EXPECT_NEAR(*projector_witness(dicke(4, 2)).lambda_sq, 2.0 / 3, 1e-12);
  for (int n : {5, 7, 8}) EXPECT_NEAR(*projector_witness(dicke(n, 1)).lambda_sq, (n - 1.0) / n, 1e-12);
  EXPECT_NEAR(*projector_witness(dicke(8, 4)).lambda_sq, 0.5 * 8 / 7, 1e-12);
}

TEST(catalog, two_setting_coefficients_are_exact) {
  const WitnessSpec w = catalog("WP2_D63");
  ASSERT_EQ(w.basis.size(), 7u);
  EXPECT_EQ(*w.exact[0], Rational(31, 4));
  EXPECT_EQ(*w.exact[1], Rational(-35, 18));
  EXPECT_EQ(*w.exact[3], Rational(55, 72));
  EXPECT_EQ(*w.exact[5], Rational(-5, 72));
  const DenseOperator jx = collective_j(6, CollectiveAxis::x()), jy = collective_j(6, CollectiveAxis::y());
  auto pw = [](const DenseOperator& j, int k) {
    DenseOperator out = DenseOperator::identity(6);
    for (int i = 0; i < k; ++i) out = out * j;
    return out;
  };
  const DenseOperator oracle = DenseOperator::identity(6) * Complex(7.75) - (pw(jx, 2) + pw(jy, 2)) * Complex(35.0 / 18) +
                               (pw(jx, 4) + pw(jy, 4)) * Complex(55.0 / 72) - (pw(jx, 6) + pw(jy, 6)) * Complex(5.0 / 72);
  EXPECT_LT(max_diff(w.realize(), oracle), 1e-10);
}

TEST(catalog, eight_qubit_table_entries) {
  const WitnessSpec w = catalog("WP3_D84");
  EXPECT_EQ(w.num_qubits, 8);
  bool found = false;
  for (std::size_t k = 0; k < w.basis.size(); ++k) {
    if (w.basis[k].axis == 'z' && w.basis[k].power == 2) {
      EXPECT_EQ(*w.exact[k], Rational::parse("3.124"));
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(catalog, independent_witness_at_zero_q) {
  const WitnessSpec w = catalog("WI3_D41", {.q = 0.0, .c = 4.0});
  EXPECT_EQ(w.basis.size(), 3u);
  EXPECT_LT(max_diff(w.realize(), DenseOperator::identity(4) * Complex(4.0) - jsq(4, "xy")), 1e-12);
  EXPECT_THROW(catalog("WI3_D41", {.q = 2.0}), std::invalid_argument);
  EXPECT_THROW(catalog("nope"), std::invalid_argument);
}

TEST(catalog, every_name_builds_and_serializes) {
  for (const std::string& name : catalog_names()) {
    if (name == "WP3_D10") continue;  // covered by the acceptance run
    const WitnessSpec w = catalog(name);
    const WitnessSpec back = WitnessSpec::from_json(w.to_json());
    EXPECT_EQ(back.to_json(), w.to_json()) << name;
    EXPECT_LT(max_diff(back.realize(), w.realize()), 1e-14) << name;
    EXPECT_TRUE(w.realize().is_hermitian()) << name;
    EXPECT_LT(expectation(w, w.target.projector()), 0.0) << name;
  }
}

TEST(expectation, reference_values) {
  EXPECT_NEAR(expectation(catalog("WI2_D63"), dicke(6, 3).projector()), 11.0179 - 12.0, 1e-10);
  EXPECT_NEAR(expectation(catalog("WP_D63"), white(6)), 0.6 - 1.0 / 64, 1e-12);
  EXPECT_THROW(expectation(catalog("WP_D63"), DenseOperator::identity(6)), std::invalid_argument);
}

TEST(noise_tolerance, table_values) {
  // Analytic oracles: a / (a - b) with a = Tr(W rho), b = Tr(W)/2^N.
  EXPECT_NEAR(tolerance_of("WP_D63"), 0.4 / (0.4 + 0.6 - 1.0 / 64), 1e-12);
  EXPECT_NEAR(tolerance_of("WI2_D63"), 0.9821 / 9.0, 1e-12);
  EXPECT_NEAR(tolerance_of("WI2_D5"), (8.5 - 7.8723) / (8.5 - 2.5), 1e-12);
  EXPECT_NEAR(tolerance_of("WP_D41"), 0.25 / (0.25 + 0.75 - 1.0 / 16), 1e-12);
  EXPECT_NEAR(tolerance_of("WP_D42"), 16.0 / 45, 1e-12);
  EXPECT_NEAR(tolerance_of("WI3_D41"), (5 - 4.1234) / (5 - 4.1234 + 4.1234 - 2 + 1.47 * 2), 1e-12);

  const std::pair<const char*, double> printed[] = {{"WP_D63", 0.4063}, {"WP3_D63", 0.2735}, {"WP2_D63", 0.1391},
                                                     {"WI2_D63", 0.1091}, {"WI2_D5", 0.1046}, {"WP_D41", 0.2667},
                                                     {"WI3_D41", 0.1476}, {"WP_D42", 0.3556}, {"WP3_D42", 0.2759}};
  for (const auto& [name, value] : printed) EXPECT_NEAR(tolerance_of(name), value, 5e-4) << name;
}

TEST(noise_tolerance, threshold_is_sharp) {
  for (const char* name : {"WP3_D63", "WI3_D41", "WP_D42"}) {
    const WitnessSpec w = catalog(name);
    const DenseOperator rho = w.target.projector();
    const NoiseModel noise = NoiseModel::white(w.num_qubits);
    const double p = noise_tolerance(w, noise, rho);
    auto at = [&](double q) { return expectation(w, rho * Complex(1 - q) + noise.rho * Complex(q)); };
    EXPECT_LT(at(p * (1 - 1e-6)), 0.0);
    EXPECT_GT(at(p * (1 + 1e-6)), 0.0);
  }
}

TEST(noise_tolerance, rejects_undetected_state) {
  const WitnessSpec w = catalog("WP_D63");
  EXPECT_THROW(noise_tolerance(w, NoiseModel::white(6), white(6)), std::domain_error);
}

TEST(noise_tolerance, symmetrization_leaves_it_unchanged) {
  std::mt19937_64 rng(8);
  const DenseOperator rho = dicke(6, 3).projector();
  for (const NoiseModel& noise : {NoiseModel::white(6), nonwhite_noise()}) {
    for (int t = 0; t < 5; ++t) {
      const DenseOperator w = catalog("WP_D63").realize() + random_hermitian(6, rng) * Complex(0.01);
      EXPECT_NEAR(noise_tolerance(symmetrize(w), noise, rho), noise_tolerance(w, noise, rho), 1e-10);
    }
  }
}

TEST(lmi, catalog_alphas_hold) {
  for (const auto& [name, alpha] : {std::pair{"WP2_D63", 2.5}, {"WP3_D63", 2.5}, {"WP3_D42", 3.0}}) {
    const WitnessSpec w = catalog(name);
    ASSERT_TRUE(w.alpha.has_value());
    EXPECT_EQ(*w.alpha, alpha);
    EXPECT_GE(min_eigenvalue(w.realize() - w.projector_witness() * Complex(alpha)), -1e-9) << name;
  }
}

TEST(lmi, derived_alpha_is_the_edge_of_the_feasible_interval) {
  const WitnessSpec w = catalog("WP3_D63");
  const auto a = derive_alpha(w.realize(), w.target, *w.lambda_sq);
  ASSERT_TRUE(a.has_value());
  EXPECT_GE(*a, 2.5);
  const DenseOperator wp = w.projector_witness();
  EXPECT_GE(min_eigenvalue(w.realize() - wp * Complex(*a)), -1e-9);
  EXPECT_LT(min_eigenvalue(w.realize() - wp * Complex(*a + 1e-6)), -1e-9);
}

TEST(lmi, printed_eight_qubit_witness_admits_no_alpha) {
  const WitnessSpec w = catalog("WP3_D84", {.printed = true});
  EXPECT_FALSE(w.alpha.has_value());
  EXPECT_TRUE(w.alpha_derived);
  const DenseOperator op = w.realize(), wp = w.projector_witness();
  for (double a = 0.25; a <= 10.0; a += 0.25) EXPECT_LT(min_eigenvalue(op - wp * Complex(a)), -1e-9) << a;
  EXPECT_THROW(fidelity_bound(w, -1.0), std::invalid_argument);
}

// Reference numbers from a numpy dense eigensolver scan over alpha.
TEST(lmi, certified_large_witnesses) {
  const WitnessSpec printed8 = catalog("WP3_D84", {.printed = true});
  const Certification c8 = certify_shift(printed8.realize(), printed8.target, *printed8.lambda_sq);
  EXPECT_NEAR(c8.shift, 2.4608e-4, 1e-6);
  EXPECT_NEAR(c8.alpha, 2.3889, 1e-3);

  const WitnessSpec w8 = catalog("WP3_D84");
  ASSERT_TRUE(w8.alpha.has_value());
  EXPECT_NEAR(w8.coefficients[0], 1.3652 + c8.shift, 1e-8);  // plus the 1e-9 margin
  EXPECT_FALSE(w8.exact[0].has_value());
  EXPECT_GE(min_eigenvalue(w8.realize() - w8.projector_witness() * Complex(*w8.alpha)), -1e-9);
  EXPECT_NEAR(expectation(w8, w8.target.projector()), -0.99996684, 1e-6);

  const WitnessSpec w10 = catalog("WP3_D10");
  ASSERT_TRUE(w10.alpha.has_value());
  EXPECT_NEAR(w10.coefficients[0] - 1.3115, 0.0138002, 1e-6);
  EXPECT_NEAR(*w10.alpha, 2.38554, 1e-3);
  EXPECT_NEAR(expectation(w10, w10.target.projector()), -1.00005498, 1e-6);
}

TEST(lmi, valid_witness_needs_no_shift) {
  const WitnessSpec w = catalog("WP3_D63");
  EXPECT_LT(certify_shift(w.realize(), w.target, *w.lambda_sq).shift, 1e-12);
}

TEST(d5_family, expectation_is_constant_on_the_circle) {
  const WitnessSpec w = catalog("WI2_D5");
  const DenseOperator op = w.realize();
  const Vector a = dicke(5, 2).amplitudes(), b = dicke(5, 3).amplitudes();
  const double ref = expectation(op, dicke(5, 2).projector());
  for (int k = 0; k < 24; ++k) {
    const double t = k * std::numbers::pi / 12;
    const Vector v = std::cos(t) * a + std::exp(Complex(0, 0.3 * k)) * std::sin(t) * b;
    EXPECT_NEAR(expectation(op, StateVector(5, v).projector()), ref, 1e-10);
  }
}

TEST(fidelity_bound, reference_points) {
  const WitnessSpec w = catalog("WP3_D63");
  EXPECT_NEAR(expectation(w, dicke(6, 3).projector()), -1.0, 1e-10);
  EXPECT_NEAR(fidelity_bound(w, -1.0), 1.0, 1e-12);
  EXPECT_NEAR(fidelity_bound(w, 0.0), 0.6, 1e-12);
  EXPECT_NEAR(fidelity_bound(catalog("WP3_D42"), 0.0), 2.0 / 3, 1e-12);
  EXPECT_NEAR(fidelity_bound(catalog("WP3_D42"), 1.0), 2.0 / 3 - 1.0 / 3, 1e-12);
  EXPECT_THROW(fidelity_bound(catalog("WI2_D63"), -1.0), std::invalid_argument);
}

TEST(fidelity_bound, never_exceeds_the_fidelity) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const char* name : {"WP2_D63", "WP3_D63"}) {
    const WitnessSpec w = catalog(name);
    const DenseOperator op = w.realize(), target = w.target.projector();
    for (int t = 0; t < 50; ++t) {
      const double p = u(rng);
      const DenseOperator rho = target * Complex(1 - p) + random_density(6, rng) * Complex(p);
      EXPECT_LE(fidelity_bound(w, expectation(op, rho)), expectation(target, rho) + 1e-10);
    }
  }
}

TEST(nonwhite_noise, state_properties) {
  EXPECT_LT(max_diff(nonwhite_noise_state(1.0), dicke(6, 3).projector()), 1e-15);
  for (double p : {0.0, 4.0 / 7, 0.9}) {
    const DenseOperator rho = nonwhite_noise_state(p);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
    EXPECT_GE(min_eigenvalue(rho), -1e-12);
    EXPECT_TRUE(is_permutation_invariant(rho));
    EXPECT_NEAR(expectation(dicke(6, 3).projector(), rho), p, 1e-12);
  }
  EXPECT_THROW(nonwhite_noise_state(1.5), std::invalid_argument);
}

TEST(fidelity_curves, ordering_and_endpoints) {
  const WitnessSpec w = catalog("WP3_D63");
  std::vector<double> grid;
  for (int k = 0; k <= 100; ++k) grid.push_back(k / 100.0);
  const auto white_rows = fidelity_curves(w, NoiseModel::white(6), grid);
  const auto nw_rows = fidelity_curves(w, nonwhite_noise(), grid);
  EXPECT_NEAR(white_rows[0].fidelity, 1.0, 1e-12);
  EXPECT_NEAR(white_rows[0].estimate, 1.0, 1e-9);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    EXPECT_LE(white_rows[k].estimate, white_rows[k].fidelity + 1e-10);
    EXPECT_LE(nw_rows[k].estimate, nw_rows[k].fidelity + 1e-10);
    // Affine in p.
    EXPECT_NEAR(nw_rows[k].fidelity, 1.0 - grid[k], 1e-12);
    if (k > 0) {
      EXPECT_LT(nw_rows[k].fidelity - nw_rows[k].estimate, white_rows[k].fidelity - white_rows[k].estimate);
    }
  }
}

TEST(witness_schedule, setting_counts) {
  EXPECT_EQ(witness_schedule(catalog("WP_D63")).settings().size(), 21u);
  EXPECT_EQ(witness_schedule(catalog("WP_D42")).settings().size(), 9u);
  EXPECT_EQ(witness_schedule(catalog("WP3_D63")).settings().size(), 3u);
  EXPECT_EQ(witness_schedule(catalog("WP2_D63")).settings().size(), 2u);
  EXPECT_EQ(witness_schedule(catalog("WI3_D41")).settings().size(), 3u);
  EXPECT_EQ(witness_schedule(catalog("WP3_D42")).settings().size(), 3u);
  for (const char* name : {"WP_D63", "WP_D42", "WP3_D63"}) {
    const WitnessSpec w = catalog(name);
    EXPECT_LT(max_diff(witness_schedule(w).reconstruct(), w.realize()), 1e-10) << name;
  }
}
