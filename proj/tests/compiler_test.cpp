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

#include "symwit/compiler.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "symwit/spectral.hpp"
#include "test_util.hpp"

using namespace symwit;
using symwit::testing::max_diff;
using symwit::testing::random_hermitian;
using symwit::testing::random_matrix;

namespace {

DenseOperator dense_product(const std::vector<Matrix>& factors) {
  DenseOperator out = DenseOperator::single(factors[0]);
  for (std::size_t k = 1; k < factors.size(); ++k) out = kron(out, DenseOperator::single(factors[k]));
  return out;
}

// Sum over all N! orderings of the factors.
DenseOperator all_orderings(const std::vector<Matrix>& factors) {
  std::vector<int> idx(factors.size());
  std::iota(idx.begin(), idx.end(), 0);
  DenseOperator acc = DenseOperator::zero(static_cast<int>(factors.size()));
  do {
    std::vector<Matrix> f;
    for (int i : idx) f.push_back(factors[static_cast<std::size_t>(i)]);
    acc += dense_product(f);
  } while (std::next_permutation(idx.begin(), idx.end()));
  return acc;
}

double multinomial(int n, std::initializer_list<int> parts) {
  double r = std::tgamma(n + 1.0);
  for (int p : parts) r /= std::tgamma(p + 1.0);
  return r;
}

DenseOperator power_sum(int n, const Matrix& a, double coeff) { return tensor_power(a, n) * Complex(coeff); }

double rel_residual(const DenseOperator& a, const DenseOperator& b) { return max_diff(a, b) / b.max_abs(); }

std::set<std::string> labels(const Schedule& s) {
  std::set<std::string> out;
  for (const Setting& st : s.settings()) out.insert(st.label());
  return out;
}

}  // namespace

TEST(rational, parse_and_arithmetic) {
  EXPECT_EQ(Rational::parse("35/18"), Rational(35, 18));
  EXPECT_EQ(Rational::parse("-10/4"), Rational(-5, 2));
  EXPECT_EQ(Rational::parse("0.0038612"), Rational(38612, 10000000));
  EXPECT_EQ(Rational::parse("7.75").str(), "31/4");
  EXPECT_EQ((Rational(1, 6) + Rational(1, 3)).str(), "1/2");
  EXPECT_EQ((Rational(-2, 3) * Rational(9, 4)).str(), "-3/2");
  EXPECT_DOUBLE_EQ(Rational(55, 72).to_double(), 55.0 / 72.0);
  EXPECT_THROW(Rational::parse("1/0"), std::invalid_argument);
  EXPECT_THROW(Rational::parse("abc"), std::invalid_argument);
}

TEST(setting, canonical_form) {
  EXPECT_EQ(Setting({2, -4, 0}).n(), (std::array<double, 3>{1, -2, 0}));
  EXPECT_EQ(Setting({-1, 0, 0}).n(), (std::array<double, 3>{1, 0, 0}));
  EXPECT_EQ(Setting({0, -3, 3}).n(), (std::array<double, 3>{0, 1, -1}));
  EXPECT_EQ(Setting({0.5, 0.5, 0}).n(), (std::array<double, 3>{1, 1, 0}));
  const Setting s({-2 * std::sqrt(3.0), 0, -2});
  EXPECT_NEAR(s.n()[0], std::sqrt(3.0) / 2, 1e-15);
  EXPECT_NEAR(s.n()[2], 0.5, 1e-15);
  EXPECT_TRUE(s.same_as(Setting({std::sqrt(3.0), 0, 1})));
  EXPECT_TRUE(Setting({0, 0, 0}).is_trivial());
  EXPECT_EQ(Setting({1, -1, 1}).label(), "x-y+z");
  EXPECT_EQ(Setting({0, 2, -1}).label(), "2y-z");
}

TEST(setting, canonicalization_is_idempotent_and_scale_free) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick(-5, 5);
  std::uniform_real_distribution<double> scale(0.1, 7.0);
  for (int t = 0; t < 300; ++t) {
    std::array<double, 3> v{double(pick(rng)), double(pick(rng)), double(pick(rng))};
    if (v == std::array<double, 3>{0, 0, 0}) continue;
    const Setting s(v);
    EXPECT_TRUE(Setting(s.n()).same_as(s));
    const double c = (t % 2 ? -1 : 1) * scale(rng);
    EXPECT_TRUE(Setting({c * v[0], c * v[1], c * v[2]}).same_as(s));
    EXPECT_TRUE(s.is_integer());
  }
}

TEST(local_term, sign_normalization_preserves_the_operator) {
  for (int n : {2, 3}) {
    const LocalTerm t = LocalTerm::make(n, 0.7, {-1, -1, 1}, 0.5);
    EXPECT_GE(t.scale, 0.0);
    const DenseOperator want = tensor_power(pauli::combination(-1, -1, 1, 0.5), n) * Complex(0.7);
    EXPECT_LT(max_diff(tensor_power(t.single_qubit(), n) * Complex(t.coefficient), want), 1e-14);
  }
}

TEST(class_operator, matches_symmetrized_representative) {
  for (int n = 2; n <= 5; ++n) {
    for (int x = 0; x <= n; ++x) {
      for (int y = 0; x + y <= n; ++y) {
        for (int z = 0; x + y + z <= n; ++z) {
          std::vector<Matrix> f;
          for (int k = 0; k < n; ++k) {
            f.push_back(k < x ? pauli::x() : k < x + y ? pauli::y() : k < x + y + z ? pauli::z() : pauli::identity());
          }
          const DenseOperator oracle = symmetrize(dense_product(f)) * Complex(multinomial(n, {x, y, z, n - x - y - z}));
          EXPECT_LT(max_diff(class_operator(n, x, y, z), oracle), 1e-12) << n << " " << x << y << z;
        }
      }
    }
  }
}

TEST(pauli_decompose, identity_and_jz) {
  const PauliPolynomial id = pauli_decompose(DenseOperator::identity(4));
  ASSERT_EQ(id.classes.size(), 1u);
  EXPECT_EQ(id.classes[0].x + id.classes[0].y + id.classes[0].z, 0);
  EXPECT_NEAR(id.classes[0].coefficient, 1.0, 1e-15);

  const PauliPolynomial jz = pauli_decompose(collective_j(2, CollectiveAxis::z()));
  ASSERT_EQ(jz.classes.size(), 1u);
  EXPECT_EQ(jz.classes[0].z, 1);
  EXPECT_EQ(jz.classes[0].x + jz.classes[0].y, 0);
  EXPECT_NEAR(jz.classes[0].coefficient, 0.5, 1e-15);
}

TEST(pauli_decompose, half_filled_dicke_projector_has_only_even_classes) {
  const PauliPolynomial p = pauli_decompose(dicke(6, 3).projector());
  EXPECT_FALSE(p.classes.empty());
  for (const PauliClass& c : p.classes) {
    EXPECT_EQ(c.x % 2, 0);
    EXPECT_EQ(c.y % 2, 0);
    EXPECT_EQ(c.z % 2, 0);
  }
  EXPECT_LT(max_diff(p.realize(), dicke(6, 3).projector()), 1e-10);
}

TEST(pauli_decompose, rejects_non_invariant_input) {
  EXPECT_THROW(pauli_decompose(embed(pauli::x(), 0, 3)), std::invalid_argument);
  std::mt19937_64 rng(3);
  Matrix m = random_matrix(8, 8, rng);
  EXPECT_THROW(pauli_decompose(symmetrize(DenseOperator(3, m))), std::invalid_argument);
}

TEST(pauli_decompose, realization_reproduces_random_invariant_operators) {
  std::mt19937_64 rng(5);
  for (int n = 2; n <= 6; ++n) {
    const DenseOperator a = symmetrize(random_hermitian(n, rng));
    EXPECT_LT(max_diff(pauli_decompose(a).realize(), a), 1e-10);
  }
}

TEST(powers, worked_two_qubit_example) {
  const Matrix x = pauli::x(), y = pauli::y();
  const DenseOperator rhs = (power_sum(2, x + y, 1.0) - power_sum(2, x - y, 1.0)) * Complex(0.5);
  EXPECT_LT(max_diff(class_operator(2, 1, 1, 0), rhs), 1e-14);

  Schedule s(2);
  for (const LocalTerm& t : symmetrized_product_to_powers(2, {1, 1, 0, 1.0})) s.add(t);
  EXPECT_EQ(labels(s), (std::set<std::string>{"x+y", "x-y"}));
  EXPECT_LT(max_diff(s.reconstruct(), rhs), 1e-14);
}

TEST(powers, worked_three_qubit_example_uses_four_settings) {
  const Matrix x = pauli::x(), y = pauli::y(), z = pauli::z();
  const DenseOperator rhs = (power_sum(3, x + y + z, 1.0) + power_sum(3, x - y - z, 1.0) +
                             power_sum(3, -x - y + z, 1.0) + power_sum(3, -x + y - z, 1.0)) *
                            Complex(0.25);
  EXPECT_LT(max_diff(class_operator(3, 1, 1, 1), rhs), 1e-13);

  const auto terms = symmetrized_product_to_powers(3, {1, 1, 1, 1.0});
  EXPECT_EQ(terms.size(), 4u);
  Schedule s(3);
  for (const LocalTerm& t : terms) s.add(t);
  EXPECT_EQ(s.settings().size(), 4u);
  EXPECT_LT(max_diff(s.reconstruct(), rhs), 1e-13);
}

TEST(powers, identity_class_is_a_single_term) {
  const auto terms = symmetrized_product_to_powers(5, {0, 0, 0, 2.5});
  ASSERT_EQ(terms.size(), 1u);
  EXPECT_TRUE(terms[0].setting.is_trivial());
  EXPECT_DOUBLE_EQ(terms[0].coefficient, 2.5);
}

TEST(powers, every_class_expands_exactly) {
  for (int n = 2; n <= 5; ++n) {
    for (int x = 0; x <= n; ++x) {
      for (int y = 0; x + y <= n; ++y) {
        for (int z = 0; x + y + z <= n; ++z) {
          const auto terms = symmetrized_product_to_powers(n, {x, y, z, 1.5});
          if (x + y + z > 0) EXPECT_EQ(terms.size(), std::size_t{1} << (n - 1));
          DenseOperator acc = DenseOperator::zero(n);
          for (const LocalTerm& t : terms) acc += tensor_power(t.single_qubit(), n) * Complex(t.coefficient);
          EXPECT_LT(max_diff(acc, class_operator(n, x, y, z) * Complex(1.5)), 1e-10);
        }
      }
    }
  }
}

// Factors are scaled to unit Frobenius norm.
TEST(powers, sign_vector_identity_on_random_factors) {
  std::mt19937_64 rng(17);
  for (int n : {2, 3, 4, 5, 6}) {
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      std::vector<Matrix> f;
      for (int k = 0; k < n; ++k) {
        const Matrix b = random_matrix(2, 2, rng);
        f.push_back(b / b.norm());
      }
      worst = std::max(worst, max_diff(sign_vector_expansion(f), all_orderings(f)));
    }
    EXPECT_LT(worst, 1e-10) << "N=" << n;
  }
}

TEST(settings_bound, published_sequence) {
  const long long expected[] = {9, 25, 49, 97, 145, 241, 337, 481, 625};
  for (int n = 2; n <= 10; ++n) {
    const SettingsBound b = settings_upper_bound(n);
    EXPECT_EQ(b.enumerated, expected[n - 2]) << "N=" << n;
    EXPECT_NEAR(static_cast<double>(b.closed_form), 2.0 / 3.0 * n * n * n + n * n + 4.0 / 3.0 * n, 1e-9);
  }
  EXPECT_THROW(settings_upper_bound(1), std::invalid_argument);
  EXPECT_THROW(settings_upper_bound(13), std::invalid_argument);
}

TEST(compile, dicke_six_three_needs_at_most_25_settings) {
  const DenseOperator p = dicke(6, 3).projector();
  const Schedule s = compile(p);
  EXPECT_LE(s.settings().size(), 25u);
  EXPECT_LT(rel_residual(s.reconstruct(), p), 1e-9);
}

TEST(compile, collective_squares_need_two_settings) {
  const DenseOperator jx = collective_j(4, CollectiveAxis::x()), jy = collective_j(4, CollectiveAxis::y());
  const DenseOperator m = jx * jx + jy * jy;
  const Schedule s = compile(m);
  EXPECT_EQ(labels(s), (std::set<std::string>{"x", "y"}));
  EXPECT_LT(rel_residual(s.reconstruct(), m), 1e-9);
}

TEST(compile, multiple_of_identity_is_one_trivial_term) {
  const Schedule s = compile(DenseOperator::identity(3) * Complex(2.5));
  ASSERT_EQ(s.terms().size(), 1u);
  EXPECT_TRUE(s.terms()[0].setting.is_trivial());
  EXPECT_TRUE(s.settings().empty());
  EXPECT_NEAR(s.terms()[0].coefficient, 2.5, 1e-15);
}

TEST(compile, random_invariant_operators_property) {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int t = 0; t < 500; ++t) {
    const int n = 3 + t % 4;
    const DenseOperator a = symmetrize(random_hermitian(n, rng));
    const Schedule s = compile(a);
    worst = std::max(worst, rel_residual(s.reconstruct(), a));
    ASSERT_LE(static_cast<long long>(s.settings().size()), settings_upper_bound(n).enumerated);
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(mermin, two_qubit_expansion) {
  const DenseOperator xx = kron(DenseOperator::single(pauli::x()), DenseOperator::single(pauli::x()));
  const DenseOperator zz = kron(DenseOperator::single(pauli::z()), DenseOperator::single(pauli::z()));
  const DenseOperator m = mermin_operator(2, CollectiveAxis::x(), CollectiveAxis::z());
  EXPECT_LT(max_diff(m, xx - zz), 1e-15);
  EXPECT_LT(max_diff(mermin_decomposition(2, CollectiveAxis::x(), CollectiveAxis::z()).reconstruct(), xx - zz), 1e-14);
}

TEST(mermin, dense_operator_matches_subset_enumeration) {
  for (int n = 2; n <= 6; ++n) {
    DenseOperator oracle = DenseOperator::zero(n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      const int k = std::popcount(mask);
      if (k % 2) continue;
      std::vector<Matrix> f;
      for (int q = 0; q < n; ++q) f.push_back(mask >> q & 1u ? pauli::z() : pauli::y());
      oracle += dense_product(f) * Complex((k / 2) % 2 ? -1.0 : 1.0);
    }
    const DenseOperator m = mermin_operator(n, CollectiveAxis::y(), CollectiveAxis::z());
    EXPECT_LT(max_diff(m, oracle), 1e-12);
    EXPECT_TRUE(m.is_hermitian());
    EXPECT_TRUE(is_permutation_invariant(m));
    EXPECT_LT(max_diff(symmetrize(m), m), 1e-12);
  }
}

TEST(mermin, identity_variant_needs_one_setting) {
  const Schedule s = mermin_decomposition(6, std::nullopt, CollectiveAxis::z());
  EXPECT_EQ(labels(s), (std::set<std::string>{"z"}));
  const DenseOperator m = mermin_operator(6, std::nullopt, CollectiveAxis::z());
  EXPECT_LT(max_diff(s.reconstruct(), m), 1e-10);
  EXPECT_LT(m.matrix().imag().cwiseAbs().maxCoeff() + (m.matrix() - Matrix(m.matrix().diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(mermin, closed_form_property) {
  for (int n = 2; n <= 8; ++n) {
    for (const auto& a : {CollectiveAxis::x(), CollectiveAxis::y()}) {
      const Schedule s = mermin_decomposition(n, a, CollectiveAxis::z());
      EXPECT_EQ(s.settings().size(), static_cast<std::size_t>(n));
      EXPECT_LT(max_diff(s.reconstruct(), mermin_operator(n, a, CollectiveAxis::z())), 1e-10) << "N=" << n;
    }
  }
}

TEST(mermin, six_qubit_settings_lie_at_multiples_of_30_degrees) {
  const Schedule s = mermin_decomposition(6, CollectiveAxis::x(), CollectiveAxis::z());
  std::set<int> angles;
  for (const Setting& st : s.settings()) {
    EXPECT_EQ(st.n()[1], 0.0);
    const auto u = st.unit();
    double deg = std::atan2(u[2], u[0]) * 180.0 / std::numbers::pi;
    if (deg <= 0.0) deg += 180.0;
    angles.insert(static_cast<int>(std::lround(deg)));
  }
  EXPECT_EQ(angles, (std::set<int>{30, 60, 90, 120, 150, 180}));
}

TEST(canned, six_qubit_decomposition) {
  const Schedule s = canned_decomposition("D63");
  const std::set<std::string> integer_labels{"x", "y", "z", "x+y", "x-y", "x+z", "x-z", "y+z", "y-z",
                                             "x+y+z", "x+y-z", "x-y+z", "x-y-z"};
  EXPECT_EQ(s.settings().size(), 21u);
  std::set<std::string> got;
  int irrational = 0;
  for (const Setting& st : s.settings()) {
    if (st.is_integer()) got.insert(st.label());
    else ++irrational;
  }
  EXPECT_EQ(got, integer_labels);
  EXPECT_EQ(irrational, 8);
  for (const auto& v : std::vector<std::array<double, 3>>{{std::sqrt(3.0), 0, 1}, {std::sqrt(3.0), 0, -1},
                                                          {1, 0, std::sqrt(3.0)}, {-1, 0, std::sqrt(3.0)},
                                                          {0, std::sqrt(3.0), 1}, {0, std::sqrt(3.0), -1},
                                                          {0, 1, std::sqrt(3.0)}, {0, -1, std::sqrt(3.0)}}) {
    const Setting want(v);
    EXPECT_TRUE(std::any_of(s.settings().begin(), s.settings().end(), [&](const Setting& st) { return st.same_as(want); }));
  }
  const DenseOperator target = dicke(6, 3).projector() * Complex(64.0);
  const DenseOperator r = s.reconstruct();
  EXPECT_LT(rel_residual(r, target), 1e-9);
  const RealVector ev = hermitian_eigenvalues(r * Complex(1.0 / 64));
  EXPECT_NEAR(ev(ev.size() - 1), 1.0, 1e-9);
  EXPECT_NEAR(ev.head(ev.size() - 1).cwiseAbs().maxCoeff(), 0.0, 1e-9);
}

TEST(canned, four_qubit_decomposition) {
  const Schedule s = canned_decomposition("D42");
  EXPECT_EQ(labels(s), (std::set<std::string>{"x", "y", "z", "x+y", "x-y", "x+z", "x-z", "y+z", "y-z"}));
  EXPECT_LT(rel_residual(s.reconstruct(), dicke(4, 2).projector() * Complex(16.0)), 1e-9);
  for (const LocalTerm& t : s.terms()) EXPECT_TRUE(t.exact.has_value());
}

TEST(canned, printed_four_qubit_weights_do_not_reconstruct) {
  // Taking the identity-shifted brackets at the printed weight 2/3 and -1/3.
  const Matrix x = pauli::x(), y = pauli::y(), z = pauli::z(), i = pauli::identity();
  auto b = [](const Matrix& m) { return tensor_power(m, 4); };
  auto pm = [&](const Matrix& a, const Matrix& c) { return b(a + c) + b(a - c); };
  const DenseOperator printed = (b(x) + pm(x, i) + b(y) + pm(y, i)) * Complex(2.0 / 3) +
                                (b(z) * Complex(8.0) - pm(z, i) - pm(x, z) - pm(y, z)) * Complex(1.0 / 3) +
                                pm(x, y) * Complex(1.0 / 6);
  EXPECT_NEAR(max_diff(printed, dicke(4, 2).projector() * Complex(16.0)), 4.0 / 3.0, 1e-12);
}

TEST(canned, unknown_name) { EXPECT_THROW(canned_decomposition("D84"), std::invalid_argument); }

TEST(schedule, json_round_trip_is_lossless) {
  for (const Schedule& s : {canned_decomposition("D63"), compile(dicke(5, 2).projector())}) {
    const Schedule back = Schedule::from_json(s.to_json());
    ASSERT_EQ(back.terms().size(), s.terms().size());
    EXPECT_EQ(back.settings().size(), s.settings().size());
    for (std::size_t k = 0; k < s.terms().size(); ++k) {
      EXPECT_EQ(back.terms()[k].coefficient, s.terms()[k].coefficient);
      EXPECT_EQ(back.terms()[k].scale, s.terms()[k].scale);
      EXPECT_EQ(back.terms()[k].identity_weight, s.terms()[k].identity_weight);
      EXPECT_EQ(back.terms()[k].setting.n(), s.terms()[k].setting.n());
      EXPECT_EQ(back.terms()[k].exact, s.terms()[k].exact);
    }
    EXPECT_EQ(back.to_json(), s.to_json());
  }
  EXPECT_THROW(Schedule::from_json("{\"N\": 2}"), std::invalid_argument);
  EXPECT_THROW(Schedule::from_json("not json"), std::invalid_argument);
}
