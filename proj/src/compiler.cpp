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

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace symwit {
namespace {

constexpr double kSettingTolerance = 1e-12;
constexpr int kMaxSettingMultiplier = 24;

enum Slot : int { kI = 0, kX = 1, kY = 2, kZ = 3 };

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

struct PauliMasks {
  std::uint64_t flip = 0;   // X or Y
  std::uint64_t phase = 0;  // Y or Z
  int num_y = 0;
};

PauliMasks masks_of(const std::vector<int>& slots) {
  const int n = static_cast<int>(slots.size());
  PauliMasks m;
  for (int q = 0; q < n; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
    if (slots[static_cast<std::size_t>(q)] == kX || slots[static_cast<std::size_t>(q)] == kY) m.flip |= bit;
    if (slots[static_cast<std::size_t>(q)] == kY || slots[static_cast<std::size_t>(q)] == kZ) m.phase |= bit;
    if (slots[static_cast<std::size_t>(q)] == kY) ++m.num_y;
  }
  return m;
}

// P|c> = i^{#Y} (-1)^{popcount(c & phase)} |c ^ flip>.
Complex pauli_phase(const PauliMasks& m, std::uint64_t c) {
  static const Complex powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const Complex base = powers[m.num_y % 4];
  return std::popcount(c & m.phase) % 2 ? -base : base;
}

std::vector<int> representative(int n, int x, int y, int z) {
  std::vector<int> slots(static_cast<std::size_t>(n), kI);
  auto it = slots.begin();
  it = std::fill_n(it, x, kX);
  it = std::fill_n(it, y, kY);
  std::fill_n(it, z, kZ);
  return slots;
}

void validate_class(int n, int x, int y, int z) {
  if (n < 1 || n > kMaxQubits) throw std::invalid_argument("qubit count out of range");
  if (x < 0 || y < 0 || z < 0 || x + y + z > n) {
    throw std::invalid_argument("invalid Pauli class (" + std::to_string(x) + "," + std::to_string(y) + "," +
                                std::to_string(z) + ") for N=" + std::to_string(n));
  }
}

// Exact cos/sin at multiples of pi/2 so axis-aligned directions stay exact.
std::pair<double, double> angle(int k, int n) {
  if ((2 * k) % n == 0) {
    switch ((2 * k / n) % 4) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double t = k * std::numbers::pi / n;
  return {std::cos(t), std::sin(t)};
}

std::array<double, 3> scaled(const std::array<double, 3>& v, double s) { return {v[0] * s, v[1] * s, v[2] * s}; }

std::array<double, 3> sum(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

Matrix kron_matrix(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

bool close(double a, double b) { return std::abs(a - b) <= kSettingTolerance * std::max(1.0, std::abs(a)); }

}  // namespace

DenseOperator class_operator(int num_qubits, int x, int y, int z) {
  validate_class(num_qubits, x, y, z);
  std::vector<int> slots = representative(num_qubits, x, y, z);
  std::sort(slots.begin(), slots.end());
  const Eigen::Index d = qubit_dim(num_qubits);
  Matrix out = Matrix::Zero(d, d);
  do {
    const PauliMasks m = masks_of(slots);
    for (std::uint64_t c = 0; c < static_cast<std::uint64_t>(d); ++c) {
      out(static_cast<Eigen::Index>(c ^ m.flip), static_cast<Eigen::Index>(c)) += pauli_phase(m, c);
    }
  } while (std::next_permutation(slots.begin(), slots.end()));
  return DenseOperator(num_qubits, std::move(out));
}

DenseOperator PauliPolynomial::realize() const {
  DenseOperator out = DenseOperator::zero(num_qubits);
  for (const PauliClass& c : classes) out += class_operator(num_qubits, c.x, c.y, c.z) * Complex(c.coefficient);
  return out;
}

// ---------------------------------------------------------------------------
// Settings and terms

Setting::Setting(std::array<double, 3> direction) {
  for (double v : direction) {
    if (!std::isfinite(v)) throw std::invalid_argument("setting direction must be finite");
  }
  const double len = std::hypot(direction[0], direction[1], direction[2]);
  if (len == 0.0) return;
  std::array<double, 3> u = scaled(direction, 1.0 / len);
  double smallest = 2.0;
  for (double& v : u) {
    if (std::abs(v) < kSettingTolerance) v = 0.0;
    if (v != 0.0) smallest = std::min(smallest, std::abs(v));
  }

  // Integer directions: look for a small multiple of u with integer entries.
  bool integer = false;
  for (int t = 1; t <= kMaxSettingMultiplier && !integer; ++t) {
    std::array<double, 3> v = scaled(u, t / smallest);
    integer = std::all_of(v.begin(), v.end(), [](double c) { return std::abs(c - std::round(c)) < 1e-9 * std::max(1.0, std::abs(c)); });
    if (integer) {
      std::array<long long, 3> k{std::llround(v[0]), std::llround(v[1]), std::llround(v[2])};
      const long long g = std::gcd(std::gcd(std::llabs(k[0]), std::llabs(k[1])), std::llabs(k[2]));
      for (int i = 0; i < 3; ++i) n_[static_cast<std::size_t>(i)] = static_cast<double>(k[static_cast<std::size_t>(i)] / g);
    }
  }
  if (!integer) n_ = u;
  const auto first = std::find_if(n_.begin(), n_.end(), [](double c) { return c != 0.0; });
  if (*first < 0.0) {
    for (double& v : n_) v = v == 0.0 ? 0.0 : -v;
  }
}

Setting Setting::from_canonical(std::array<double, 3> n) {
  Setting check(n);
  Setting out;
  out.n_ = n;
  if (!check.same_as(out)) throw std::invalid_argument("setting " + out.label() + " is not in canonical form");
  return out;
}

bool Setting::is_integer() const {
  return std::all_of(n_.begin(), n_.end(), [](double c) { return c == std::round(c); });
}

double Setting::norm() const { return std::hypot(n_[0], n_[1], n_[2]); }

std::array<double, 3> Setting::unit() const {
  if (is_trivial()) return n_;
  return scaled(n_, 1.0 / norm());
}

std::string Setting::label() const {
  if (is_trivial()) return "1";
  if (is_integer()) {
    std::string out;
    static const char axes[3] = {'x', 'y', 'z'};
    for (int i = 0; i < 3; ++i) {
      const long long k = std::llround(n_[static_cast<std::size_t>(i)]);
      if (k == 0) continue;
      if (k < 0) out += '-';
      else if (!out.empty()) out += '+';
      if (std::llabs(k) != 1) out += std::to_string(std::llabs(k));
      out += axes[i];
    }
    return out;
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.6g,%.6g,%.6g)", n_[0], n_[1], n_[2]);
  return buf;
}

bool Setting::same_as(const Setting& other) const {
  for (std::size_t i = 0; i < 3; ++i) {
    if (std::abs(n_[i] - other.n_[i]) > kSettingTolerance) return false;
  }
  return true;
}

LocalTerm LocalTerm::make(int num_qubits, double coefficient, std::array<double, 3> direction, double identity_weight) {
  LocalTerm t;
  t.setting = Setting(direction);
  if (t.setting.is_trivial()) {
    t.coefficient = coefficient * std::pow(identity_weight, num_qubits);
    return t;
  }
  const auto u = t.setting.unit();
  t.scale = direction[0] * u[0] + direction[1] * u[1] + direction[2] * u[2];
  t.identity_weight = identity_weight;
  t.coefficient = coefficient;
  if (t.scale < 0.0) {
    t.scale = -t.scale;
    t.identity_weight = -t.identity_weight;
    if (num_qubits % 2) t.coefficient = -t.coefficient;
  }
  return t;
}

Matrix LocalTerm::single_qubit() const {
  const auto u = setting.unit();
  return pauli::combination(scale * u[0], scale * u[1], scale * u[2], identity_weight);
}

namespace {

// Same normalization as LocalTerm::make, tracked on the exact coefficient.
LocalTerm make_exact(int n, const Rational& c, std::array<double, 3> direction, double w) {
  LocalTerm t = LocalTerm::make(n, c.to_double(), direction, w);
  if (t.setting.is_trivial()) {
    if (w == std::round(w)) {
      Rational p(1);
      for (int k = 0; k < n; ++k) p = p * Rational(static_cast<std::int64_t>(w));
      t.exact = c * p;
    }
  } else {
    t.exact = (t.coefficient < 0.0) == (c.num() < 0) ? c : -c;
  }
  return t;
}

double term_bound(const LocalTerm& t, int n) {
  return std::abs(t.coefficient) * std::pow(t.scale + std::abs(t.identity_weight), n);
}

}  // namespace

// ---------------------------------------------------------------------------
// Schedule

void Schedule::add(const LocalTerm& term) {
  for (LocalTerm& t : terms_) {
    if (t.setting.same_as(term.setting) && close(t.scale, term.scale) && close(t.identity_weight, term.identity_weight)) {
      t.coefficient += term.coefficient;
      if (t.exact && term.exact) t.exact = *t.exact + *term.exact;
      else t.exact.reset();
      return;
    }
  }
  terms_.push_back(term);
  if (!term.setting.is_trivial() &&
      std::none_of(settings_.begin(), settings_.end(), [&](const Setting& s) { return s.same_as(term.setting); })) {
    settings_.push_back(term.setting);
  }
}

void Schedule::add(const Schedule& other, double factor) {
  if (other.num_qubits_ != num_qubits_) throw std::invalid_argument("schedule qubit counts differ");
  for (LocalTerm t : other.terms_) {
    t.coefficient *= factor;
    t.exact.reset();
    add(t);
  }
}

void Schedule::add(const Schedule& other, const Rational& factor) {
  if (other.num_qubits_ != num_qubits_) throw std::invalid_argument("schedule qubit counts differ");
  for (LocalTerm t : other.terms_) {
    t.coefficient *= factor.to_double();
    if (t.exact) t.exact = *t.exact * factor;
    add(t);
  }
}

void Schedule::prune(double threshold) {
  std::erase_if(terms_, [&](const LocalTerm& t) { return term_bound(t, num_qubits_) < threshold; });
  rebuild_settings();
}

void Schedule::rebuild_settings() {
  settings_.clear();
  for (const LocalTerm& t : terms_) {
    if (!t.setting.is_trivial() &&
        std::none_of(settings_.begin(), settings_.end(), [&](const Setting& s) { return s.same_as(t.setting); })) {
      settings_.push_back(t.setting);
    }
  }
}

DenseOperator Schedule::reconstruct() const {
  DenseOperator out = DenseOperator::zero(num_qubits_);
  for (const LocalTerm& t : terms_) out += tensor_power(t.single_qubit(), num_qubits_) * Complex(t.coefficient);
  return out;
}

std::string Schedule::to_json() const {
  nlohmann::json j;
  j["N"] = num_qubits_;
  j["terms"] = nlohmann::json::array();
  for (const LocalTerm& t : terms_) {
    nlohmann::json jt{{"coeff", t.coefficient},
                      {"n", t.setting.n()},
                      {"scale", t.scale},
                      {"identity_weight", t.identity_weight}};
    if (t.exact) jt["exact"] = t.exact->str();
    j["terms"].push_back(std::move(jt));
  }
  j["settings"] = nlohmann::json::array();
  for (const Setting& s : settings_) j["settings"].push_back(s.n());
  return j.dump();
}

Schedule Schedule::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    Schedule s(j.at("N").get<int>());
    if (s.num_qubits_ < 1 || s.num_qubits_ > kMaxQubits) throw std::invalid_argument("schedule: qubit count out of range");
    for (const auto& jt : j.at("terms")) {
      LocalTerm t;
      t.coefficient = jt.at("coeff").get<double>();
      t.setting = Setting::from_canonical(jt.at("n").get<std::array<double, 3>>());
      t.scale = jt.at("scale").get<double>();
      t.identity_weight = jt.at("identity_weight").get<double>();
      if (jt.contains("exact")) t.exact = Rational::parse(jt.at("exact").get<std::string>());
      s.terms_.push_back(std::move(t));
    }
    s.rebuild_settings();
    if (j.contains("settings") && j.at("settings").size() != s.settings_.size()) {
      throw std::invalid_argument("schedule: settings list does not match the terms");
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("schedule: malformed JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Decomposition

PauliPolynomial pauli_decompose(const DenseOperator& input) {
  const DenseOperator a = input.hermitian_part_checked();
  if (!is_permutation_invariant(a)) throw std::invalid_argument("operator is not permutation invariant");
  const int n = a.num_qubits();
  const auto d = static_cast<std::uint64_t>(a.dim());
  const double cutoff = 1e-13 * std::max(a.max_abs(), std::numeric_limits<double>::min());

  PauliPolynomial poly{n, {}};
  for (int x = 0; x <= n; ++x) {
    for (int y = 0; x + y <= n; ++y) {
      for (int z = 0; x + y + z <= n; ++z) {
        const PauliMasks m = masks_of(representative(n, x, y, z));
        Complex tr = 0.0;
        for (std::uint64_t c = 0; c < d; ++c) {
          tr += a(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c ^ m.flip)) * pauli_phase(m, c);
        }
        const double coeff = tr.real() / static_cast<double>(d);
        if (std::abs(coeff) > cutoff) poly.classes.push_back({x, y, z, coeff});
      }
    }
  }
  return poly;
}

std::vector<LocalTerm> symmetrized_product_to_powers(int num_qubits, const PauliClass& cls) {
  const int n = num_qubits;
  validate_class(n, cls.x, cls.y, cls.z);
  if (cls.x + cls.y + cls.z == 0) return {LocalTerm::make(n, cls.coefficient, {0.0, 0.0, 0.0}, 1.0)};

  const std::vector<int> slots = representative(n, cls.x, cls.y, cls.z);
  const int ident = n - cls.x - cls.y - cls.z;
  // The sign-vector sum runs over all N! orderings; the class operator only
  // over distinct ones.
  const double base = cls.coefficient / (std::ldexp(1.0, n - 1) * factorial(cls.x) * factorial(cls.y) *
                                         factorial(cls.z) * factorial(ident));
  const bool even = n % 2 == 0;

  std::vector<LocalTerm> out;
  out.reserve(std::size_t{1} << (n - 1));
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << (n - 1)); ++bits) {
    int lead = 1;
    std::array<double, 3> dir{0.0, 0.0, 0.0};
    double w = 0.0;
    auto place = [&](int slot, int sign) {
      if (slot == kI) w += sign;
      else dir[static_cast<std::size_t>(slot - 1)] += sign;
    };
    for (int k = 1; k < n; ++k) {
      const int s = (bits >> (k - 1) & 1u) ? -1 : 1;
      lead *= s;
      place(slots[static_cast<std::size_t>(k)], s);
    }
    // lead is s_1, fixed by s_1 s_2 ... s_N = +1.
    place(slots[0], even ? 1 : lead);
    out.push_back(LocalTerm::make(n, even ? lead * base : base, dir, w));
  }
  return out;
}

DenseOperator sign_vector_expansion(std::span<const Matrix> factors) {
  const int n = static_cast<int>(factors.size());
  if (n < 1 || n > kMaxQubits) throw std::invalid_argument("sign_vector_expansion: factor count out of range");
  const bool even = n % 2 == 0;
  DenseOperator out = DenseOperator::zero(n);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << (n - 1)); ++bits) {
    int lead = 1;
    Matrix a = Matrix::Zero(2, 2);
    for (int k = 1; k < n; ++k) {
      const int s = (bits >> (k - 1) & 1u) ? -1 : 1;
      lead *= s;
      a += static_cast<double>(s) * factors[static_cast<std::size_t>(k)];
    }
    a += (even ? 1.0 : static_cast<double>(lead)) * factors[0];
    out += tensor_power(a, n) * Complex(even ? lead : 1);
  }
  out *= Complex(std::ldexp(1.0, -(n - 1)));
  return out;
}

Schedule compile(const DenseOperator& a) {
  const PauliPolynomial poly = pauli_decompose(a);
  Schedule s(a.num_qubits());
  for (const PauliClass& c : poly.classes) {
    for (const LocalTerm& t : symmetrized_product_to_powers(a.num_qubits(), c)) s.add(t);
  }
  s.prune(1e-13 * a.max_abs());
  return s;
}

SettingsBound settings_upper_bound(int n) {
  if (n < 2 || n > kMaxQubits) throw std::invalid_argument("settings_upper_bound: N must lie in [2, 12]");
  SettingsBound b{(2LL * n * n * n + 3LL * n * n + 4LL * n) / 3, 0};
  for (int x = -n; x <= n; ++x) {
    for (int y = -n; y <= n; ++y) {
      for (int z = -n; z <= n; ++z) {
        const int l1 = std::abs(x) + std::abs(y) + std::abs(z);
        if (l1 < 1 || l1 > n) continue;
        if (std::gcd(std::gcd(std::abs(x), std::abs(y)), std::abs(z)) != 1) continue;
        const int first = x != 0 ? x : (y != 0 ? y : z);
        if (first > 0) ++b.enumerated;
      }
    }
  }
  return b;
}

DenseOperator mermin_operator(int num_qubits, const std::optional<CollectiveAxis>& a, const CollectiveAxis& b) {
  const int n = num_qubits;
  if (n < 1 || n > kMaxQubits) throw std::invalid_argument("mermin_operator: qubit count out of range");
  const Matrix ma = a ? a->pauli() : pauli::identity();
  const Matrix mb = b.pauli();
  // e[k]: sum of arrangements with k copies of sigma_b among the qubits so far.
  std::vector<Matrix> e(1, Matrix::Identity(1, 1));
  for (int q = 0; q < n; ++q) {
    std::vector<Matrix> next(e.size() + 1);
    for (std::size_t k = 0; k < next.size(); ++k) {
      const Eigen::Index d = e[0].rows() * 2;
      next[k] = Matrix::Zero(d, d);
      if (k < e.size()) next[k] += kron_matrix(e[k], ma);
      if (k > 0) next[k] += kron_matrix(e[k - 1], mb);
    }
    e = std::move(next);
  }
  Matrix out = Matrix::Zero(e[0].rows(), e[0].cols());
  for (int k = 0; k <= n; k += 2) out += ((k / 2) % 2 ? -1.0 : 1.0) * e[static_cast<std::size_t>(k)];
  return DenseOperator(n, std::move(out));
}

Schedule mermin_decomposition(int num_qubits, const std::optional<CollectiveAxis>& a, const CollectiveAxis& b) {
  const int n = num_qubits;
  if (n < 2 || n > kMaxQubits) throw std::invalid_argument("mermin_decomposition: N must lie in [2, 12]");
  const Rational prefactor(std::int64_t{1} << (n - 1), n);
  Schedule s(n);
  for (int k = 1; k <= n; ++k) {
    const auto [c, sn] = angle(k, n);
    const Rational coeff = k % 2 ? -prefactor : prefactor;
    if (a) s.add(make_exact(n, coeff, sum(scaled(a->direction(), c), scaled(b.direction(), sn)), 0.0));
    else s.add(make_exact(n, coeff, scaled(b.direction(), sn), c));
  }
  return s;
}

Schedule canned_decomposition(std::string_view name) {
  const std::array<double, 3> x{1, 0, 0}, y{0, 1, 0}, z{0, 0, 1}, none{0, 0, 0};
  auto neg = [](std::array<double, 3> v) { return scaled(v, -1.0); };

  if (name == "D63") {
    const int n = 6;
    Schedule s(n);
    auto term = [&](Rational c, std::array<double, 3> d, double w) { s.add(make_exact(n, c, d, w)); };
    // [a +- b] = [a + b] + [a - b]
    auto pm = [&](Rational c, std::array<double, 3> a, std::array<double, 3> b, double w) {
      term(c, sum(a, b), w);
      term(c, sum(a, neg(b)), w);
    };
    auto pm_identity = [&](Rational c, std::array<double, 3> a) {
      term(c, a, 1.0);
      term(c, a, -1.0);
    };
    auto pmpm_identity = [&](Rational c, std::array<double, 3> a, std::array<double, 3> b) {
      pm(c, a, b, 1.0);
      pm(c, a, b, -1.0);
    };
    term(Rational(-3, 5), none, 1.0);
    pm_identity(Rational(3, 10), x);
    term(Rational(-3, 5), x, 0.0);
    pm_identity(Rational(3, 10), y);
    term(Rational(-3, 5), y, 0.0);
    pm_identity(Rational(1, 5), z);
    term(Rational(-1, 5), z, 0.0);
    s.add(mermin_decomposition(n, std::nullopt, CollectiveAxis::z()), Rational(1, 5));
    pmpm_identity(Rational(1, 20), x, y);
    pmpm_identity(Rational(-1, 20), x, z);
    pmpm_identity(Rational(-1, 20), y, z);
    pm(Rational(-1, 20), sum(x, y), z, 0.0);
    pm(Rational(-1, 20), sum(x, neg(y)), z, 0.0);
    pm(Rational(1, 5), x, z, 0.0);
    pm(Rational(1, 5), y, z, 0.0);
    pm(Rational(1, 10), x, y, 0.0);
    s.add(mermin_decomposition(n, CollectiveAxis::x(), CollectiveAxis::z()), Rational(3, 5));
    s.add(mermin_decomposition(n, CollectiveAxis::y(), CollectiveAxis::z()), Rational(3, 5));
    s.prune(1e-14);
    return s;
  }
  if (name == "D42") {
    const int n = 4;
    Schedule s(n);
    auto term = [&](Rational c, std::array<double, 3> d, double w) { s.add(make_exact(n, c, d, w)); };
    auto pm = [&](Rational c, std::array<double, 3> a, std::array<double, 3> b) {
      term(c, sum(a, b), 0.0);
      term(c, sum(a, neg(b)), 0.0);
    };
    auto pm_identity = [&](Rational c, std::array<double, 3> a) {
      term(c, a, 1.0);
      term(c, a, -1.0);
    };
    // The printed weights of [x +- 1], [y +- 1] and [z +- 1] are twice these.
    term(Rational(2, 3), x, 0.0);
    pm_identity(Rational(1, 3), x);
    term(Rational(2, 3), y, 0.0);
    pm_identity(Rational(1, 3), y);
    term(Rational(8, 3), z, 0.0);
    pm_identity(Rational(-1, 6), z);
    pm(Rational(-1, 3), x, z);
    pm(Rational(-1, 3), y, z);
    pm(Rational(1, 6), x, y);
    return s;
  }
  throw std::invalid_argument("unknown decomposition '" + std::string(name) + "' (expected D63 or D42)");
}

}  // namespace symwit
