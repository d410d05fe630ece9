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

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <regex>
#include <stdexcept>

#include <json.hpp>

#include "symwit/spectral.hpp"

namespace symwit {
namespace {

constexpr double kLmiSlack = 1e-9;
constexpr double kTraceTolerance = 1e-10;
constexpr double kMaxAlpha = 10.0;

CollectiveAxis axis_of(char a) { return CollectiveAxis::parse(std::string(1, a)); }

double dicke_jz(const StateVector& target) {
  return target.expectation(collective_j(target.num_qubits(), CollectiveAxis::z())).real();
}

std::string dicke_label(int n, int m) { return "D(" + std::to_string(n) + "," + std::to_string(m) + ")"; }

StateVector parse_target(const std::string& label) {
  static const std::regex re(R"(D\((\d+),(\d+)\))");
  std::smatch m;
  if (!std::regex_match(label, m, re)) throw std::invalid_argument("unsupported witness target '" + label + "'");
  return dicke(std::stoi(m[1]), std::stoi(m[2]));
}

// Smallest eigenvalue of diag(d) + alpha v v^dagger for alpha >= 0, given
// ascending d and weights |v_i|^2, by the secular equation.
double min_eig_rank_one(const RealVector& d, const RealVector& weight, double alpha) {
  const Eigen::Index n = d.size();
  if (alpha == 0.0 || n == 1) return n == 1 ? d(0) + alpha * weight(0) : d(0);
  const double tol = 1e-11 * std::max(1.0, d.cwiseAbs().maxCoeff());
  Eigen::Index group = 1;
  double w0 = weight(0);
  while (group < n && d(group) - d(0) <= tol) w0 += weight(group++);
  if (group > 1 || w0 <= 1e-24) return d(0);

  auto secular = [&](double lambda) {
    double f = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) f += alpha * weight(i) / (d(i) - lambda);
    return f;
  };
  double lo = d(0), hi = std::min(d(1), d(0) + alpha * weight.sum());
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (secular(mid) < 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

DenseOperator BasisTerm::realize(const StateVector& target) const {
  const int n = target.num_qubits();
  switch (kind) {
    case Kind::identity: return DenseOperator::identity(n);
    case Kind::j_power: return collective_j_power(n, axis_of(axis), power, shift);
    case Kind::tensor_power: {
      const auto d = axis_of(axis).direction();
      return tensor_power(pauli::combination(d[0], d[1], d[2], shift), n);
    }
    case Kind::projector: return target.projector();
  }
  throw std::logic_error("unreachable basis kind");
}

std::string BasisTerm::describe() const {
  char buf[64];
  switch (kind) {
    case Kind::identity: return "1";
    case Kind::j_power:
      if (shift == 0.0) std::snprintf(buf, sizeof buf, "J%c^%d", axis, power);
      else std::snprintf(buf, sizeof buf, "(J%c%+g)^%d", axis, -shift, power);
      return buf;
    case Kind::tensor_power:
      std::snprintf(buf, sizeof buf, "[%c%+g]", axis, shift);
      return buf;
    case Kind::projector: return "|psi><psi|";
  }
  return "?";
}

DenseOperator WitnessSpec::realize() const {
  if (basis.size() != coefficients.size()) throw std::invalid_argument("witness: basis and coefficient counts differ");
  DenseOperator out = DenseOperator::zero(num_qubits);
  for (std::size_t k = 0; k < basis.size(); ++k) out += basis[k].realize(target) * Complex(coefficients[k]);
  return out;
}

DenseOperator WitnessSpec::projector_witness() const {
  const double l2 = lambda_sq ? *lambda_sq : schmidt_max_sq(target);
  return DenseOperator::identity(num_qubits) * Complex(l2) - target.projector();
}

namespace {

const char* kind_name(BasisTerm::Kind k) {
  switch (k) {
    case BasisTerm::Kind::identity: return "identity";
    case BasisTerm::Kind::j_power: return "j_power";
    case BasisTerm::Kind::tensor_power: return "tensor_power";
    case BasisTerm::Kind::projector: return "projector";
  }
  return "?";
}

BasisTerm::Kind parse_kind(const std::string& s) {
  if (s == "identity") return BasisTerm::Kind::identity;
  if (s == "j_power") return BasisTerm::Kind::j_power;
  if (s == "tensor_power") return BasisTerm::Kind::tensor_power;
  if (s == "projector") return BasisTerm::Kind::projector;
  throw std::invalid_argument("unknown basis kind '" + s + "'");
}

}  // namespace

std::string WitnessSpec::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["N"] = num_qubits;
  j["target"] = target_label;
  j["basis_terms"] = nlohmann::json::array();
  for (const BasisTerm& b : basis) {
    j["basis_terms"].push_back({{"kind", kind_name(b.kind)}, {"axis", std::string(1, b.axis)}, {"power", b.power}, {"shift", b.shift}});
  }
  j["coefficients"] = coefficients;
  if (std::any_of(exact.begin(), exact.end(), [](const auto& e) { return e.has_value(); })) {
    nlohmann::json ex = nlohmann::json::array();
    for (const auto& e : exact) ex.push_back(e ? nlohmann::json(e->str()) : nlohmann::json(nullptr));
    j["exact"] = ex;
  }
  j["alpha"] = alpha ? nlohmann::json(*alpha) : nlohmann::json(nullptr);
  j["alpha_derived"] = alpha_derived;
  j["lambda_sq"] = lambda_sq ? nlohmann::json(*lambda_sq) : nlohmann::json(nullptr);
  return j.dump();
}

WitnessSpec WitnessSpec::from_json(std::string_view text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    WitnessSpec w;
    w.name = j.value("name", "");
    w.num_qubits = j.at("N").get<int>();
    w.target_label = j.at("target").get<std::string>();
    w.target = parse_target(w.target_label);
    if (w.target.num_qubits() != w.num_qubits) throw std::invalid_argument("witness: target size does not match N");
    for (const auto& b : j.at("basis_terms")) {
      const std::string axis = b.value("axis", "z");
      if (axis.size() != 1) throw std::invalid_argument("witness: axis must be x, y or z");
      axis_of(axis[0]);
      w.basis.push_back({parse_kind(b.at("kind").get<std::string>()), axis[0], b.value("power", 0), b.value("shift", 0.0)});
    }
    w.coefficients = j.at("coefficients").get<std::vector<double>>();
    if (w.coefficients.size() != w.basis.size()) throw std::invalid_argument("witness: basis and coefficient counts differ");
    w.exact.assign(w.coefficients.size(), std::nullopt);
    if (j.contains("exact")) {
      const auto& ex = j.at("exact");
      for (std::size_t k = 0; k < ex.size() && k < w.exact.size(); ++k) {
        if (!ex[k].is_null()) w.exact[k] = Rational::parse(ex[k].get<std::string>());
      }
    }
    if (j.contains("alpha") && !j.at("alpha").is_null()) w.alpha = j.at("alpha").get<double>();
    w.alpha_derived = j.value("alpha_derived", false);
    if (j.contains("lambda_sq") && !j.at("lambda_sq").is_null()) w.lambda_sq = j.at("lambda_sq").get<double>();
    validate_alpha(w);
    return w;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("witness: malformed JSON: ") + e.what());
  }
}

void validate_alpha(const WitnessSpec& w) {
  if (!w.alpha) return;
  if (!(*w.alpha > 0.0)) throw std::invalid_argument("witness " + w.name + ": alpha must be positive");
  const double slack = min_eigenvalue(w.realize() - w.projector_witness() * Complex(*w.alpha));
  if (slack < -kLmiSlack) {
    throw std::invalid_argument("witness " + w.name + ": W - alpha W(P) is not positive semidefinite (min eigenvalue " +
                                std::to_string(slack) + ")");
  }
}

namespace {

struct SlackPeak {
  double alpha;
  double slack;
};

// slack(a) = min-eig(W - a W^(P)) is concave in a; golden-section search for
// its maximum over [0, kMaxAlpha].
template <class F>
SlackPeak slack_peak(const F& slack) {
  double lo = 0.0, hi = kMaxAlpha;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = slack(x1), f2 = slack(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = slack(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = slack(x1);
    }
  }
  const double peak = 0.5 * (lo + hi);
  return {peak, slack(peak)};
}

}  // namespace

std::optional<double> derive_alpha(const DenseOperator& w, const StateVector& target, double lambda_sq) {
  // W - a (l 1 - P) = (W - a l 1) + a P, and P = psi psi^dagger has rank one.
  const Spectrum s = hermitian_eig(w);
  const RealVector weight = (s.vectors.adjoint() * target.amplitudes()).cwiseAbs2();
  const double l2 = lambda_sq;
  auto slack = [&](double a) { return min_eig_rank_one(s.values, weight, a) - a * l2; };

  // Right end of the feasible interval.
  const SlackPeak peak = slack_peak(slack);
  if (peak.slack < -kLmiSlack || peak.alpha <= 0.0) return std::nullopt;
  if (slack(kMaxAlpha) >= -kLmiSlack) return kMaxAlpha;
  double a = peak.alpha, b = kMaxAlpha;
  for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
    const double mid = 0.5 * (a + b);
    if (slack(mid) >= -kLmiSlack) a = mid;
    else b = mid;
  }
  return a;
}

Certification certify_shift(const DenseOperator& w, const StateVector& target, double lambda_sq) {
  const Spectrum s = hermitian_eig(w);
  const RealVector weight = (s.vectors.adjoint() * target.amplitudes()).cwiseAbs2();
  auto slack = [&](double a) { return min_eig_rank_one(s.values, weight, a) - a * lambda_sq; };
  const SlackPeak peak = slack_peak(slack);
  return {peak.alpha, std::max(0.0, -peak.slack)};
}

NoiseModel NoiseModel::white(int num_qubits) {
  return {Kind::white, DenseOperator::identity(num_qubits) * Complex(1.0 / static_cast<double>(qubit_dim(num_qubits)))};
}

NoiseModel NoiseModel::custom(DenseOperator rho) {
  const DenseOperator h = rho.hermitian_part_checked();
  if (std::abs(h.trace() - 1.0) > kTraceTolerance) throw std::invalid_argument("noise state must have unit trace");
  if (min_eigenvalue(h) < -kTraceTolerance) throw std::invalid_argument("noise state is not positive semidefinite");
  return {Kind::custom, h};
}

WitnessSpec projector_witness(const StateVector& target, std::string label) {
  WitnessSpec w;
  w.name = label.empty() ? "WP" : "WP_" + label;
  w.num_qubits = target.num_qubits();
  w.lambda_sq = schmidt_max_sq(target);
  w.basis = {BasisTerm::identity(), BasisTerm::projector()};
  w.coefficients = {*w.lambda_sq, -1.0};
  w.exact = {std::nullopt, Rational(-1)};
  w.alpha = 1.0;
  w.target = target;
  w.target_label = label;
  return w;
}

WitnessSpec independent_witness(const StateVector& target, double c, double q, std::string label) {
  WitnessSpec w;
  w.num_qubits = target.num_qubits();
  w.target = target;
  w.target_label = label;
  w.basis = {BasisTerm::identity(), BasisTerm::j('x', 2), BasisTerm::j('y', 2)};
  w.coefficients = {c, -1.0, -1.0};
  if (q != 0.0) {
    w.basis.push_back(BasisTerm::j('z', 2, dicke_jz(target)));
    w.coefficients.push_back(q);
  }
  w.exact.assign(w.coefficients.size(), std::nullopt);
  w.lambda_sq = schmidt_max_sq(target);
  return w;
}

namespace {

struct PowerCoefficient {
  char axis;
  int power;
  Rational value;
};

WitnessSpec moment_witness(std::string name, int n, int m, Rational constant, const std::vector<PowerCoefficient>& terms,
                           std::optional<double> alpha) {
  WitnessSpec w;
  w.name = std::move(name);
  w.num_qubits = n;
  w.target = dicke(n, m);
  w.target_label = dicke_label(n, m);
  w.lambda_sq = schmidt_max_sq(w.target);
  w.basis.push_back(BasisTerm::identity());
  w.coefficients.push_back(constant.to_double());
  w.exact.push_back(constant);
  for (const PowerCoefficient& t : terms) {
    w.basis.push_back(BasisTerm::j(t.axis, t.power));
    w.coefficients.push_back(t.value.to_double());
    w.exact.push_back(t.value);
  }
  w.alpha = alpha;
  return w;
}

void finish_derived_alpha(WitnessSpec& w, bool certify) {
  w.alpha_derived = true;
  if (certify) {
    // After the shift the admissible alphas shrink to a neighbourhood of the
    // peak, so take the peak itself.
    const Certification c = certify_shift(w.realize(), w.target, *w.lambda_sq);
    if (c.shift > 0.0) {
      w.coefficients[0] += c.shift + kLmiSlack;
      w.exact[0].reset();
      w.alpha = c.alpha;
      return;
    }
  }
  w.alpha = derive_alpha(w.realize(), w.target, *w.lambda_sq);
}

WitnessSpec build_catalog(std::string_view name, const CatalogOptions& opt) {
  using R = Rational;
  auto pr = [](std::string_view s) { return Rational::parse(s); };
  if (name == "WP_D63" || name == "WP_D41" || name == "WP_D42") {
    const int n = name[4] - '0', m = name[5] - '0';
    WitnessSpec w = projector_witness(dicke(n, m), dicke_label(n, m));
    w.name = std::string(name);
    return w;
  }
  if (name == "WP2_D63") {
    return moment_witness("WP2_D63", 6, 3, pr("7.75"),
                          {{'x', 2, R(-35, 18)}, {'y', 2, R(-35, 18)}, {'x', 4, R(55, 72)}, {'y', 4, R(55, 72)},
                           {'x', 6, R(-5, 72)}, {'y', 6, R(-5, 72)}},
                          2.5);
  }
  if (name == "WP3_D63") {
    return moment_witness("WP3_D63", 6, 3, pr("1.5"),
                          {{'x', 2, R(-1, 45)}, {'y', 2, R(-1, 45)}, {'x', 4, R(1, 36)}, {'y', 4, R(1, 36)},
                           {'x', 6, R(-1, 180)}, {'y', 6, R(-1, 180)}, {'z', 2, R(1007, 360)}, {'z', 4, R(-31, 36)},
                           {'z', 6, R(23, 360)}},
                          2.5);
  }
  if (name == "WP3_D42") {
    return moment_witness("WP3_D42", 4, 2, R(2),
                          {{'x', 2, R(1, 6)}, {'y', 2, R(1, 6)}, {'x', 4, R(-1, 6)}, {'y', 4, R(-1, 6)},
                           {'z', 2, R(31, 12)}, {'z', 4, R(-7, 12)}},
                          3.0);
  }
  if (name == "WP3_D84") {
    const char* cx[] = {"0.0038612", "-0.0052555", "0.0015016", "-0.00010726"};
    const char* cy[] = {"0.0038612", "-0.0052555", "0.0015016", "-0.000107266"};
    const char* cz[] = {"3.124", "-1.07699", "0.11916", "-0.0038992"};
    std::vector<PowerCoefficient> t;
    for (int k = 0; k < 4; ++k) {
      t.push_back({'x', 2 * k + 2, pr(cx[k])});
      t.push_back({'y', 2 * k + 2, pr(cy[k])});
      t.push_back({'z', 2 * k + 2, pr(cz[k])});
    }
    WitnessSpec w = moment_witness("WP3_D84", 8, 4, pr("1.3652"), t, std::nullopt);
    finish_derived_alpha(w, !opt.printed);
    return w;
  }
  if (name == "WP3_D10") {
    const char* cz[] = {"3.4681", "-1.2624", "0.16494", "-0.0084574", "0.000146551"};
    std::vector<PowerCoefficient> t;
    for (int k = 0; k < 5; ++k) t.push_back({'z', 2 * k + 2, pr(cz[k])});
    WitnessSpec w = moment_witness("WP3_D10", 10, 5, pr("1.3115"), t, std::nullopt);
    const Rational cxy = pr("-0.0023069");
    for (char a : {'x', 'y'}) {
      for (double s : {1.0, -1.0}) {
        w.basis.push_back(BasisTerm::sigma_power(a, s));
        w.coefficients.push_back(cxy.to_double());
        w.exact.push_back(cxy);
      }
    }
    finish_derived_alpha(w, !opt.printed);
    return w;
  }
  struct Independent {
    const char* name;
    int n, m;
    const char* c;
    const char* q;
  };
  static const Independent table[] = {
      {"WI2_D63", 6, 3, "11.0179", "0"}, {"WI2_D5", 5, 2, "7.8723", "0"},  {"WI3_D41", 4, 1, "4.1234", "1.47"},
      {"WI3_W5", 5, 1, "5.6242", "2.22"}, {"WI3_W6", 6, 1, "7.1095", "3.13"},
  };
  for (const Independent& e : table) {
    if (name != e.name) continue;
    const Rational printed_q = pr(e.q);
    double q = printed_q.to_double();
    std::optional<Rational> c = pr(e.c);
    if (opt.q && *opt.q != q) {
      if (name.substr(0, 3) != "WI3") throw std::invalid_argument(std::string(name) + " has no q parameter");
      q = *opt.q;
      c.reset();
    }
    if (opt.c) c = Rational::parse(std::to_string(*opt.c));
    if (!c) throw std::invalid_argument("no tabulated constant for " + std::string(name) + " at q=" + std::to_string(q) + "; supply c");
    WitnessSpec w = independent_witness(dicke(e.n, e.m), opt.c ? *opt.c : c->to_double(), q, dicke_label(e.n, e.m));
    w.name = e.name;
    w.exact[0] = opt.c ? std::nullopt : c;
    w.exact[1] = w.exact[2] = Rational(-1);
    if (w.exact.size() > 3 && !opt.q) w.exact[3] = printed_q;
    return w;
  }
  throw std::invalid_argument("unknown witness '" + std::string(name) + "'");
}

}  // namespace

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{"WP_D63",  "WP_D41",  "WP_D42",  "WP2_D63", "WP3_D63", "WP3_D42", "WP3_D84",
                                              "WP3_D10", "WI2_D63", "WI2_D5",  "WI3_D41", "WI3_W5",  "WI3_W6"};
  return names;
}

WitnessSpec catalog(std::string_view name, const CatalogOptions& options) {
  if (options.q || options.c || options.printed) return build_catalog(name, options);
  static std::mutex mu;
  static std::map<std::string, WitnessSpec, std::less<>> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(name); it != cache.end()) return it->second;
  }
  WitnessSpec w = build_catalog(name, options);
  validate_alpha(w);
  std::lock_guard lock(mu);
  return cache.emplace(std::string(name), std::move(w)).first->second;
}

double expectation(const DenseOperator& w, const DenseOperator& rho) {
  if (w.num_qubits() != rho.num_qubits()) throw std::invalid_argument("expectation: qubit counts differ");
  const Complex tr = rho.trace();
  if (std::abs(tr - 1.0) > kTraceTolerance) {
    throw std::invalid_argument("expectation: state has trace " + std::to_string(tr.real()) + ", expected 1");
  }
  return (w.matrix().cwiseProduct(rho.matrix().transpose())).sum().real();
}

double expectation(const WitnessSpec& w, const DenseOperator& rho) { return expectation(w.realize(), rho); }

double noise_tolerance(const DenseOperator& w, const NoiseModel& noise, const DenseOperator& rho) {
  const double a = expectation(w, rho);
  if (!(a < 0.0)) {
    throw std::domain_error("noise tolerance undefined: witness expectation on the state is " + std::to_string(a) +
                            " (must be negative)");
  }
  const double b = expectation(w, noise.rho);
  if (b <= 0.0 && b <= a) return 1.0;
  return std::min(1.0, a / (a - b));
}

double noise_tolerance(const WitnessSpec& w, const NoiseModel& noise, const DenseOperator& rho) {
  return noise_tolerance(w.realize(), noise, rho);
}

double fidelity_bound(const WitnessSpec& w, double value) {
  if (!w.alpha) throw std::invalid_argument("witness " + w.name + " has no alpha; no fidelity bound");
  const double l2 = w.lambda_sq ? *w.lambda_sq : schmidt_max_sq(w.target);
  return l2 - value / *w.alpha;
}

DenseOperator nonwhite_noise_state(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("nonwhite_noise_state: p must lie in [0, 1]");
  return dicke(6, 3).projector() * Complex(p) +
         (dicke(6, 2).projector() + dicke(6, 4).projector()) * Complex(0.5 * (1.0 - p));
}

NoiseModel nonwhite_noise() { return NoiseModel::custom(nonwhite_noise_state(0.0)); }

std::vector<FidelityRow> fidelity_curves(const WitnessSpec& w, const NoiseModel& noise, const std::vector<double>& p_grid) {
  const DenseOperator target = w.target.projector();
  const DenseOperator op = w.realize();
  std::vector<FidelityRow> rows;
  rows.reserve(p_grid.size());
  for (double p : p_grid) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("fidelity_curves: grid point outside [0, 1]");
    const DenseOperator rho = target * Complex(1.0 - p) + noise.rho * Complex(p);
    rows.push_back({p, expectation(target, rho), fidelity_bound(w, expectation(op, rho))});
  }
  return rows;
}

Schedule witness_schedule(const WitnessSpec& w) {
  const bool projector = w.basis.size() == 2 && w.basis[0].kind == BasisTerm::Kind::identity &&
                         w.basis[1].kind == BasisTerm::Kind::projector && w.coefficients[1] == -1.0;
  if (projector && (w.target_label == "D(6,3)" || w.target_label == "D(4,2)")) {
    const bool six = w.target_label == "D(6,3)";
    Schedule s(w.num_qubits);
    const Rational l2 = six ? Rational(3, 5) : Rational(2, 3);
    LocalTerm id = LocalTerm::make(w.num_qubits, l2.to_double(), {0, 0, 0}, 1.0);
    id.exact = l2;
    s.add(id);
    s.add(canned_decomposition(six ? "D63" : "D42"), Rational(-1, six ? 64 : 16));
    return s;
  }
  return compile(w.realize());
}

}  // namespace symwit
