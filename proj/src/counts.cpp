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

#include "symwit/counts.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "symwit/spectral.hpp"

namespace symwit {
namespace {

nlohmann::ordered_json component(double v) {
  if (v == std::round(v) && std::abs(v) < 1e15) return static_cast<long long>(v);
  return v;
}

void check_outcomes(const std::string& s, int n) {
  if (static_cast<int>(s.size()) != n) {
    throw std::invalid_argument("counts: outcome string '" + s + "' has length " + std::to_string(s.size()) + ", expected " +
                                std::to_string(n));
  }
  if (s.find_first_not_of("+-") != std::string::npos) {
    throw std::invalid_argument("counts: outcome string '" + s + "' may only contain '+' and '-'");
  }
}

// Eigenbasis of n_hat . sigma with the +1 eigenvector first.
Matrix setting_basis(const Setting& s) {
  const auto u = s.unit();
  const Spectrum sp = hermitian_eig_raw(pauli::combination(u[0], u[1], u[2]), true);
  Matrix out(2, 2);
  out.col(0) = sp.vectors.col(1);
  out.col(1) = sp.vectors.col(0);
  return out;
}

// Born probabilities of every outcome index (bit set = '-') for a setting.
RealVector outcome_probabilities(const DenseOperator& rho, const Setting& s) {
  const Matrix v = tensor_power(setting_basis(s), rho.num_qubits()).matrix();
  const Matrix rv = rho.matrix() * v;
  RealVector p(v.cols());
  for (Eigen::Index i = 0; i < v.cols(); ++i) p(i) = std::max(0.0, v.col(i).dot(rv.col(i)).real());
  const double total = p.sum();
  if (!(total > 0.0)) throw std::invalid_argument("counts: state has no weight in this setting");
  return p / total;
}

// Per-setting histogram of the number of '-' outcomes; every LocalTerm
// estimator depends on a record only through that number.
struct Histograms {
  std::vector<Eigen::VectorXd> counts;  // parallel to schedule.settings()
};

Histograms histograms(const Schedule& schedule, const CountsDataset& data) {
  const int n = schedule.num_qubits();
  if (data.num_qubits != n) {
    throw std::invalid_argument("counts: data has " + std::to_string(data.num_qubits) + " qubits, schedule has " +
                                std::to_string(n));
  }
  const auto& settings = schedule.settings();
  Histograms h;
  h.counts.assign(settings.size(), Eigen::VectorXd::Zero(n + 1));
  for (const auto& rec : data.records) {
    check_outcomes(rec.outcomes, n);
    const Setting canon(rec.setting);
    if (canon.is_trivial()) throw std::invalid_argument("counts: record with zero setting vector");
    std::size_t j = 0;
    while (j < settings.size() && !settings[j].same_as(canon)) ++j;
    if (j == settings.size()) throw std::invalid_argument("counts: setting " + canon.label() + " is not in the schedule");
    const double dot = rec.setting[0] * canon.n()[0] + rec.setting[1] * canon.n()[1] + rec.setting[2] * canon.n()[2];
    const char minus = dot < 0.0 ? '+' : '-';
    const auto m = std::count(rec.outcomes.begin(), rec.outcomes.end(), minus);
    h.counts[j](m) += static_cast<double>(rec.count);
  }
  for (std::size_t j = 0; j < settings.size(); ++j) {
    if (h.counts[j].sum() <= 0.0) throw std::invalid_argument("counts: no counts for setting " + settings[j].label());
  }
  return h;
}

std::size_t setting_index(const Schedule& s, const Setting& setting) {
  const auto& all = s.settings();
  for (std::size_t j = 0; j < all.size(); ++j) {
    if (all[j].same_as(setting)) return j;
  }
  throw std::logic_error("schedule term without a listed setting");
}

// Product value per number of '-' outcomes for one term.
Eigen::VectorXd term_profile(const LocalTerm& t, int n) {
  Eigen::VectorXd f(n + 1);
  const double plus = t.identity_weight + t.scale, minus = t.identity_weight - t.scale;
  for (int m = 0; m <= n; ++m) f(m) = std::pow(plus, n - m) * std::pow(minus, m);
  return f;
}

struct Evaluator {
  const Schedule& schedule;
  double scale;
  std::vector<Eigen::VectorXd> profiles;
  std::vector<std::optional<std::size_t>> slot;

  Evaluator(const Schedule& s, double scale_) : schedule(s), scale(scale_) {
    const int n = s.num_qubits();
    for (const auto& t : s.terms()) {
      profiles.push_back(term_profile(t, n));
      slot.push_back(t.setting.is_trivial() ? std::nullopt : std::optional(setting_index(s, t.setting)));
    }
  }

  double estimator(std::size_t term, const std::vector<Eigen::VectorXd>& probs) const {
    if (!slot[term]) return std::pow(schedule.terms()[term].identity_weight, schedule.num_qubits());
    return profiles[term].dot(probs[*slot[term]]);
  }

  double value(const std::vector<Eigen::VectorXd>& probs) const {
    double v = 0.0;
    for (std::size_t t = 0; t < profiles.size(); ++t) v += scale * schedule.terms()[t].coefficient * estimator(t, probs);
    return v;
  }
};

std::vector<Eigen::VectorXd> normalized(const Histograms& h) {
  std::vector<Eigen::VectorXd> out;
  for (const auto& c : h.counts) out.push_back(c / c.sum());
  return out;
}

// Multinomial draw by sequential binomials.
template <typename Probabilities>
std::vector<std::uint64_t> multinomial(std::uint64_t shots, const Probabilities& p, std::mt19937_64& rng) {
  std::vector<std::uint64_t> out(static_cast<std::size_t>(p.size()), 0);
  std::uint64_t left = shots;
  double mass = 1.0;
  for (Eigen::Index i = 0; i < p.size() && left > 0; ++i) {
    if (i + 1 == p.size() || mass <= 0.0) {
      out[static_cast<std::size_t>(i)] = left;
      break;
    }
    const double q = std::clamp(p(i) / mass, 0.0, 1.0);
    std::binomial_distribution<std::uint64_t> draw(left, q);
    const std::uint64_t c = draw(rng);
    out[static_cast<std::size_t>(i)] = c;
    left -= c;
    mass -= p(i);
  }
  return out;
}

}  // namespace

CountsDataset CountsDataset::from_ndjson(std::string_view text) {
  CountsDataset d;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::string where = "counts line " + std::to_string(line_no) + ": ";
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(where + e.what());
    }
    CountsRecord rec;
    try {
      const auto& s = j.at("setting");
      if (!s.is_array() || s.size() != 3) throw std::invalid_argument(where + "setting must be a 3-vector");
      for (std::size_t k = 0; k < 3; ++k) rec.setting[k] = s.at(k).get<double>();
      rec.outcomes = j.at("outcomes").get<std::string>();
      const auto& c = j.at("count");
      if (!c.is_number_unsigned() && !(c.is_number_integer() && c.get<long long>() >= 0)) {
        throw std::invalid_argument(where + "count must be a non-negative integer");
      }
      rec.count = c.get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(where + e.what());
    }
    if (d.records.empty()) d.num_qubits = static_cast<int>(rec.outcomes.size());
    check_outcomes(rec.outcomes, d.num_qubits);
    d.records.push_back(std::move(rec));
  }
  if (d.records.empty()) throw std::invalid_argument("counts: no records");
  return d;
}

std::string CountsDataset::to_ndjson() const {
  std::string out;
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["setting"] = {component(r.setting[0]), component(r.setting[1]), component(r.setting[2])};
    j["outcomes"] = r.outcomes;
    j["count"] = r.count;
    out += j.dump();
    out += '\n';
  }
  return out;
}

CountsDataset apply_sign_map(const CountsDataset& data, const std::string& sign_map) {
  if (sign_map.empty()) return data;
  check_outcomes(sign_map, data.num_qubits);
  CountsDataset out = data;
  for (auto& r : out.records) {
    for (std::size_t k = 0; k < sign_map.size(); ++k) {
      if (sign_map[k] == '-') r.outcomes[k] = r.outcomes[k] == '+' ? '-' : '+';
    }
  }
  return out;
}

CountsDataset simulate_counts(const DenseOperator& rho, const Schedule& schedule, std::uint64_t shots, std::uint64_t seed) {
  if (rho.num_qubits() != schedule.num_qubits()) throw std::invalid_argument("simulate_counts: qubit counts differ");
  if (std::abs(rho.trace() - 1.0) > 1e-10) throw std::invalid_argument("simulate_counts: state must have unit trace");
  const DenseOperator state = rho.hermitian_part_checked();
  const int n = schedule.num_qubits();
  CountsDataset d;
  d.num_qubits = n;
  const auto& settings = schedule.settings();
  for (std::size_t j = 0; j < settings.size(); ++j) {
    std::mt19937_64 rng(seed + j);
    const RealVector p = outcome_probabilities(state, settings[j]);
    const auto drawn = multinomial(shots, p, rng);
    for (std::size_t i = 0; i < drawn.size(); ++i) {
      if (drawn[i] == 0) continue;
      std::string s(static_cast<std::size_t>(n), '+');
      for (int q = 0; q < n; ++q) {
        if (i >> (n - 1 - q) & 1u) s[static_cast<std::size_t>(q)] = '-';
      }
      d.records.push_back({settings[j].n(), std::move(s), drawn[i]});
    }
  }
  return d;
}

double bootstrap_error(const CountsDataset& data, const Schedule& schedule, double scale, int resamples, std::uint64_t seed) {
  if (resamples < 100) throw std::invalid_argument("bootstrap_error: need at least 100 resamples");
  const Histograms h = histograms(schedule, data);
  const auto probs = normalized(h);
  const Evaluator ev(schedule, scale);
  double mean = 0.0, m2 = 0.0;
  std::vector<Eigen::VectorXd> sample(probs.size());
  for (int b = 0; b < resamples; ++b) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(b));
    for (std::size_t j = 0; j < probs.size(); ++j) {
      const auto total = static_cast<std::uint64_t>(std::llround(h.counts[j].sum()));
      const auto drawn = multinomial(total, probs[j], rng);
      sample[j].resize(probs[j].size());
      for (std::size_t m = 0; m < drawn.size(); ++m) sample[j](static_cast<Eigen::Index>(m)) = static_cast<double>(drawn[m]) / static_cast<double>(total);
    }
    const double v = ev.value(sample);
    const double delta = v - mean;
    mean += delta / (b + 1);
    m2 += delta * (v - mean);
  }
  return std::sqrt(m2 / (resamples - 1));
}

EvaluationResult evaluate_counts(const Schedule& schedule, const CountsDataset& data, const EvaluationOptions& options) {
  const auto probs = normalized(histograms(schedule, data));
  const Evaluator ev(schedule, options.scale);
  EvaluationResult r;
  for (std::size_t t = 0; t < schedule.terms().size(); ++t) {
    const auto& term = schedule.terms()[t];
    TermEstimate e;
    e.setting = term.setting.is_trivial() ? "" : term.setting.label();
    e.coefficient = options.scale * term.coefficient;
    e.estimator = ev.estimator(t, probs);
    e.contribution = e.coefficient * e.estimator;
    r.witness_value += e.contribution;
    r.terms.push_back(std::move(e));
  }
  r.standard_error = bootstrap_error(data, schedule, options.scale, options.bootstrap, options.seed);
  if (options.alpha && options.lambda_sq) {
    r.fidelity_bound = *options.lambda_sq - r.witness_value / *options.alpha;
    r.fidelity_bound_error = r.standard_error / *options.alpha;
  }
  return r;
}

double expected_schedule_value(const Schedule& schedule, const DenseOperator& rho) {
  if (rho.num_qubits() != schedule.num_qubits()) throw std::invalid_argument("expected_schedule_value: qubit counts differ");
  const DenseOperator state = rho.hermitian_part_checked();
  const int n = schedule.num_qubits();
  std::vector<Eigen::VectorXd> probs;
  for (const auto& s : schedule.settings()) {
    const RealVector p = outcome_probabilities(state, s);
    Eigen::VectorXd by_m = Eigen::VectorXd::Zero(n + 1);
    for (Eigen::Index i = 0; i < p.size(); ++i) by_m(std::popcount(static_cast<std::uint64_t>(i))) += p(i);
    probs.push_back(std::move(by_m));
  }
  return Evaluator(schedule, 1.0).value(probs) * state.trace().real();
}

std::string EvaluationResult::to_json() const {
  nlohmann::ordered_json j;
  j["witness_value"] = witness_value;
  j["standard_error"] = standard_error;
  j["fidelity_bound"] = fidelity_bound ? nlohmann::ordered_json(*fidelity_bound) : nlohmann::ordered_json(nullptr);
  j["fidelity_bound_error"] =
      fidelity_bound_error ? nlohmann::ordered_json(*fidelity_bound_error) : nlohmann::ordered_json(nullptr);
  auto& terms_json = j["terms"] = nlohmann::ordered_json::array();
  for (const auto& t : terms) {
    terms_json.push_back({{"setting", t.setting}, {"coefficient", t.coefficient}, {"estimator", t.estimator},
                          {"contribution", t.contribution}});
  }
  return j.dump();
}

}  // namespace symwit
