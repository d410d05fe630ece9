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

#ifndef SYMWIT_WITNESS_HPP
#define SYMWIT_WITNESS_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "symwit/compiler.hpp"
#include "symwit/linalg.hpp"
#include "symwit/rational.hpp"
#include "symwit/symmetric.hpp"

namespace symwit {

/// One named basis operator of a witness.
///   identity      1
///   j_power       (J_axis - shift)^power
///   tensor_power  (sigma_axis + shift * 1)^(tensor N)
///   projector     |target><target|
struct BasisTerm {
  enum class Kind { identity, j_power, tensor_power, projector };
  Kind kind = Kind::identity;
  char axis = 'z';
  int power = 0;
  double shift = 0.0;

  static BasisTerm identity() { return {}; }
  static BasisTerm j(char axis, int power, double shift = 0.0) { return {Kind::j_power, axis, power, shift}; }
  static BasisTerm sigma_power(char axis, double shift) { return {Kind::tensor_power, axis, 0, shift}; }
  static BasisTerm projector() { return {Kind::projector, 'z', 0, 0.0}; }

  DenseOperator realize(const StateVector& target) const;
  std::string describe() const;
};

struct WitnessSpec {
  std::string name;
  int num_qubits = 0;
  std::vector<BasisTerm> basis;
  std::vector<double> coefficients;
  std::vector<std::optional<Rational>> exact;  // parallel to coefficients
  std::optional<double> alpha;
  bool alpha_derived = false;
  std::optional<double> lambda_sq;
  StateVector target;
  std::string target_label;  // "D(6,3)" for Dicke targets

  DenseOperator realize() const;
  /// lambda^2 1 - |target><target|.
  DenseOperator projector_witness() const;
  std::string to_json() const;
  static WitnessSpec from_json(std::string_view text);
};

/// Rejects a witness whose alpha violates min-eig(W - alpha W^(P)) >= -1e-9.
void validate_alpha(const WitnessSpec& w);

/// Largest alpha in (0, 10] with min-eig(W - alpha W^(P)) >= -1e-9, where
/// W^(P) = lambda_sq 1 - |target><target|; empty if no such alpha exists.
std::optional<double> derive_alpha(const DenseOperator& w, const StateVector& target, double lambda_sq);

struct Certification {
  double alpha;  // maximizer of min-eig(W - alpha W^(P))
  double shift;  // smallest t >= 0 with W + t 1 - alpha W^(P) >= 0
};

Certification certify_shift(const DenseOperator& w, const StateVector& target, double lambda_sq);

struct NoiseModel {
  enum class Kind { white, custom };
  Kind kind = Kind::white;
  DenseOperator rho;

  static NoiseModel white(int num_qubits);
  /// Validates that rho is a density matrix within 1e-10.
  static NoiseModel custom(DenseOperator rho);
};

WitnessSpec projector_witness(const StateVector& target, std::string label = "");

/// c 1 - (J_x^2 + J_y^2) + q (J_z - <J_z>_target)^2.
WitnessSpec independent_witness(const StateVector& target, double c, double q, std::string label = "");

struct CatalogOptions {
  std::optional<double> q;  // WI3 family only
  std::optional<double> c;  // WI2 / WI3 constant override
  // WP3_D84 and WP3_D10 are certified by default: the identity coefficient is
  // raised by the smallest amount that makes some alpha admissible. Set this
  // to keep the coefficients exactly as printed.
  bool printed = false;
};

/// Names: WP_D63 WP_D41 WP_D42 WP2_D63 WP3_D63 WP3_D42 WP3_D84 WP3_D10
///        WI2_D63 WI2_D5 WI3_D41 WI3_W5 WI3_W6
WitnessSpec catalog(std::string_view name, const CatalogOptions& options = {});
const std::vector<std::string>& catalog_names();

/// Tr(W rho); rejects rho with |Tr rho - 1| > 1e-10.
double expectation(const WitnessSpec& w, const DenseOperator& rho);
double expectation(const DenseOperator& w, const DenseOperator& rho);

/// Largest noise fraction p for which (1-p) rho + p rho_noise keeps a negative
/// expectation value. Returns 1 when the noise itself is detected.
double noise_tolerance(const WitnessSpec& w, const NoiseModel& noise, const DenseOperator& rho);
double noise_tolerance(const DenseOperator& w, const NoiseModel& noise, const DenseOperator& rho);

/// lambda^2 - value / alpha.
double fidelity_bound(const WitnessSpec& w, double expectation_value);

/// p |D_6^(3)><D_6^(3)| + (1-p)/2 (|D_6^(2)><D_6^(2)| + |D_6^(4)><D_6^(4)|).
DenseOperator nonwhite_noise_state(double p);
/// Non-white noise component (|D_6^(2)><..| + |D_6^(4)><..|)/2.
NoiseModel nonwhite_noise();

struct FidelityRow {
  double p;
  double fidelity;
  double estimate;
};
/// Mixes the target with the noise at each p and reports the exact fidelity
/// and the bound from fidelity_bound.
std::vector<FidelityRow> fidelity_curves(const WitnessSpec& w, const NoiseModel& noise, const std::vector<double>& p_grid);

/// Measurement plan for a witness. Projector witnesses of D(6,3) and D(4,2)
/// use the canned decompositions; everything else goes through compile.
Schedule witness_schedule(const WitnessSpec& w);

}  // namespace symwit

#endif  // SYMWIT_WITNESS_HPP
