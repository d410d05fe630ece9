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

// Command-line front end. Exit codes: 0 success, 2 usage or input error,
// 3 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "symwit/compiler.hpp"
#include "symwit/config.hpp"
#include "symwit/counts.hpp"
#include "symwit/optimizer.hpp"
#include "symwit/spectral.hpp"
#include "symwit/symmetric.hpp"
#include "symwit/witness.hpp"

using namespace symwit;
using json = nlohmann::ordered_json;

namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string config_path;
  std::string out_path;
  std::string format = "json";
  SolverConfig config;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const Globals& g, const std::string& text) {
  std::string body = text;
  if (body.empty() || body.back() != '\n') body += '\n';
  if (g.out_path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(g.out_path);
  if (!out) throw UsageError("cannot write " + g.out_path);
  out << body;
}

bool csv(const Globals& g) { return g.format == "csv"; }

std::string dump(const json& j) { return j.dump(2); }

// "dicke:N,m"
StateVector parse_state(const std::string& spec) {
  int n = 0, m = 0;
  char tail = 0;
  if (std::sscanf(spec.c_str(), "dicke:%d,%d%c", &n, &m, &tail) != 2) {
    throw UsageError("state must look like dicke:N,m (got '" + spec + "')");
  }
  return dicke(n, m);
}

NoiseModel parse_noise(const std::string& name, int n) {
  if (name == "white") return NoiseModel::white(n);
  if (name == "nw") {
    if (n != 6) throw UsageError("noise 'nw' is defined for six qubits only");
    return nonwhite_noise();
  }
  throw UsageError("unknown noise '" + name + "' (expected white or nw)");
}

DenseOperator mix(const StateVector& target, double p, const NoiseModel& noise) {
  if (!(p >= 0.0 && p <= 1.0)) throw UsageError("--p must lie in [0, 1]");
  return target.projector() * Complex(1.0 - p) + noise.rho * Complex(p);
}

DenseOperator parse_operator_file(const std::string& path) {
  const json j = json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) throw UsageError(path + ": not valid JSON");
  try {
    const int n = j.at("num_qubits").get<int>();
    const auto& re = j.at("re");
    const Eigen::Index d = qubit_dim(n);
    if (re.size() != static_cast<std::size_t>(d)) throw UsageError(path + ": 're' must have 2^N rows");
    Matrix m(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
      if (re[static_cast<std::size_t>(r)].size() != static_cast<std::size_t>(d)) throw UsageError(path + ": ragged matrix");
      for (Eigen::Index c = 0; c < d; ++c) {
        const double im = j.contains("im") ? j["im"].at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>() : 0.0;
        m(r, c) = Complex(re[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>(), im);
      }
    }
    return DenseOperator(n, std::move(m));
  } catch (const json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

struct WitnessSource {
  std::string name;
  std::string file;
  std::optional<double> q, c;
  bool printed = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--witness,--name", name, "catalog witness name");
    cmd->add_flag("--printed", printed, "keep large-N coefficients exactly as tabulated (no certifying shift)");
    cmd->add_option("--witness-file", file, "witness JSON (as written by optimize-witness)");
    cmd->add_option("--q", q, "q parameter for WI3 witnesses");
    cmd->add_option("--c", c, "constant override for WI2/WI3 witnesses");
  }

  WitnessSpec load() const {
    if (name.empty() == file.empty()) throw UsageError("give exactly one of --witness and --witness-file");
    if (!file.empty()) return WitnessSpec::from_json(read_file(file));
    return catalog(name, CatalogOptions{q, c, printed});
  }
};

struct ObservableSource {
  std::string kind = "jxy";
  std::string file;
  int n = 0;
  int m = 0;
  double q = 0.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--observable", kind, "jxy (Jx^2+Jy^2), q (Jx^2+Jy^2-q(Jz-<Jz>)^2) or projector");
    cmd->add_option("--operator", file, "operator JSON {num_qubits, re, im}");
    cmd->add_option("--n", n, "qubit count");
    cmd->add_option("--m", m, "excitations of the Dicke target (q and projector observables)");
    cmd->add_option("--q", q, "q parameter");
  }

  DenseOperator load() const {
    if (!file.empty()) return parse_operator_file(file);
    if (n < 2) throw UsageError("--n must be at least 2");
    if (kind == "jxy") return q_observable(n, 0, 0.0);
    if (kind == "q") return q_observable(n, m, q);
    if (kind == "projector") return dicke(n, m).projector();
    throw UsageError("unknown observable '" + kind + "'");
  }
};

std::vector<int> parse_part(const std::string& s) {
  std::vector<int> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw UsageError("--part must be a comma-separated list of qubit indices");
    }
  }
  return out;
}

json part_json(const std::vector<int>& part) { return json(part); }

std::string schedule_csv(const Schedule& s) {
  std::string out = "coefficient,setting,nx,ny,nz,scale,identity_weight\n";
  for (const auto& t : s.terms()) {
    const auto& n = t.setting.n();
    out += num(t.coefficient) + "," + (t.setting.is_trivial() ? "1" : t.setting.label()) + "," + num(n[0]) + "," +
           num(n[1]) + "," + num(n[2]) + "," + num(t.scale) + "," + num(t.identity_weight) + "\n";
  }
  return out;
}

std::string schedule_json(const Schedule& s) { return dump(json::parse(s.to_json())); }

std::vector<double> parse_grid(const std::string& spec) {
  // "a:step:b" or a comma list.
  std::vector<double> grid;
  double a = 0, step = 0, b = 0;
  char tail = 0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%lf%c", &a, &step, &b, &tail) == 3) {
    if (!(step > 0.0) || b < a) throw UsageError("grid a:step:b needs step > 0 and b >= a");
    const auto count = static_cast<int>(std::floor((b - a) / step + 1e-9));
    for (int i = 0; i <= count; ++i) grid.push_back(a + i * step);
    return grid;
  }
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      grid.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw UsageError("bad grid '" + spec + "'");
    }
  }
  if (grid.empty()) throw UsageError("empty grid");
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symwit: Dicke-state entanglement witnesses, measurement schedules and optimizers"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "random seed (overrides the config file)");
  app.add_option("--config", g.config_path, "flat key = value solver configuration");
  app.add_option("--out", g.out_path, "write output to this file instead of stdout");
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  std::function<void()> run;

  auto* dicke_cmd = app.add_subcommand("dicke", "Dicke state amplitudes and constants");
  int dn = 0, dm = 0;
  dicke_cmd->add_option("--n", dn, "qubits")->required();
  dicke_cmd->add_option("--m", dm, "excitations")->required();
  dicke_cmd->callback([&] {
    run = [&] {
      const StateVector s = dicke(dn, dm);
      if (csv(g)) {
        std::string out = "index,amplitude\n";
        for (Eigen::Index i = 0; i < s.dim(); ++i) {
          if (s[i] != 0.0) out += std::to_string(i) + "," + num(s[i].real()) + "\n";
        }
        return emit(g, out);
      }
      json j;
      j["num_qubits"] = dn;
      j["excitations"] = dm;
      json support = json::array();
      for (Eigen::Index i = 0; i < s.dim(); ++i) {
        if (s[i] != 0.0) support.push_back(i);
      }
      j["amplitude"] = support.empty() ? 0.0 : s[support[0].get<Eigen::Index>()].real();
      j["support"] = support;
      j["lambda_sq"] = schmidt_max_sq(s);
      emit(g, dump(j));
    };
  });

  auto* compile_cmd = app.add_subcommand("compile", "compile a permutation-invariant operator into settings");
  WitnessSource compile_w;
  std::string compile_op;
  compile_w.attach(compile_cmd);
  compile_cmd->add_option("--operator", compile_op, "operator JSON {num_qubits, re, im}");
  compile_cmd->callback([&] {
    run = [&] {
      Schedule s;
      if (!compile_op.empty()) {
        s = compile(parse_operator_file(compile_op));
      } else {
        s = compile(compile_w.load().realize());
      }
      emit(g, csv(g) ? schedule_csv(s) : schedule_json(s));
    };
  });

  auto* bound_cmd = app.add_subcommand("settings-bound", "upper bounds L_N and L'_N on the number of settings");
  int bn = 0;
  bound_cmd->add_option("--n", bn, "qubits (2..12)")->required();
  bound_cmd->callback([&] {
    run = [&] {
      const auto b = settings_upper_bound(bn);
      if (csv(g)) return emit(g, "N,L,L_prime\n" + std::to_string(bn) + "," + std::to_string(b.closed_form) + "," +
                                     std::to_string(b.enumerated) + "\n");
      emit(g, "L=" + std::to_string(b.closed_form) + " L'=" + std::to_string(b.enumerated));
    };
  });

  auto* canned_cmd = app.add_subcommand("canned", "hand-optimized decompositions (D63, D42)");
  std::string canned_name;
  canned_cmd->add_option("--name", canned_name, "D63 or D42")->required();
  canned_cmd->callback([&] {
    run = [&] {
      const Schedule s = canned_decomposition(canned_name);
      emit(g, csv(g) ? schedule_csv(s) : schedule_json(s));
    };
  });

  auto* witness_cmd = app.add_subcommand("witness", "inspect catalog witnesses");
  witness_cmd->require_subcommand(1);
  witness_cmd->fallthrough();
  auto* list_cmd = witness_cmd->add_subcommand("list", "catalog witness names");
  list_cmd->callback([&] {
    run = [&] {
      std::string out = csv(g) ? "name\n" : "";
      for (const auto& n : catalog_names()) out += n + "\n";
      emit(g, out);
    };
  });
  auto* show_cmd = witness_cmd->add_subcommand("show", "coefficients and constants");
  WitnessSource show_w;
  show_w.attach(show_cmd);
  show_cmd->callback([&] {
    run = [&] {
      const WitnessSpec w = show_w.load();
      if (!csv(g)) return emit(g, dump(json::parse(w.to_json())));
      std::string out = "term,coefficient\n";
      for (std::size_t k = 0; k < w.basis.size(); ++k) out += w.basis[k].describe() + "," + num(w.coefficients[k]) + "\n";
      emit(g, out);
    };
  });

  auto* eval_cmd = witness_cmd->add_subcommand("eval", "Tr(W rho) on a noisy Dicke state");
  WitnessSource eval_w;
  eval_w.attach(eval_cmd);
  std::string eval_state, eval_noise = "white";
  double eval_p = 0.0;
  eval_cmd->add_option("--state", eval_state, "dicke:N,m (defaults to the witness target)");
  eval_cmd->add_option("--p", eval_p, "noise fraction");
  eval_cmd->add_option("--noise", eval_noise, "white or nw");
  eval_cmd->callback([&] {
    run = [&] {
      const WitnessSpec w = eval_w.load();
      const StateVector s = eval_state.empty() ? w.target : parse_state(eval_state);
      const DenseOperator rho = mix(s, eval_p, parse_noise(eval_noise, s.num_qubits()));
      const double v = expectation(w, rho);
      json j;
      j["witness"] = w.name;
      j["value"] = v;
      j["fidelity_bound"] = w.alpha ? json(fidelity_bound(w, v)) : json(nullptr);
      if (csv(g)) return emit(g, "witness,value\n" + w.name + "," + num(v) + "\n");
      emit(g, dump(j));
    };
  });

  auto* tol_cmd = witness_cmd->add_subcommand("tolerance", "noise tolerance p*");
  WitnessSource tol_w;
  tol_w.attach(tol_cmd);
  std::string tol_noise = "white";
  tol_cmd->add_option("--noise", tol_noise, "white or nw");
  auto tolerance_run = [&](const WitnessSource& src, const std::string& noise) {
    const WitnessSpec w = src.load();
    const double t = noise_tolerance(w, parse_noise(noise, w.num_qubits), w.target.projector());
    if (csv(g)) return emit(g, "witness,noise,tolerance\n" + w.name + "," + noise + "," + num(t) + "\n");
    json j;
    j["witness"] = w.name;
    j["noise"] = noise;
    j["tolerance"] = t;
    emit(g, dump(j));
  };
  tol_cmd->callback([&] { run = [&] { tolerance_run(tol_w, tol_noise); }; });

  // Short form: symwit tolerance --witness NAME --noise white
  auto* tol_short = app.add_subcommand("tolerance", "same as witness tolerance");
  WitnessSource tol_short_w;
  tol_short_w.attach(tol_short);
  std::string tol_short_noise = "white";
  tol_short->add_option("--noise", tol_short_noise, "white or nw");
  tol_short->callback([&] { run = [&] { tolerance_run(tol_short_w, tol_short_noise); }; });

  auto* opt_cmd = app.add_subcommand("optimize-witness", "maximize noise tolerance over a moment basis");
  std::string opt_target = "dicke:6,3", opt_axes = "xyz", opt_noise = "white";
  int opt_power = 6;
  bool opt_odd = false;
  opt_cmd->add_option("--target", opt_target, "dicke:N,m");
  opt_cmd->add_option("--axes", opt_axes, "collective axes of the moments, e.g. xy or xyz");
  opt_cmd->add_option("--max-power", opt_power, "highest moment");
  opt_cmd->add_flag("--odd", opt_odd, "include odd moments");
  opt_cmd->add_option("--noise", opt_noise, "white or nw");
  opt_cmd->callback([&] {
    run = [&] {
      const StateVector t = parse_state(opt_target);
      char label[32];
      int n = 0, m = 0;
      std::sscanf(opt_target.c_str(), "dicke:%d,%d", &n, &m);
      std::snprintf(label, sizeof label, "D(%d,%d)", n, m);
      WitnessOptimizationProblem p{t, label, parse_noise(opt_noise, n), moment_basis(t, opt_axes, opt_power, opt_odd), std::nullopt};
      const auto [w, report] = optimize_witness(p, g.config);
      const double tol = noise_tolerance(w, p.noise, t.projector());
      if (csv(g)) {
        std::string out = "term,coefficient\n";
        for (std::size_t k = 0; k < w.basis.size(); ++k) out += w.basis[k].describe() + "," + num(w.coefficients[k]) + "\n";
        out += "alpha," + num(*w.alpha) + "\ntolerance," + num(tol) + "\n";
        return emit(g, out);
      }
      json j;
      j["witness"] = json::parse(w.to_json());
      j["tolerance"] = tol;
      j["report"] = json::parse(report.to_json());
      emit(g, dump(j));
    };
  });

  auto* ppt_cmd = app.add_subcommand("ppt-max", "maximum of <M> over PPT states");
  ObservableSource ppt_obs;
  std::string ppt_part;
  ppt_obs.attach(ppt_cmd);
  ppt_cmd->add_option("--part", ppt_part, "transposed qubits, e.g. 0,1 (default: best over all bipartitions)");
  ppt_cmd->callback([&] {
    run = [&] {
      const DenseOperator m = ppt_obs.load();
      json j;
      if (!ppt_part.empty()) {
        const PptResult r = max_ppt({m, parse_part(ppt_part)}, g.config);
        if (!r.report.converged) throw NumericalError("max_ppt did not converge: " + r.report.to_json());
        j["value"] = r.value;
        j["bound"] = r.report.bound;
        j["part"] = parse_part(ppt_part);
        j["report"] = json::parse(r.report.to_json());
      } else {
        const BipartiteMax r = max_ppt_all(m, g.config);
        j["value"] = r.value;
        j["bound"] = r.bound;
        j["part"] = part_json(r.part);
      }
      if (csv(g)) return emit(g, "value,bound\n" + num(j["value"].get<double>()) + "," + num(j["bound"].get<double>()) + "\n");
      emit(g, dump(j));
    };
  });

  auto* bisep_cmd = app.add_subcommand("bisep-max", "seesaw lower bound on the biseparable maximum of <M>");
  ObservableSource bisep_obs;
  std::string bisep_part;
  bisep_obs.attach(bisep_cmd);
  bisep_cmd->add_option("--part", bisep_part, "one bipartition (default: best over all)");
  bisep_cmd->callback([&] {
    run = [&] {
      const DenseOperator m = bisep_obs.load();
      json j;
      if (!bisep_part.empty()) {
        const auto part = parse_part(bisep_part);
        j["value"] = max_bisep_seesaw(m, part, g.config).value;
        j["part"] = part;
      } else {
        const BipartiteMax r = max_bisep_all(m, g.config);
        j["value"] = r.value;
        j["part"] = part_json(r.part);
      }
      if (csv(g)) return emit(g, "value\n" + num(j["value"].get<double>()) + "\n");
      emit(g, dump(j));
    };
  });

  auto* qscan_cmd = app.add_subcommand("q-scan", "noise tolerance of the q-family witness over a q grid (CSV)");
  int qn = 4, qm = 1;
  std::string qgrid = "0:0.1:4";
  qscan_cmd->add_option("--n", qn, "qubits");
  qscan_cmd->add_option("--m", qm, "excitations of the target");
  qscan_cmd->add_option("--grid", qgrid, "a:step:b or a comma list");
  qscan_cmd->callback([&] {
    run = [&] {
      const QScanResult r = q_scan(qn, qm, parse_grid(qgrid), g.config);
      std::string out = "q,c,tolerance,best\n";
      for (std::size_t i = 0; i < r.rows.size(); ++i) {
        out += num(r.rows[i].q) + "," + num(r.rows[i].c) + "," + num(r.rows[i].tolerance) + "," + (i == r.best ? "1" : "0") + "\n";
      }
      emit(g, out);
    };
  });

  auto* fid_cmd = app.add_subcommand("fidelity-curve", "fidelity and its witness bound against noise (CSV)");
  WitnessSource fid_w;
  fid_w.attach(fid_cmd);
  std::string fid_noise = "white";
  int fid_grid = 101;
  fid_cmd->add_option("--noise", fid_noise, "white or nw");
  fid_cmd->add_option("--grid", fid_grid, "number of p values in [0, 1]")->check(CLI::Range(2, 100000));
  fid_cmd->callback([&] {
    run = [&] {
      const WitnessSpec w = fid_w.load();
      std::vector<double> ps;
      for (int i = 0; i < fid_grid; ++i) ps.push_back(static_cast<double>(i) / (fid_grid - 1));
      std::string out = "p,fidelity,estimate\n";
      for (const auto& row : fidelity_curves(w, parse_noise(fid_noise, w.num_qubits), ps)) {
        out += num(row.p) + "," + num(row.fidelity) + "," + num(row.estimate) + "\n";
      }
      emit(g, out);
    };
  });

  auto* sim_cmd = app.add_subcommand("simulate", "sample measurement counts for a witness schedule (NDJSON)");
  WitnessSource sim_w;
  sim_w.attach(sim_cmd);
  std::string sim_schedule, sim_state, sim_noise = "white";
  double sim_p = 0.0;
  std::uint64_t sim_shots = 100000;
  sim_cmd->add_option("--schedule", sim_schedule, "schedule JSON instead of a witness");
  sim_cmd->add_option("--state", sim_state, "dicke:N,m (defaults to the witness target)");
  sim_cmd->add_option("--p", sim_p, "noise fraction");
  sim_cmd->add_option("--noise", sim_noise, "white or nw");
  sim_cmd->add_option("--shots", sim_shots, "shots per setting");
  sim_cmd->callback([&] {
    run = [&] {
      Schedule s;
      std::optional<StateVector> target;
      if (!sim_schedule.empty()) {
        s = Schedule::from_json(read_file(sim_schedule));
      } else {
        const WitnessSpec w = sim_w.load();
        s = witness_schedule(w);
        target = w.target;
      }
      if (!sim_state.empty()) target = parse_state(sim_state);
      if (!target) throw UsageError("--state is required with --schedule");
      const DenseOperator rho = mix(*target, sim_p, parse_noise(sim_noise, target->num_qubits()));
      emit(g, simulate_counts(rho, s, sim_shots, g.config.seed).to_ndjson());
    };
  });

  auto* evc_cmd = app.add_subcommand("eval-counts", "witness value and bootstrap error from counts");
  WitnessSource evc_w;
  evc_w.attach(evc_cmd);
  std::string evc_schedule, evc_counts;
  int evc_boot = 1000;
  evc_cmd->add_option("--schedule", evc_schedule, "schedule JSON instead of a witness");
  evc_cmd->add_option("--counts", evc_counts, "NDJSON counts file")->required();
  evc_cmd->add_option("--bootstrap", evc_boot, "bootstrap resamples (>= 100)");
  evc_cmd->callback([&] {
    run = [&] {
      Schedule s;
      EvaluationOptions opt;
      opt.bootstrap = evc_boot;
      opt.seed = g.config.seed;
      if (!evc_schedule.empty()) {
        s = Schedule::from_json(read_file(evc_schedule));
      } else {
        const WitnessSpec w = evc_w.load();
        s = witness_schedule(w);
        opt.alpha = w.alpha;
        opt.lambda_sq = w.lambda_sq;
      }
      const CountsDataset data = apply_sign_map(CountsDataset::from_ndjson(read_file(evc_counts)), g.config.sign_map);
      const EvaluationResult r = evaluate_counts(s, data, opt);
      if (csv(g)) {
        std::string out = "setting,coefficient,estimator,contribution\n";
        for (const auto& t : r.terms) out += (t.setting.empty() ? "1" : t.setting) + "," + num(t.coefficient) + "," + num(t.estimator) + "," + num(t.contribution) + "\n";
        return emit(g, out);
      }
      emit(g, dump(json::parse(r.to_json())));
    };
  });

  auto fail = [](int code, const std::string& kind, const std::string& message) {
    json j;
    j["error"] = kind;
    j["message"] = message;
    std::cerr << j.dump() << "\n";
    return code;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail(2, "usage", e.what());
  }
  try {
    if (!g.config_path.empty()) g.config = SolverConfig::load(g.config_path);
    if (g.seed) g.config.seed = *g.seed;
    if (run) run();
  } catch (const NumericalError& e) {
    return fail(3, "numerical", e.what());
  } catch (const std::domain_error& e) {
    return fail(3, "numerical", e.what());
  } catch (const std::invalid_argument& e) {
    return fail(2, "input", e.what());
  } catch (const std::exception& e) {
    return fail(3, "internal", e.what());
  }
  return 0;
}
