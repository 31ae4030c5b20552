// Copyright 2026 The bangbang Authors
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

#include "bangbang/cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "bangbang/bench.hpp"
#include "bangbang/channels.hpp"
#include "bangbang/gaopt.hpp"
#include "bangbang/matrix_io.hpp"
#include "bangbang/ofpqs.hpp"
#include "bangbang/presets.hpp"
#include "bangbang/sequence_io.hpp"
#include "bangbang/statprep.hpp"

#ifndef BANGBANG_VERSION
#define BANGBANG_VERSION "0.0.0"
#endif

namespace bb {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct CommonFlags {
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string system;
};

// Thrown for problems that should end the run with a message and exit code 1.
struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string default_out_dir() {
  const char* env = std::getenv("BBCTL_OUT_DIR");
  return env && *env ? env : "bbctl-out";
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Writes through a temporary file and renames, so readers never see a partial file.
void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw CliError("cannot write " + tmp.string());
    out << content;
    if (!out) throw CliError("failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

class RunOutput {
 public:
  RunOutput(std::string subcommand, const std::string& dir, std::uint64_t seed)
      : dir_(dir), start_(Clock::now()) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw CliError("cannot create output directory " + dir + ": " + ec.message());
    manifest_["subcommand"] = std::move(subcommand);
    manifest_["toolkit_version"] = BANGBANG_VERSION;
    manifest_["seed"] = seed;
    manifest_["artifacts"] = json::array();
  }

  fs::path write(const std::string& name, const std::string& content) {
    const fs::path p = dir_ / name;
    write_atomic(p, content);
    manifest_["artifacts"].push_back(name);
    return p;
  }

  json& manifest() { return manifest_; }

  void finish() {
    for (const auto& a : manifest_["artifacts"]) {
      const fs::path p = dir_ / a.get<std::string>();
      std::error_code ec;
      if (!fs::exists(p, ec) || fs::file_size(p, ec) == 0) {
        throw CliError("artifact missing after write: " + p.string());
      }
    }
    manifest_["wall_time_s"] = std::chrono::duration<double>(Clock::now() - start_).count();
    write_atomic(dir_ / "manifest.json", manifest_.dump(2) + "\n");
  }

 private:
  fs::path dir_;
  json manifest_;
  Clock::time_point start_;
};

SpinSystem resolve_system(const std::string& spec) {
  if (spec.empty()) throw CliError("--system is required");
  try {
    if (spec.rfind("preset:", 0) == 0) return preset_system(spec.substr(7));
    return load_spin_system(spec);
  } catch (const std::invalid_argument& e) {
    throw CliError(e.what());
  }
}

void add_common(CLI::App* cmd, CommonFlags& flags, bool needs_system) {
  cmd->add_option("--seed", flags.seed, "RNG seed; drawn and recorded when absent");
  cmd->add_option("--out", flags.out, "Output directory (default $BBCTL_OUT_DIR or ./bbctl-out)");
  if (needs_system) {
    cmd->add_option("--system", flags.system, "Spin-system JSON file or preset:<name>")->required();
  }
}

std::string trace_csv(const std::vector<double>& trace) {
  std::string s = "generation,best_fitness\n";
  for (std::size_t g = 0; g < trace.size(); ++g) s += std::to_string(g) + "," + fmt(trace[g]) + "\n";
  return s;
}

json report_json(const FidelityReport& r) {
  return json{{"scales", r.scales}, {"fidelities", r.fidelities}, {"mean", r.mean}};
}

// Re-reads a written sequence and checks it is identical to what we hold.
void validate_sequence_file(const fs::path& path, const BBSequence& seq) {
  if (!(load_sequence(path.string()) == seq)) throw CliError("sequence file did not round-trip: " + path.string());
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> v;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (tok.empty()) continue;
    try {
      std::size_t used = 0;
      v.push_back(std::stoi(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw CliError("bad integer '" + tok + "'");
    }
  }
  return v;
}

// ---- ofpqs -----------------------------------------------------------------

struct OfpqsFlags {
  CommonFlags common;
  int n_sys = 2;
  std::vector<int> marked;
  double delta2 = 0.2;
  int l_max = 10;
};

int cmd_ofpqs(const OfpqsFlags& f, std::ostream& out) {
  const std::uint64_t seed = resolve_seed(f.common.seed);
  if (!(f.delta2 > 0.0 && f.delta2 <= 1.0)) throw CliError("--delta2 must be in (0, 1]");
  if (f.l_max < 1) throw CliError("--lmax must be at least 1");
  const double delta = std::sqrt(f.delta2);
  std::vector<SweepPoint> sweep;
  try {
    sweep = sweep_ofpqs(f.n_sys, f.marked, delta, f.l_max);
  } catch (const std::invalid_argument& e) {
    throw CliError(e.what());
  }
  RunOutput run("ofpqs", f.common.out, seed);
  std::string csv = "l,L,P_L\n";
  std::string plot = "# l P_L\n";
  std::string sched_csv = "l,j,alpha_rad,beta_rad\n";
  double min_p = 1.0;
  for (const auto& p : sweep) {
    csv += std::to_string(p.l) + "," + std::to_string(p.L) + "," + fmt(p.probability) + "\n";
    plot += std::to_string(p.l) + " " + fmt(p.probability) + "\n";
    min_p = std::min(min_p, p.probability);
    const PhaseSchedule s = phase_schedule(p.l, delta);
    for (int j = 1; j <= p.l; ++j) {
      sched_csv += std::to_string(p.l) + "," + std::to_string(j) + "," + fmt(s.alpha[j - 1]) + "," +
                   fmt(s.beta[j - 1]) + "\n";
    }
  }
  run.write("ofpqs_probabilities.csv", csv);
  run.write("ofpqs_schedule.csv", sched_csv);
  run.write("ofpqs_plot.dat", plot);
  run.manifest()["config"] = {{"n_sys", f.n_sys}, {"marked", f.marked}, {"delta2", f.delta2}, {"l_max", f.l_max}};
  run.manifest()["results"] = {{"min_probability", min_p}, {"lower_bound", 1.0 - f.delta2}};
  run.finish();
  out << "ofpqs: " << sweep.size() << " iterations, min P_L = " << fmt(min_p) << "\n";
  return 0;
}

// ---- optimize / pps ------------------------------------------------------------

struct OptimizeFlags {
  CommonFlags common;
  std::string target;
  std::string ga_file;
  std::string init_sequence;
  std::optional<int> generations;
};

GAConfig resolve_ga(const std::string& path, std::uint64_t seed) {
  GAConfig c;
  try {
    if (!path.empty()) c = load_ga_config(path);
  } catch (const std::invalid_argument& e) {
    throw CliError(e.what());
  }
  c.seed = seed;
  return c;
}

CMatrix cnot(const SpinSystem& system, int control, int target) {
  const int n = system.n_spins();
  if (control < 0 || control >= n || target < 0 || target >= n || control == target) {
    throw CliError("cnot target needs two distinct spins of the system");
  }
  const Eigen::Index dim = system.dim();
  const Eigen::Index cm = Eigen::Index{1} << (n - 1 - control);
  const Eigen::Index tm = Eigen::Index{1} << (n - 1 - target);
  CMatrix u = CMatrix::Zero(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) u((b & cm) ? (b ^ tm) : b, b) = 1.0;
  return u;
}

struct ResolvedTarget {
  std::optional<CMatrix> unitary;
  std::optional<Eigen::Index> pps_index;
  json description;
};

ResolvedTarget resolve_target(const std::string& spec, const SpinSystem& system) {
  ResolvedTarget t;
  t.description = spec;
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "identity") {
    t.unitary = CMatrix::Identity(system.dim(), system.dim());
  } else if (kind == "cnot") {
    const auto spins = arg.empty() ? std::vector<int>{0, 1} : parse_int_list(arg);
    if (spins.size() != 2) throw CliError("cnot target takes control,target");
    t.unitary = cnot(system, spins[0], spins[1]);
  } else if (kind == "unitary") {
    try {
      t.unitary = load_matrix(arg);
    } catch (const std::invalid_argument& e) {
      throw CliError(e.what());
    }
  } else if (kind == "ofpqs") {
    // ofpqs:<l>:<marked,...>[:<delta2>] with the last spin as the ancilla
    std::vector<std::string> parts;
    std::stringstream in(arg);
    std::string p;
    while (std::getline(in, p, ':')) parts.push_back(p);
    if (parts.size() < 2 || parts.size() > 3) throw CliError("ofpqs target is ofpqs:<l>:<marked>[:<delta2>]");
    OfpqsConfig c;
    c.n_sys = system.n_spins() - 1;
    c.l = parse_int_list(parts[0]).at(0);
    c.marked = parse_int_list(parts[1]);
    c.delta = std::sqrt(parts.size() == 3 ? std::stod(parts[2]) : 0.2);
    try {
      t.unitary = ofpqs_iterations_unitary(c).matrix();
    } catch (const std::invalid_argument& e) {
      throw CliError(e.what());
    }
  } else if (kind == "pps") {
    const auto idx = parse_int_list(arg);
    if (idx.size() != 1 || idx[0] < 0 || idx[0] >= system.dim()) throw CliError("pps target needs a basis index");
    t.pps_index = idx[0];
  } else {
    throw CliError("unknown target '" + spec + "' (identity, cnot[:c,t], unitary:<file>, ofpqs:..., pps:<b>)");
  }
  if (t.unitary && (t.unitary->rows() != system.dim() || t.unitary->cols() != system.dim())) {
    throw CliError("target dimension " + std::to_string(t.unitary->rows()) + " does not match system dimension " +
                   std::to_string(system.dim()));
  }
  return t;
}

int cmd_optimize(const OptimizeFlags& f, std::ostream& out) {
  const std::uint64_t seed = resolve_seed(f.common.seed);
  const SpinSystem system = resolve_system(f.common.system);
  const ResolvedTarget target = resolve_target(f.target, system);
  GAConfig config = resolve_ga(f.ga_file, seed);
  if (f.generations) config.generations = *f.generations;
  if (target.unitary) config.n_twirls = 0;
  if (target.pps_index && config.n_twirls == 0) config.n_twirls = 3;

  std::vector<Genome> initial;
  if (!f.init_sequence.empty()) {
    BBSequence seq;
    try {
      seq = load_sequence(f.init_sequence);
    } catch (const std::invalid_argument& e) {
      throw CliError(f.init_sequence + ": " + e.what());
    }
    if (seq.n_segments() != config.n_segments || seq.n_species() != system.n_species() ||
        static_cast<int>(seq.twirl_boundaries().size()) != config.n_twirls) {
      throw CliError("initial sequence does not match the GA configuration");
    }
    initial.push_back(encode(seq));
  }

  RunOutput run("optimize", f.common.out, seed);
  std::unique_ptr<Objective> objective;
  std::optional<DensityMatrix> rho_in, rho_target;
  if (target.unitary) {
    objective = std::make_unique<UnitaryObjective>(system, *target.unitary, config);
    run.write("target_unitary.txt", format_matrix(*target.unitary, "unitary"));
  } else {
    rho_in = equilibrium_deviation(system, default_purity_factors(system));
    rho_target = pps_target(system.n_spins(), *target.pps_index);
    objective = std::make_unique<StateObjective>(system, *rho_in, *rho_target, config);
    run.write("initial_state.txt", format_density(*rho_in));
    run.write("target_state.txt", format_density(*rho_target));
  }
  const OptimizationResult result = run_ga(*objective, config, initial);
  const BBSequence best = decode(result.best, config.dt, system);
  const FidelityReport report =
      target.unitary ? robust_unitary_fidelity(system, best, *target.unitary, config.rf_scales)
                     : robust_state_fidelity(system, best, *rho_in, *rho_target, config.rf_scales);

  validate_sequence_file(run.write("best_sequence.txt", format_sequence(best)), best);
  run.write("trace.csv", trace_csv(result.trace));
  run.write("system.json", dump_spin_system(system) + "\n");
  run.manifest()["config"] = json::parse(dump_ga_config(config));
  run.manifest()["target"] = target.description;
  run.manifest()["system"] = f.common.system;
  run.manifest()["results"] = {{"best_fitness", result.best_fitness},
                               {"fidelity", report_json(report)},
                               {"generations_run", static_cast<int>(result.trace.size()) - 1},
                               {"evaluations", result.evaluations},
                               {"duty_cycle", best.duty_cycle()}};
  run.finish();
  out << "optimize: best fitness " << fmt(result.best_fitness) << " after " << result.trace.size() - 1
      << " generations\n";
  return 0;
}

struct PpsFlags {
  CommonFlags common;
  int index = 0;
  int twirls = 3;
  std::string ga_file;
  std::optional<int> generations;
};

int cmd_pps(const PpsFlags& f, std::ostream& out) {
  const std::uint64_t seed = resolve_seed(f.common.seed);
  const SpinSystem system = resolve_system(f.common.system);
  if (f.index < 0 || f.index >= system.dim()) throw CliError("--index out of range");
  GAConfig config = resolve_ga(f.ga_file, seed);
  if (f.generations) config.generations = *f.generations;
  config.n_twirls = f.twirls;
  if (config.n_twirls < 1) throw CliError("--twirls must be at least 1");
  const EquilibriumSpec spec = default_purity_factors(system);

  RunOutput run("pps", f.common.out, seed);
  const PpsResult result = prepare_pps(system, spec, f.index, config);
  run.write("bar_diagram.csv", bar_diagram_csv(result, system.n_spins()));
  validate_sequence_file(run.write("best_sequence.txt", format_sequence(result.sequence)), result.sequence);
  run.write("trace.csv", trace_csv(result.optimization.trace));
  run.write("initial_state.txt", format_density(equilibrium_deviation(system, spec)));
  run.write("target_state.txt", format_density(pps_target(system.n_spins(), f.index)));
  run.write("system.json", dump_spin_system(system) + "\n");
  run.manifest()["config"] = json::parse(dump_ga_config(config));
  run.manifest()["system"] = f.common.system;
  run.manifest()["results"] = {{"best_fitness", result.optimization.best_fitness},
                               {"fidelity", report_json(result.fidelity)},
                               {"purity_factors", spec.purity},
                               {"index", f.index}};
  run.finish();
  out << "pps: F_s = " << fmt(result.fidelity.mean) << "\n";
  return 0;
}

// ---- simulate ------------------------------------------------------------------

struct SimulateFlags {
  CommonFlags common;
  std::string sequence;
  std::string target_unitary;
  std::string target_state;
  std::string initial_state;
  std::vector<double> rf_scales = kDefaultRfScales;
};

int cmd_simulate(const SimulateFlags& f, std::ostream& out) {
  const std::uint64_t seed = resolve_seed(f.common.seed);
  const SpinSystem system = resolve_system(f.common.system);
  if (f.target_unitary.empty() == f.target_state.empty()) {
    throw CliError("give exactly one of --target-unitary or --target-state");
  }
  BBSequence seq;
  FidelityReport report;
  std::string kind;
  try {
    seq = load_sequence(f.sequence);
    if (seq.n_species() != system.n_species()) throw CliError("sequence and system disagree on species count");
    if (!f.target_unitary.empty()) {
      kind = "unitary";
      const CMatrix target = load_matrix(f.target_unitary);
      if (target.rows() != system.dim()) throw CliError("target dimension does not match the system");
      report = robust_unitary_fidelity(system, seq, target, f.rf_scales);
    } else {
      kind = "state";
      const DensityMatrix target = load_density(f.target_state);
      const DensityMatrix rho_in = f.initial_state.empty()
                                       ? equilibrium_deviation(system, default_purity_factors(system))
                                       : load_density(f.initial_state);
      if (target.dim() != system.dim() || rho_in.dim() != system.dim()) {
        throw CliError("state dimension does not match the system");
      }
      report = robust_state_fidelity(system, seq, rho_in, target, f.rf_scales);
    }
  } catch (const std::invalid_argument& e) {
    throw CliError(e.what());
  } catch (const std::domain_error& e) {
    throw CliError(e.what());
  }
  RunOutput run("simulate", f.common.out, seed);
  json rep = report_json(report);
  rep["kind"] = kind;
  rep["duration_s"] = seq.duration();
  rep["duty_cycle"] = seq.duty_cycle();
  run.write("simulation.json", rep.dump(2) + "\n");
  run.manifest()["config"] = {{"sequence", f.sequence},
                              {"target_unitary", f.target_unitary},
                              {"target_state", f.target_state},
                              {"initial_state", f.initial_state},
                              {"rf_scales", f.rf_scales}};
  run.manifest()["system"] = f.common.system;
  run.manifest()["results"] = {{"fidelity", report_json(report)}};
  run.finish();
  out << "simulate: mean " << kind << " fidelity " << fmt(report.mean) << "\n";
  return 0;
}

// ---- bench -----------------------------------------------------------------------

struct BenchFlags {
  CommonFlags common;
  BenchConfig config;
};

int cmd_bench(BenchFlags f, std::ostream& out) {
  const std::uint64_t seed = resolve_seed(f.common.seed);
  f.config.seed = seed;
  if (f.config.repeats < 1 || f.config.n_segments < 1) throw CliError("--repeats and --segments must be positive");
  for (double d : f.config.duties) {
    if (!(d >= 0.0 && d <= 1.0)) throw CliError("duty cycles must be in [0, 1]");
  }
  RunOutput run("bench", f.common.out, seed);
  const auto points = run_benchmark(f.config);
  run.write("bench.csv", bench_csv(points));
  run.write("bench_plot.dat", bench_plot_data(points));
  run.manifest()["config"] = {{"sizes", f.config.sizes},
                              {"duties", f.config.duties},
                              {"segments", f.config.n_segments},
                              {"dt", f.config.dt},
                              {"repeats", f.config.repeats}};
  run.manifest()["results"] = {{"rows", points.size()}};
  run.finish();
  out << "bench: " << points.size() << " points\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"bbctl: bang-bang spin control, pulse synthesis and fixed-point search"};
  app.require_subcommand(1);
  app.set_version_flag("--version", BANGBANG_VERSION);

  OfpqsFlags of;
  of.common.out = default_out_dir();
  auto* ofpqs = app.add_subcommand("ofpqs", "Fixed-point search success probabilities versus iterations");
  add_common(ofpqs, of.common, false);
  ofpqs->add_option("--nsys", of.n_sys, "System qubits (database size 2^nsys)");
  ofpqs->add_option("--marked", of.marked, "Marked basis indices")->required()->expected(1, -1);
  ofpqs->add_option("--delta2", of.delta2, "delta^2; the success bound is 1 - delta^2");
  ofpqs->add_option("--lmax", of.l_max, "Largest iteration count");

  OptimizeFlags opt;
  opt.common.out = default_out_dir();
  auto* optimize = app.add_subcommand("optimize", "Synthesize a BB sequence with the genetic algorithm");
  add_common(optimize, opt.common, true);
  optimize->add_option("--target", opt.target, "identity | cnot[:c,t] | unitary:<file> | ofpqs:<l>:<marked>[:<delta2>] | pps:<b>")
      ->required();
  optimize->add_option("--ga", opt.ga_file, "GA configuration JSON");
  optimize->add_option("--init-sequence", opt.init_sequence, "Sequence file added to the initial population");
  optimize->add_option("--generations", opt.generations, "Override the configured generation count");

  SimulateFlags sim;
  sim.common.out = default_out_dir();
  auto* simulate = app.add_subcommand("simulate", "Evaluate a stored sequence against a stored target");
  add_common(simulate, sim.common, true);
  simulate->add_option("--sequence", sim.sequence, "Sequence file")->required();
  simulate->add_option("--target-unitary", sim.target_unitary, "Target unitary matrix file");
  simulate->add_option("--target-state", sim.target_state, "Target density matrix file");
  simulate->add_option("--initial-state", sim.initial_state, "Initial density matrix (default: equilibrium deviation)");
  simulate->add_option("--rf-scales", sim.rf_scales, "RF amplitude scale grid")->delimiter(',');

  PpsFlags pf;
  pf.common.out = default_out_dir();
  auto* pps = app.add_subcommand("pps", "Pseudopure state preparation with twirls");
  add_common(pps, pf.common, true);
  pps->add_option("--index", pf.index, "Target basis state");
  pps->add_option("--twirls", pf.twirls, "Number of twirl genes");
  pps->add_option("--ga", pf.ga_file, "GA configuration JSON");
  pps->add_option("--generations", pf.generations, "Override the configured generation count");

  BenchFlags bf;
  bf.common.out = default_out_dir();
  auto* bench = app.add_subcommand("bench", "Time BB against SM propagator evaluation");
  add_common(bench, bf.common, false);
  bench->add_option("--sizes", bf.config.sizes, "Spin counts")->delimiter(',');
  bench->add_option("--duties", bf.config.duties, "Duty cycles")->delimiter(',');
  bench->add_option("--segments", bf.config.n_segments, "Segments per sequence");
  bench->add_option("--repeats", bf.config.repeats, "Timing repeats per point");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*ofpqs) return cmd_ofpqs(of, out);
    if (*optimize) return cmd_optimize(opt, out);
    if (*simulate) return cmd_simulate(sim, out);
    if (*pps) return cmd_pps(pf, out);
    if (*bench) return cmd_bench(bf, out);
  } catch (const CliError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace bb
