#include "ising_ldpc/cli_app.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>

#include "ising_ldpc/base_graph.hpp"
#include "ising_ldpc/channel.hpp"
#include "ising_ldpc/errors.hpp"
#include "ising_ldpc/generator.hpp"
#include "ising_ldpc/machine.hpp"
#include "ising_ldpc/resources.hpp"
#include "ising_ldpc/sa.hpp"
#include "ising_ldpc/sweep.hpp"
#include "ising_ldpc/version.hpp"

namespace ildpc {

namespace {

constexpr std::uint64_t kCliSolverTag = 0xc11;

// Unreadable/missing inputs are usage errors (exit 2); IoError stays for
// output-side failures (exit 3).
template <typename F>
auto load_input(F&& f) {
  try {
    return f();
  } catch (const IoError& e) {
    throw ParameterError(e.what());
  }
}

struct CliConfig {
  // shared code selection
  std::string code = "bundled-bg1";
  std::string format = "alist";
  int z = 4;
  std::uint64_t seed = 1;
  bool seed_given = false;

  // construct
  std::string out_file = "code.alist";

  // decode
  std::string decoder = "oms";
  double ebno = 3.0;
  double alpha = 4.0;
  int iters = 20;
  std::string schedule = "layered";
  int sweeps = 10000;
  int anneals = 10;
  double total_time = 2.2e-6;
  double dt = 1e-10;
  double tau = 5e-9;
  double sf_rate = 4e10;
  double sf_decay = 3e-7;
  std::string machine_init = "received";
  std::string dump_trajectory;

  // sweep
  std::string plan_file;
  std::string out_dir = "sweep_out";
  int jobs = 0;

  // resources
  std::string formulation = "co-designed";
  std::string export_qubo;
};

std::uint64_t env_seed_fallback() {
  if (const char* s = std::getenv("ISING_LDPC_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw ParameterError("ISING_LDPC_SEED is not a valid integer");
    }
  }
  return 1;
}

std::shared_ptr<const ParityCheckMatrix> resolve_cli_code(const CliConfig& cfg) {
  SweepPlan p;
  p.code = cfg.code;
  p.format = cfg.format;
  p.z = cfg.z;
  return load_input([&] { return resolve_code(p); });
}

void ensure_writable_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  fs::path probe = fs::path(dir) / ".write_probe";
  std::ofstream f(probe);
  if (!f) throw IoError("output directory is not writable: " + dir);
  f.close();
  fs::remove(probe, ec);
}

int cmd_construct(const CliConfig& cfg, std::ostream& out) {
  BaseGraph bg =
      load_input([&] { return cfg.code == "bundled-bg1" ? bundled_bg1() : load_base_graph_text(cfg.code); });
  ParityCheckMatrix h = expand_base_graph(bg, cfg.z);
  save_alist(h, cfg.out_file);
  out << h.m() << ' ' << h.n() << ' ' << h.nnz() << '\n';
  return 0;
}

int cmd_decode(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  auto h = resolve_cli_code(cfg);
  GeneratorMatrix g = build_generator(*h);
  const double rate = static_cast<double>(g.k()) / h->n();

  Rng mrng = Rng::substream(cfg.seed, 0x6d5a67, 0);
  BitVector msg = random_message(g.k(), mrng);
  BitVector cw = g.encode(msg);
  auto signal = modulate(cw);
  Rng crng = Rng::substream(cfg.seed, 0x4e015e, 0);
  ChannelObservation obs = transmit(signal, cfg.ebno, rate, crng);
  obs.seed = cfg.seed;

  const auto t0 = std::chrono::steady_clock::now();
  DecodeOutcome result;
  if (cfg.decoder == "bp" || cfg.decoder == "min-sum" || cfg.decoder == "nms" ||
      cfg.decoder == "oms") {
    BpConfig bp;
    bp.algorithm = bp_algorithm_from_name(cfg.decoder);
    bp.schedule = cfg.schedule == "flooding" ? BpSchedule::Flooding : BpSchedule::Layered;
    bp.max_iterations = cfg.iters;
    BpDecoder dec(*h);
    result = dec.decode(obs.llr, bp);
  } else if (cfg.decoder == "sa-unary" || cfg.decoder == "sa-binary" || cfg.decoder == "sa-ho") {
    SaConfig sa;
    sa.sweeps = cfg.sweeps;
    sa.num_anneals = cfg.anneals;
    sa.seed = Rng::derive(cfg.seed, kCliSolverTag, 0);
    Formulation f = cfg.decoder == "sa-unary"    ? Formulation::Unary
                    : cfg.decoder == "sa-binary" ? Formulation::Binary
                                                 : Formulation::HigherOrder;
    result = decode_via_sa(h, obs, f, cfg.alpha, sa);
  } else if (cfg.decoder == "machine") {
    MachineConfig mc;
    mc.time_constant = cfg.tau;
    mc.total_time = cfg.total_time;
    mc.dt = cfg.dt;
    mc.alpha = cfg.alpha;
    mc.spinfix.initial_rate = cfg.sf_rate;
    mc.spinfix.decay_time_constant = cfg.sf_decay;
    mc.init = cfg.machine_init == "random" ? MachineConfig::Init::RandomUniform
                                           : MachineConfig::Init::Received;
    mc.seed = Rng::derive(cfg.seed, kCliSolverTag, 0);
    MachineSim sim(h, obs.received, mc);
    if (!cfg.dump_trajectory.empty()) {
      std::ofstream traj(cfg.dump_trajectory);
      if (!traj) throw IoError("cannot write trajectory file: " + cfg.dump_trajectory);
      result = sim.run(&traj);
    } else {
      result = sim.run();
    }
  } else {
    throw ParameterError("unknown decoder: " + cfg.decoder);
  }
  const auto t1 = std::chrono::steady_clock::now();

  BitVector decoded_msg = g.extract_message(result.bits);
  std::size_t errors = decoded_msg.hamming_distance(msg);
  out << "decoder=" << cfg.decoder << " ebno_db=" << cfg.ebno << " seed=" << cfg.seed << '\n';
  out << "decoded-ok=" << (result.success ? "true" : "false") << " bit-errors=" << errors
      << " iterations=" << result.iterations << " energy=" << result.energy << '\n';
  err << "elapsed-ms=" << std::chrono::duration<double, std::milli>(t1 - t0).count() << '\n';
  out << "noise-convention: sigma^2 = 1/(2*rate*10^(EbNo_dB/10)), rate=k/n=" << rate << '\n';
  return 0;
}

int cmd_sweep(const CliConfig& cfg, std::ostream& out) {
  SweepPlan plan = load_input([&] { return load_plan(cfg.plan_file); });
  if (cfg.jobs > 0) plan.jobs = cfg.jobs;
  if (cfg.seed_given) plan.seed = cfg.seed;
  // resolve the code before any trials or outputs so bad files fail fast
  load_input([&] { return resolve_code(plan); });
  ensure_writable_dir(cfg.out_dir);
  SweepResult result = run_sweep(plan);
  write_sweep_outputs(result, cfg.out_dir);
  out << "cells=" << result.cells.size() << " trials-per-cell=" << plan.messages
      << " out=" << cfg.out_dir << '\n';
  out << "noise-convention: sigma^2 = 1/(2*rate*10^(EbNo_dB/10)), rate=k/n=" << result.rate
      << '\n';
  for (const SweepCell& c : result.cells)
    if (!c.error.empty()) out << "cell-error decoder=" << c.decoder << " ebno=" << c.ebno_db
                              << ": " << c.error << '\n';
  return 0;
}

int cmd_resources(const CliConfig& cfg, std::ostream& out) {
  auto h = resolve_cli_code(cfg);
  ResourceReport rep;
  if (cfg.formulation == "co-designed") {
    rep = resource_report(*h);
  } else if (cfg.formulation == "unary" || cfg.formulation == "binary") {
    std::vector<double> zero(h->n(), 0.0);
    QuadraticModel q = build_qubo(*h, zero, cfg.alpha,
                                  cfg.formulation == "unary" ? AuxEncoding::Unary
                                                             : AuxEncoding::Binary);
    rep = resource_report(q);
  } else {
    throw ParameterError("unknown formulation: " + cfg.formulation);
  }
  if (!cfg.export_qubo.empty()) {
    if (cfg.formulation == "co-designed")
      throw ParameterError("--export-qubo requires a unary or binary formulation");
    std::ofstream f(cfg.export_qubo);
    if (!f) throw IoError("cannot write QUBO export: " + cfg.export_qubo);
    std::vector<double> zero(h->n(), 0.0);
    export_triplets(build_qubo(*h, zero, cfg.alpha,
                               cfg.formulation == "unary" ? AuxEncoding::Unary
                                                          : AuxEncoding::Binary),
                    f);
  }
  out << "spins=" << rep.num_spins << " aux=" << rep.num_aux_spins
      << " couplers=" << rep.num_couplers << '\n';
  out << "distinct-pairs=" << rep.num_coupled_pairs << " linear-terms=" << rep.num_linear_terms
      << " couplers-plus-linear=" << rep.num_couplers + rep.num_linear_terms << '\n';
  out << "convention: " << rep.convention << '\n';
  return 0;
}

std::unique_ptr<CLI::App> build_app(CliConfig& cfg, int& command) {
  auto app = std::make_unique<CLI::App>("LDPC decoding on simulated annealers and a "
                                        "continuous-time augmented Ising machine");
  app->set_help_all_flag("--help-all", "print help for every subcommand");
  app->require_subcommand(1);

  auto* c = app->add_subcommand("construct", "expand a base graph and write an alist file");
  c->add_option("--bg", cfg.code, "base graph: bundled-bg1 or a basegraph-text file");
  c->add_option("--z", cfg.z, "expansion factor Z")->check(CLI::PositiveNumber);
  c->add_option("--out", cfg.out_file, "output alist path");
  c->callback([&command] { command = 1; });

  auto* d = app->add_subcommand("decode", "single-shot decode of one random codeword");
  d->add_option("--code", cfg.code, "bundled-bg1 or a code file");
  d->add_option("--format", cfg.format, "code file format: alist or bg");
  d->add_option("--z", cfg.z, "expansion factor for base graphs");
  d->add_option("--decoder", cfg.decoder,
                "bp | min-sum | nms | oms | sa-unary | sa-binary | sa-ho | machine");
  d->add_option("--ebno", cfg.ebno, "channel Eb/No in dB");
  d->add_option("--seed", cfg.seed, "master seed (env ISING_LDPC_SEED as fallback)");
  d->add_option("--alpha", cfg.alpha, "penalty weight for sa and machine decoders");
  d->add_option("--iters", cfg.iters, "BP iteration budget");
  d->add_option("--schedule", cfg.schedule, "BP schedule: layered or flooding");
  d->add_option("--sweeps", cfg.sweeps, "SA sweep budget");
  d->add_option("--anneals", cfg.anneals, "SA restart count");
  d->add_option("--total-time", cfg.total_time, "machine anneal time in seconds");
  d->add_option("--dt", cfg.dt, "machine integrator step in seconds");
  d->add_option("--tau", cfg.tau, "machine node time constant C/J in seconds");
  d->add_option("--sf-rate", cfg.sf_rate, "machine spin-fix rate at t=0, events/second");
  d->add_option("--sf-decay", cfg.sf_decay, "machine spin-fix decay time constant, seconds");
  d->add_option("--machine-init", cfg.machine_init, "machine init: received or random");
  d->add_option("--dump-trajectory", cfg.dump_trajectory, "write a trajectory CSV (machine)");
  d->callback([&command] { command = 2; });

  auto* s = app->add_subcommand("sweep", "run a BER sweep plan and write CSV + manifest");
  s->add_option("--plan", cfg.plan_file, "plan file (key=value lines)")->required();
  s->add_option("--out", cfg.out_dir, "output directory");
  s->add_option("--jobs", cfg.jobs, "worker threads (0 = all cores)");
  s->add_option("--seed", cfg.seed, "override the plan seed");
  s->callback([&command] { command = 3; });

  auto* r = app->add_subcommand("resources", "report spin/coupler counts for a formulation");
  r->add_option("--code", cfg.code, "bundled-bg1 or a code file");
  r->add_option("--format", cfg.format, "code file format: alist or bg");
  r->add_option("--z", cfg.z, "expansion factor for base graphs");
  r->add_option("--formulation", cfg.formulation, "co-designed | unary | binary");
  r->add_option("--alpha", cfg.alpha, "penalty weight used when building the model");
  r->add_option("--export-qubo", cfg.export_qubo,
                "write the quadratic model as 'i j coeff' triplets (unary/binary only)");
  r->callback([&command] { command = 4; });

  return app;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  int command = 0;
  auto app = build_app(cfg, command);
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app->parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help and friends print through CLI11's machinery
      std::stringstream hs;
      int code = app->exit(e, hs, hs);
      out << hs.str();
      return code;
    }
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    for (CLI::App* sub : app->get_subcommands()) {
      const CLI::Option* opt = sub->get_option_no_throw("--seed");
      if (opt && opt->count() > 0) cfg.seed_given = true;
    }
    if (!cfg.seed_given) cfg.seed = env_seed_fallback();

    switch (command) {
      case 1: return cmd_construct(cfg, out);
      case 2: return cmd_decode(cfg, out, err);
      case 3: return cmd_sweep(cfg, out);
      case 4: return cmd_resources(cfg, out);
      default: err << "error: no subcommand\n"; return 2;
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 4;
  }
}

CliSurface cli_surface() {
  CliConfig cfg;
  int command = 0;
  auto app = build_app(cfg, command);
  CliSurface surface;
  for (const auto* sub : app->get_subcommands([](const CLI::App*) { return true; })) {
    for (const auto* opt : sub->get_options()) {
      surface.options.push_back({sub->get_name(), opt->get_name(), opt->get_description()});
    }
  }
  return surface;
}

}  // namespace ildpc
