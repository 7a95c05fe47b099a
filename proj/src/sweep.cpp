#include "ising_ldpc/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "ising_ldpc/channel.hpp"
#include "ising_ldpc/errors.hpp"
#include "ising_ldpc/version.hpp"

namespace ildpc {

namespace {

// substream tags
constexpr std::uint64_t kMsgTag = 0x6d5a67;
constexpr std::uint64_t kNoiseTag = 0x4e015e;
constexpr std::uint64_t kSolverTag = 0x50f7e2;

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

bool DecoderSpec::is_bp() const {
  return kind == "bp" || kind == "min-sum" || kind == "nms" || kind == "oms";
}

bool DecoderSpec::is_sa() const {
  return kind == "sa-unary" || kind == "sa-binary" || kind == "sa-ho";
}

Formulation DecoderSpec::sa_formulation() const {
  if (kind == "sa-unary") return Formulation::Unary;
  if (kind == "sa-binary") return Formulation::Binary;
  return Formulation::HigherOrder;
}

std::string DecoderSpec::formulation_label() const {
  if (is_sa()) return formulation_name(sa_formulation());
  if (is_machine()) return "co-designed";
  return "-";
}

std::string DecoderSpec::budget_label() const {
  if (is_sa()) return std::to_string(sa.sweeps);
  if (is_machine()) return format_g6(machine.total_time);
  return std::to_string(bp.max_iterations);
}

DecoderSpec parse_decoder_spec(const std::string& token) {
  DecoderSpec spec;
  std::string params;
  auto colon = token.find(':');
  spec.kind = token.substr(0, colon);
  if (colon != std::string::npos) params = token.substr(colon + 1);

  static const char* kKinds[] = {"bp", "min-sum", "nms", "oms", "sa-unary", "sa-binary",
                                 "sa-ho", "machine"};
  bool known = false;
  for (const char* k : kKinds) known |= spec.kind == k;
  if (!known) throw ParameterError("unknown decoder: " + spec.kind);

  spec.bp.algorithm = spec.is_bp() ? bp_algorithm_from_name(spec.kind) : BpAlgorithm::SumProduct;
  spec.bp.schedule = BpSchedule::Layered;

  std::istringstream ss(params);
  std::string kv;
  while (std::getline(ss, kv, ';')) {
    if (kv.empty()) continue;
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ParameterError("decoder parameter needs key=value: " + kv);
    std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
    try {
      if (key == "iters")
        spec.bp.max_iterations = std::stoi(val);
      else if (key == "schedule")
        spec.bp.schedule = val == "flooding" ? BpSchedule::Flooding : BpSchedule::Layered;
      else if (key == "clamp")
        spec.bp.llr_clamp = std::stod(val);
      else if (key == "norm")
        spec.bp.normalization_factor = std::stod(val);
      else if (key == "beta")
        spec.bp.offset_beta = std::stod(val);
      else if (key == "alpha")
        spec.alpha = std::stod(val);
      else if (key == "sweeps")
        spec.sa.sweeps = std::stoi(val);
      else if (key == "anneals")
        spec.sa.num_anneals = std::stoi(val);
      else if (key == "beta0")
        spec.sa.beta_start = std::stod(val);
      else if (key == "beta1")
        spec.sa.beta_end = std::stod(val);
      else if (key == "total-time")
        spec.machine.total_time = std::stod(val);
      else if (key == "dt")
        spec.machine.dt = std::stod(val);
      else if (key == "tau")
        spec.machine.time_constant = std::stod(val);
      else if (key == "sf-rate")
        spec.machine.spinfix.initial_rate = std::stod(val);
      else if (key == "sf-decay")
        spec.machine.spinfix.decay_time_constant = std::stod(val);
      else if (key == "init")
        spec.machine.init = val == "random" ? MachineConfig::Init::RandomUniform
                                            : MachineConfig::Init::Received;
      else if (key == "sf-clip")
        spec.machine.spinfix.clip_duration = std::stod(val);
      else if (key == "gain")
        spec.machine.gain.enabled = val == "1" || val == "true";
      else if (key == "gain-min")
        spec.machine.gain.g_min = std::stod(val);
      else if (key == "gain-tau")
        spec.machine.gain.time_constant = std::stod(val);
      else
        throw ParameterError("unknown decoder parameter: " + key);
    } catch (const std::invalid_argument&) {
      throw ParameterError("bad value for decoder parameter " + key + ": " + val);
    }
  }
  return spec;
}

SweepPlan parse_plan(std::istream& in) {
  SweepPlan plan;
  plan.ebno_db.clear();
  std::string line;
  int lineno = 0;
  std::vector<std::string> decoder_tokens;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto strip = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = strip(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("plan: expected key=value", lineno);
    std::string key = strip(line.substr(0, eq));
    std::string val = strip(line.substr(eq + 1));
    try {
      if (key.rfind("meta_", 0) == 0) continue;  // manifest metadata, ignored on reload
      if (key == "code")
        plan.code = val;
      else if (key == "format")
        plan.format = val;
      else if (key == "z")
        plan.z = std::stoi(val);
      else if (key == "ebno") {
        std::istringstream vs(val);
        std::string item;
        while (std::getline(vs, item, ',')) plan.ebno_db.push_back(std::stod(item));
      } else if (key == "decoders") {
        std::istringstream vs(val);
        std::string item;
        while (std::getline(vs, item, ',')) decoder_tokens.push_back(item);
      } else if (key == "messages")
        plan.messages = std::stoi(val);
      else if (key == "seed")
        plan.seed = std::stoull(val);
      else if (key == "jobs")
        plan.jobs = std::stoi(val);
      else if (key == "sweeps")
        plan.sa_sweeps = std::stoi(val);
      else if (key == "anneals")
        plan.sa_anneals = std::stoi(val);
      else if (key == "alpha")
        plan.alpha = std::stod(val);
      else if (key == "expected-ber")
        plan.emit_expected_ber = val == "true" || val == "1";
      else
        throw ParseError("plan: unknown key '" + key + "'", lineno);
    } catch (const std::invalid_argument&) {
      throw ParseError("plan: bad value for " + key + ": " + val, lineno);
    } catch (const std::out_of_range&) {
      throw ParseError("plan: value out of range for " + key + ": " + val, lineno);
    }
  }
  for (const std::string& tok : decoder_tokens) {
    DecoderSpec spec = parse_decoder_spec(tok);
    // plan-level defaults for fields the token left untouched
    if (tok.find("sweeps=") == std::string::npos) spec.sa.sweeps = plan.sa_sweeps;
    if (tok.find("anneals=") == std::string::npos) spec.sa.num_anneals = plan.sa_anneals;
    if (tok.find("alpha=") == std::string::npos) spec.alpha = plan.alpha;
    plan.decoders.push_back(std::move(spec));
  }
  if (plan.ebno_db.empty()) throw ParseError("plan: no ebno grid", lineno);
  if (plan.decoders.empty()) throw ParseError("plan: no decoders", lineno);
  if (plan.messages < 1) throw ParseError("plan: messages must be >= 1", lineno);
  return plan;
}

SweepPlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open plan file: " + path);
  return parse_plan(in);
}

std::shared_ptr<const ParityCheckMatrix> resolve_code(const SweepPlan& plan, std::string* label) {
  if (plan.code == "bundled-bg1") {
    if (label) *label = "bundled-bg1";
    return std::make_shared<ParityCheckMatrix>(expand_base_graph(bundled_bg1(), plan.z));
  }
  if (label) *label = std::filesystem::path(plan.code).stem().string();
  if (plan.format == "bg" || plan.format == "basegraph-text") {
    BaseGraph bg = load_base_graph_text(plan.code);
    return std::make_shared<ParityCheckMatrix>(expand_base_graph(bg, plan.z));
  }
  return std::make_shared<ParityCheckMatrix>(load_alist(plan.code));
}

namespace {

struct TrialInputs {
  BitVector message;
  BitVector codeword;
  std::vector<double> signal;
  std::vector<double> noise;  // standard normal draws
  std::uint64_t hash = 0;
};

TrialInputs make_trial_inputs(std::uint64_t seed, int trial, const GeneratorMatrix& g) {
  TrialInputs in;
  Rng mrng = Rng::substream(seed, kMsgTag, static_cast<std::uint64_t>(trial));
  in.message = random_message(g.k(), mrng);
  in.codeword = g.encode(in.message);
  in.signal = modulate(in.codeword);
  Rng nrng = Rng::substream(seed, kNoiseTag, static_cast<std::uint64_t>(trial));
  in.noise.resize(in.signal.size());
  for (double& z : in.noise) z = nrng.gaussian();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  h = fnv1a(h, in.message.words().data(), in.message.words().size() * 8);
  h = fnv1a(h, in.noise.data(), in.noise.size() * 8);
  in.hash = h;
  return in;
}

// Per-thread decoding context: reusable buffers and per-cell model caches.
struct CellWorker {
  const DecoderSpec& spec;
  const ParityCheckMatrix& h;
  std::shared_ptr<const ParityCheckMatrix> h_shared;
  const GeneratorMatrix& g;
  double rate;

  std::unique_ptr<BpDecoder> bp;
  std::optional<QuadraticModel> qubo;
  std::optional<HigherOrderModel> ho;

  CellWorker(const DecoderSpec& s, std::shared_ptr<const ParityCheckMatrix> hs,
             const GeneratorMatrix& gen, double r)
      : spec(s), h(*hs), h_shared(std::move(hs)), g(gen), rate(r) {
    if (spec.is_bp()) {
      bp = std::make_unique<BpDecoder>(h);
    } else if (spec.is_sa()) {
      std::vector<double> zero(h.n(), 0.0);
      if (spec.sa_formulation() == Formulation::HigherOrder)
        ho.emplace(h_shared, zero, spec.alpha);
      else
        qubo.emplace(build_qubo(h, zero, spec.alpha,
                                spec.sa_formulation() == Formulation::Unary
                                    ? AuxEncoding::Unary
                                    : AuxEncoding::Binary));
    }
  }

  // Returns message-bit errors; fills expected_ber for SA decoders.
  int run_trial(std::uint64_t seed, int trial, double ebno, const TrialInputs& in,
                double* expected, bool want_expected) {
    ChannelObservation obs = observe_with_noise(in.signal, ebno, rate, in.noise);
    obs.seed = seed;
    DecodeOutcome out;
    if (spec.is_bp()) {
      out = bp->decode(obs.llr, spec.bp);
    } else if (spec.is_sa()) {
      SaConfig sa = spec.sa;
      sa.seed = Rng::derive(seed, kSolverTag, static_cast<std::uint64_t>(trial));
      std::vector<DecodeOutcome> per_anneal;
      auto* sink = want_expected ? &per_anneal : nullptr;
      if (ho) {
        ho->rebias(obs.received);
        out = decode_sa_prebuilt(*ho, sa, sink);
      } else {
        rebias_qubo(*qubo, obs.received);
        out = decode_sa_prebuilt(*qubo, h, sa, sink);
      }
      if (want_expected) {
        std::vector<DecodeOutcome> msgs;
        msgs.reserve(per_anneal.size());
        for (auto& a : per_anneal) {
          DecodeOutcome m;
          m.bits = g.extract_message(a.bits);
          m.energy = a.energy;
          msgs.push_back(std::move(m));
        }
        AnnealEnsemble ens(msgs, in.message);
        *expected = expected_ber(ens, sa.num_anneals, g.k());
      }
    } else {
      MachineConfig mc = spec.machine;
      mc.alpha = spec.alpha;
      mc.seed = Rng::derive(seed, kSolverTag, static_cast<std::uint64_t>(trial));
      out = run_machine(h_shared, obs.received, mc);
    }
    BitVector decoded_msg = g.extract_message(out.bits);
    return static_cast<int>(decoded_msg.hamming_distance(in.message));
  }
};

}  // namespace

SweepResult run_sweep(const SweepPlan& plan) {
  SweepResult result;
  result.plan = plan;
  auto h = resolve_code(plan, &result.code_label);
  GeneratorMatrix g = build_generator(*h);
  result.n = h->n();
  result.k = g.k();
  result.m = h->m();
  result.rate = static_cast<double>(g.k()) / h->n();

  const int jobs = plan.jobs > 0 ? plan.jobs
                                 : std::max(1u, std::thread::hardware_concurrency());
  const int trials = plan.messages;

  for (const DecoderSpec& spec : plan.decoders) {
    for (double ebno : plan.ebno_db) {
      SweepCell cell;
      cell.decoder = spec.kind;
      cell.formulation = spec.formulation_label();
      cell.ebno_db = ebno;
      cell.alpha = (spec.is_sa() || spec.is_machine()) ? spec.alpha : 0.0;
      cell.budget = spec.budget_label();
      cell.per_trial_errors.assign(trials, 0);

      const bool want_expected = plan.emit_expected_ber && spec.is_sa();
      std::vector<double> expected(want_expected ? trials : 0, 0.0);
      std::vector<std::uint64_t> hashes(trials, 0);
      std::vector<std::string> errors(jobs);

      std::atomic<int> next{0};
      auto work = [&](int worker_id) {
        try {
          CellWorker ctx(spec, h, g, result.rate);
          for (;;) {
            int t = next.fetch_add(1);
            if (t >= trials) break;
            TrialInputs in = make_trial_inputs(plan.seed, t, g);
            hashes[t] = in.hash;
            double eb = 0.0;
            cell.per_trial_errors[t] =
                ctx.run_trial(plan.seed, t, ebno, in, &eb, want_expected);
            if (want_expected) expected[t] = eb;
          }
        } catch (const std::exception& e) {
          errors[worker_id] = e.what();
          next.store(trials);  // abort the cell
        }
      };

      if (jobs == 1) {
        work(0);
      } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < jobs; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
      }

      for (const std::string& err : errors)
        if (!err.empty()) cell.error = err;

      if (cell.error.empty()) {
        std::uint64_t h0 = 0xcbf29ce484222325ULL;
        for (int t = 0; t < trials; ++t) {
          BerStats one;
          one.bits_total = g.k();
          one.bit_errors = cell.per_trial_errors[t];
          one.frames_total = 1;
          one.frame_errors = cell.per_trial_errors[t] > 0 ? 1 : 0;
          cell.stats.merge(one);
          h0 = fnv1a(h0, &hashes[t], sizeof hashes[t]);
        }
        cell.input_hash = h0;
        if (want_expected) {
          double acc = 0.0;
          for (double e : expected) acc += e;
          cell.mean_expected_ber = acc / trials;
        }
      }
      result.cells.push_back(std::move(cell));
    }
  }

  // Common-random-numbers check: every successful cell must have consumed
  // byte-identical trial inputs.
  std::uint64_t ref = 0;
  bool have_ref = false;
  for (const SweepCell& c : result.cells) {
    if (!c.error.empty()) continue;
    if (!have_ref) {
      ref = c.input_hash;
      have_ref = true;
    } else if (c.input_hash != ref) {
      throw std::logic_error("sweep: common-random-numbers hash mismatch across cells");
    }
  }
  return result;
}

void write_sweep_csv(const SweepResult& result, std::ostream& out, bool expected_ber_variant) {
  out << "decoder,formulation,bg,Z,ebno_db,alpha,trials,bits,bit_errors,ber,ber_stderr,fer,"
         "sweeps_or_time,seed\n";
  for (const SweepCell& c : result.cells) {
    if (expected_ber_variant && c.mean_expected_ber < 0.0) continue;
    if (!c.error.empty()) {
      out << c.decoder << ',' << c.formulation << ',' << result.code_label << ','
          << result.plan.z << ',' << format_g6(c.ebno_db) << ',' << format_g6(c.alpha)
          << ",0,0,0,nan,nan,nan," << c.budget << ',' << result.plan.seed << '\n';
      continue;
    }
    const BerStats& s = c.stats;
    double ber = expected_ber_variant ? c.mean_expected_ber : s.ber();
    out << c.decoder << ',' << c.formulation << ',' << result.code_label << ',' << result.plan.z
        << ',' << format_g6(c.ebno_db) << ',' << format_g6(c.alpha) << ',' << s.frames_total
        << ',' << s.bits_total << ',' << s.bit_errors << ',' << format_g6(ber) << ','
        << format_g6(s.stderr_ber()) << ',' << format_g6(s.fer()) << ',' << c.budget << ','
        << result.plan.seed << '\n';
  }
}

void write_manifest(const SweepResult& result, std::ostream& out) {
  const SweepPlan& p = result.plan;
  out << "code=" << p.code << '\n';
  out << "format=" << p.format << '\n';
  out << "z=" << p.z << '\n';
  out << "ebno=";
  for (std::size_t i = 0; i < p.ebno_db.size(); ++i)
    out << (i ? "," : "") << format_g6(p.ebno_db[i]);
  out << '\n';
  out << "decoders=";
  for (std::size_t i = 0; i < p.decoders.size(); ++i) out << (i ? "," : "") << p.decoders[i].kind;
  out << '\n';
  out << "messages=" << p.messages << '\n';
  out << "seed=" << p.seed << '\n';
  out << "jobs=" << p.jobs << '\n';
  out << "sweeps=" << p.sa_sweeps << '\n';
  out << "anneals=" << p.sa_anneals << '\n';
  out << "alpha=" << format_g6(p.alpha) << '\n';
  out << "expected-ber=" << (p.emit_expected_ber ? "true" : "false") << '\n';
  out << "meta_version=" << kVersion << '\n';
  auto now = std::chrono::system_clock::now().time_since_epoch();
  out << "meta_timestamp_unix="
      << std::chrono::duration_cast<std::chrono::seconds>(now).count() << '\n';
  out << "meta_code_dims=" << result.m << "x" << result.n << '\n';
  out << "meta_message_bits=" << result.k << '\n';
  out << "meta_rate=" << format_g6(result.rate) << '\n';
  out << "meta_noise_convention=sigma^2 = 1/(2 * rate * 10^(EbNo_dB/10)), rate = k/n\n";
  out << "meta_ber_convention=message (systematic) bits only\n";
  for (const SweepCell& c : result.cells)
    if (!c.error.empty())
      out << "meta_cell_error_" << c.decoder << "_" << format_g6(c.ebno_db) << '='
          << c.error << '\n';
}

void write_sweep_outputs(const SweepResult& result, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  auto open = [&](const std::string& name) {
    std::ofstream f(fs::path(out_dir) / name);
    if (!f) throw IoError("cannot write " + (fs::path(out_dir) / name).string());
    return f;
  };
  {
    auto f = open("results.csv");
    write_sweep_csv(result, f, false);
  }
  bool any_expected = false;
  for (const SweepCell& c : result.cells) any_expected |= c.mean_expected_ber >= 0.0;
  if (any_expected) {
    auto f = open("expected_ber.csv");
    write_sweep_csv(result, f, true);
  }
  {
    auto f = open("manifest.txt");
    write_manifest(result, f);
  }
}

}  // namespace ildpc
