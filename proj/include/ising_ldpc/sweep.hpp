#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ising_ldpc/bp.hpp"
#include "ising_ldpc/generator.hpp"
#include "ising_ldpc/machine.hpp"
#include "ising_ldpc/metrics.hpp"
#include "ising_ldpc/parity_check.hpp"
#include "ising_ldpc/sa.hpp"

namespace ildpc {

// One decoder column of a sweep. Parsed from tokens like
//   "oms:iters=7"  "sa-ho:alpha=4;sweeps=10000"  "machine:total-time=2.2e-6"
struct DecoderSpec {
  std::string kind;  // bp | min-sum | nms | oms | sa-unary | sa-binary | sa-ho | machine
  BpConfig bp;
  SaConfig sa;
  MachineConfig machine;
  double alpha = 4.0;

  bool is_bp() const;
  bool is_sa() const;
  bool is_machine() const { return kind == "machine"; }
  Formulation sa_formulation() const;
  std::string formulation_label() const;
  std::string budget_label() const;  // sweeps_or_time CSV field
};

DecoderSpec parse_decoder_spec(const std::string& token);

struct SweepPlan {
  std::string code = "bundled-bg1";          // or a file path
  std::string format = "alist";              // when code is a path: alist | bg
  int z = 4;
  std::vector<double> ebno_db;
  std::vector<DecoderSpec> decoders;
  int messages = 1000;
  std::uint64_t seed = 1;
  int jobs = 0;                              // 0 = hardware concurrency
  bool emit_expected_ber = true;

  // Defaults applied to decoder tokens that do not override them.
  int sa_sweeps = 10000;
  int sa_anneals = 10;
  double alpha = 4.0;
};

SweepPlan parse_plan(std::istream& in);
SweepPlan load_plan(const std::string& path);

struct SweepCell {
  std::string decoder;
  std::string formulation;
  double ebno_db = 0.0;
  double alpha = 0.0;
  std::string budget;
  BerStats stats;
  double mean_expected_ber = -1.0;  // < 0 when not applicable
  std::vector<int> per_trial_errors;
  std::uint64_t input_hash = 0;
  std::string error;  // nonempty: the cell aborted
};

struct SweepResult {
  SweepPlan plan;
  std::string code_label;
  int n = 0, k = 0, m = 0;
  double rate = 0.0;
  std::vector<SweepCell> cells;
};

// Runs every (decoder, Eb/No) cell over `messages` trials with common random
// numbers: trial t always sees the same message and the same standard-normal
// noise draws, across decoders and Eb/No points. Fully deterministic given
// the plan, including under any jobs count.
SweepResult run_sweep(const SweepPlan& plan);

// Results CSV, the expected-BER companion (SA cells only), and the manifest.
void write_sweep_csv(const SweepResult& result, std::ostream& out, bool expected_ber_variant);
void write_manifest(const SweepResult& result, std::ostream& out);

// Writes results.csv, expected_ber.csv (when applicable) and manifest.txt
// into out_dir.
void write_sweep_outputs(const SweepResult& result, const std::string& out_dir);

std::shared_ptr<const ParityCheckMatrix> resolve_code(const SweepPlan& plan,
                                                      std::string* label = nullptr);

}  // namespace ildpc
