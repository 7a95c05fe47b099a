#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ising_ldpc/outcome.hpp"
#include "ising_ldpc/parity_check.hpp"
#include "ising_ldpc/rng.hpp"

namespace ildpc {

// Poisson spin-fix perturbations: rate lambda(t) = initial_rate *
// exp(-t / decay_time_constant); each event clips one uniformly random node
// to a uniformly random rail for clip_duration seconds.
struct SpinFixSettings {
  double initial_rate = 4.0e10;         // events/second at t = 0
  double decay_time_constant = 3.0e-7;  // seconds
  double clip_duration = 0.0;           // 0 -> 2 * dt
};

// Optional global coupling-gain ramp g(t) = g_min + (1-g_min)(1-exp(-t/tau)).
struct GainSchedule {
  bool enabled = false;
  double g_min = 0.1;
  double time_constant = 5.0e-7;
};

struct MachineConfig {
  double time_constant = 5.0e-9;  // C/J in seconds; normalizes the dynamics
  double total_time = 2.2e-6;
  double dt = 1.0e-10;
  bool adaptive = false;       // embedded 4/5 pair instead of fixed RK4
  double adaptive_tol = 1e-4;
  double alpha = 1.5;          // bias scaling, matches the energy's alpha
  double rail = 1.0;
  SpinFixSettings spinfix;
  GainSchedule gain;
  std::uint64_t seed = 0;

  enum class Init { Received, RandomUniform, Custom };
  Init init = Init::Received;
  std::vector<double> init_voltages;  // for Init::Custom

  void validate() const;
};

struct MachineState {
  std::vector<double> voltages;          // in [-rail, +rail]
  double time = 0.0;
  std::vector<std::int8_t> quantized;    // +1 iff voltage >= 0
  std::vector<std::int8_t> parities;     // product of quantized over each check
};

// dv_i/dt = (1/tau) * [ 4 R_i / alpha + g(t) * sum_{j: H_ji = 1} P_j * q_i ],
// the checksum coupling with node i's own spin backed out.
std::vector<double> derivative(const MachineState& state, const ParityCheckMatrix& h,
                               std::span<const double> r, const MachineConfig& cfg);

struct DescentStats {
  std::int64_t quantization_events = 0;  // steps that changed some sign (clip-free)
  std::int64_t descent_events = 0;       // of those, energy non-increasing
  std::int64_t spin_fix_events = 0;
};

class MachineSim {
 public:
  MachineSim(std::shared_ptr<const ParityCheckMatrix> h, std::vector<double> r,
             const MachineConfig& cfg);

  const MachineState& state() const { return state_; }
  const DescentStats& descent_stats() const { return stats_; }
  std::int64_t steps_taken() const { return steps_; }

  // Advance by one committed step (possibly shortened to land on an event or
  // on total_time). Returns the step size actually taken.
  double step();

  // Integrate to total_time. Optional trajectory sink gets CSV rows
  // "time,v0..v{k-1},parities_satisfied" every `stride` committed steps.
  DecodeOutcome run(std::ostream* trajectory = nullptr, int trajectory_nodes = 8,
                    int trajectory_stride = 10);

  // Higher-order energy of the current quantized spins (incrementally
  // maintained; recompute available for verification).
  double quantized_energy() const { return energy_; }
  double recompute_quantized_energy() const;

  // True when every node sits on a rail with its net inflow agreeing in sign.
  bool terminal_flow_consistent() const;

 private:
  void derivative_into(const std::vector<double>& v, double t, std::vector<double>& out) const;
  void commit_quantization();
  void schedule_next_spinfix();
  void apply_due_spinfix_events();

  std::shared_ptr<const ParityCheckMatrix> h_;
  std::vector<double> r_;
  MachineConfig cfg_;
  MachineState state_;
  DescentStats stats_;
  Rng rng_;

  std::vector<double> k1_, k2_, k3_, k4_, k5_, k6_, vtmp_;
  std::vector<double> clip_until_, clip_value_;
  double next_event_time_;
  double cum_rate_used_ = 0.0;  // consumed mass of the event-time integral
  double energy_ = 0.0;
  std::int64_t steps_ = 0;
  bool clip_active_this_step_ = false;
  double dt_current_;
};

DecodeOutcome run_machine(std::shared_ptr<const ParityCheckMatrix> h, std::span<const double> r,
                          const MachineConfig& cfg);

}  // namespace ildpc
