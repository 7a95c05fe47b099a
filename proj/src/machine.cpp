#include "ising_ldpc/machine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "ising_ldpc/errors.hpp"
#include "ising_ldpc/higher_order.hpp"

namespace ildpc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void MachineConfig::validate() const {
  if (!(total_time > 0.0)) throw ConfigError("machine: total_time must be > 0");
  if (!(dt > 0.0)) throw ConfigError("machine: dt must be > 0");
  if (dt >= time_constant)
    throw ConfigError("machine: dt >= time_constant makes the integration unstable");
  if (!(time_constant > 0.0)) throw ConfigError("machine: time_constant must be > 0");
  if (!(rail > 0.0)) throw ConfigError("machine: rail must be > 0");
  if (!(alpha > 0.0)) throw ConfigError("machine: alpha must be > 0");
  if (spinfix.initial_rate < 0.0) throw ConfigError("machine: spin-fix rate must be >= 0");
  if (adaptive && !(adaptive_tol > 0.0)) throw ConfigError("machine: adaptive_tol must be > 0");
}

std::vector<double> derivative(const MachineState& state, const ParityCheckMatrix& h,
                               std::span<const double> r, const MachineConfig& cfg) {
  const int n = h.n();
  if (static_cast<int>(state.voltages.size()) != n || static_cast<int>(r.size()) != n)
    throw DimensionError("machine derivative: state/received length != n");
  std::vector<std::int8_t> q(n);
  for (int i = 0; i < n; ++i) q[i] = state.voltages[i] >= 0.0 ? 1 : -1;
  std::vector<std::int8_t> par(h.m());
  for (int j = 0; j < h.m(); ++j) {
    int p = 1;
    for (std::int32_t i : h.row(j)) p *= q[i];
    par[j] = static_cast<std::int8_t>(p);
  }
  double g = 1.0;
  if (cfg.gain.enabled)
    g = cfg.gain.g_min +
        (1.0 - cfg.gain.g_min) * (1.0 - std::exp(-state.time / cfg.gain.time_constant));
  const double inv_tau = 1.0 / cfg.time_constant;
  std::vector<double> f(n);
  for (int i = 0; i < n; ++i) {
    double coupling = 0.0;
    for (std::int32_t j : h.col(i)) coupling += par[j];
    coupling *= q[i];  // sigma_{j\i} = P_j * sigma_i
    f[i] = inv_tau * (4.0 * r[i] / cfg.alpha + g * coupling);
  }
  return f;
}

MachineSim::MachineSim(std::shared_ptr<const ParityCheckMatrix> h, std::vector<double> r,
                       const MachineConfig& cfg)
    : h_(std::move(h)),
      r_(std::move(r)),
      cfg_(cfg),
      rng_(Rng::substream(cfg.seed, 0xb7171, 0)) {
  cfg_.validate();
  const int n = h_->n();
  if (static_cast<int>(r_.size()) != n) throw DimensionError("machine: |r| != n");
  if (cfg_.spinfix.clip_duration <= 0.0) cfg_.spinfix.clip_duration = 2.0 * cfg_.dt;

  state_.voltages.resize(n);
  switch (cfg_.init) {
    case MachineConfig::Init::Received:
      for (int i = 0; i < n; ++i)
        state_.voltages[i] = std::clamp(r_[i], -cfg_.rail, cfg_.rail);
      break;
    case MachineConfig::Init::RandomUniform:
      for (int i = 0; i < n; ++i)
        state_.voltages[i] = cfg_.rail * (2.0 * rng_.uniform01() - 1.0);
      break;
    case MachineConfig::Init::Custom:
      if (static_cast<int>(cfg_.init_voltages.size()) != n)
        throw ConfigError("machine: init_voltages length != n");
      state_.voltages = cfg_.init_voltages;
      break;
  }
  state_.time = 0.0;
  state_.quantized.resize(n);
  for (int i = 0; i < n; ++i) state_.quantized[i] = state_.voltages[i] >= 0.0 ? 1 : -1;
  state_.parities.resize(h_->m());
  for (int j = 0; j < h_->m(); ++j) {
    int p = 1;
    for (std::int32_t i : h_->row(j)) p *= state_.quantized[i];
    state_.parities[j] = static_cast<std::int8_t>(p);
  }
  energy_ = recompute_quantized_energy();

  k1_.resize(n);
  k2_.resize(n);
  k3_.resize(n);
  k4_.resize(n);
  k5_.resize(n);
  k6_.resize(n);
  vtmp_.resize(n);
  clip_until_.assign(n, -1.0);
  clip_value_.assign(n, 0.0);
  dt_current_ = cfg_.dt;
  schedule_next_spinfix();
}

double MachineSim::recompute_quantized_energy() const {
  double e = 0.0;
  for (int i = 0; i < h_->n(); ++i) e += -2.0 * r_[i] * state_.quantized[i];
  for (int j = 0; j < h_->m(); ++j) {
    int p = 1;
    for (std::int32_t i : h_->row(j)) p *= state_.quantized[i];
    e -= 0.5 * cfg_.alpha * p;
  }
  return e;
}

void MachineSim::derivative_into(const std::vector<double>& v, double t,
                                 std::vector<double>& out) const {
  const int n = h_->n();
  // quantize the stage voltages, then evaluate every checksum once
  static thread_local std::vector<std::int8_t> q, par;
  q.resize(n);
  par.resize(h_->m());
  for (int i = 0; i < n; ++i) q[i] = v[i] >= 0.0 ? 1 : -1;
  for (int j = 0; j < h_->m(); ++j) {
    int p = 1;
    for (std::int32_t i : h_->row(j)) p *= q[i];
    par[j] = static_cast<std::int8_t>(p);
  }
  double g = 1.0;
  if (cfg_.gain.enabled)
    g = cfg_.gain.g_min +
        (1.0 - cfg_.gain.g_min) * (1.0 - std::exp(-t / cfg_.gain.time_constant));
  const double inv_tau = 1.0 / cfg_.time_constant;
  for (int i = 0; i < n; ++i) {
    if (t < clip_until_[i]) {
      out[i] = 0.0;  // node pinned to a rail by a spin-fix clip
      continue;
    }
    double coupling = 0.0;
    for (std::int32_t j : h_->col(i)) coupling += par[j];
    out[i] = inv_tau * (4.0 * r_[i] / cfg_.alpha + g * coupling * q[i]);
  }
}

void MachineSim::schedule_next_spinfix() {
  const double rate0 = cfg_.spinfix.initial_rate;
  const double tau_d = cfg_.spinfix.decay_time_constant;
  if (rate0 <= 0.0) {
    next_event_time_ = kInf;
    return;
  }
  // Inversion of the cumulative intensity rate0 * tau_d * (1 - exp(-t/tau_d)).
  const double total_mass = rate0 * tau_d;
  cum_rate_used_ += -std::log(rng_.uniform01_open());
  if (cum_rate_used_ >= total_mass) {
    next_event_time_ = kInf;
    return;
  }
  next_event_time_ = -tau_d * std::log(1.0 - cum_rate_used_ / total_mass);
}

void MachineSim::apply_due_spinfix_events() {
  while (next_event_time_ <= state_.time) {
    const int node = static_cast<int>(rng_.bounded(static_cast<std::uint32_t>(h_->n())));
    const double target = rng_.coin() ? cfg_.rail : -cfg_.rail;
    state_.voltages[node] = target;
    clip_value_[node] = target;
    clip_until_[node] = next_event_time_ + cfg_.spinfix.clip_duration;
    ++stats_.spin_fix_events;
    clip_active_this_step_ = true;
    schedule_next_spinfix();
  }
}

void MachineSim::commit_quantization() {
  const double e_before = energy_;
  int flips = 0;
  for (int i = 0; i < h_->n(); ++i) {
    std::int8_t q_new = state_.voltages[i] >= 0.0 ? 1 : -1;
    if (q_new == state_.quantized[i]) continue;
    double dpar = 0.0;
    for (std::int32_t j : h_->col(i)) dpar += state_.parities[j];
    energy_ += 4.0 * r_[i] * state_.quantized[i] + cfg_.alpha * dpar;
    state_.quantized[i] = q_new;
    for (std::int32_t j : h_->col(i)) state_.parities[j] = -state_.parities[j];
    ++flips;
  }
  if (flips > 0 && !clip_active_this_step_) {
    ++stats_.quantization_events;
    if (energy_ <= e_before + 1e-9) ++stats_.descent_events;
  }
}

double MachineSim::step() {
  clip_active_this_step_ = false;
  for (int i = 0; i < h_->n(); ++i)
    if (clip_until_[i] > state_.time) {
      clip_active_this_step_ = true;
      break;
    }

  double dt = cfg_.adaptive ? dt_current_ : cfg_.dt;
  dt = std::min(dt, cfg_.total_time - state_.time);
  if (next_event_time_ > state_.time && next_event_time_ < state_.time + dt)
    dt = next_event_time_ - state_.time;  // land on the event

  const int n = h_->n();
  const double t = state_.time;
  auto& v = state_.voltages;

  if (!cfg_.adaptive) {
    derivative_into(v, t, k1_);
    for (int i = 0; i < n; ++i) vtmp_[i] = v[i] + 0.5 * dt * k1_[i];
    derivative_into(vtmp_, t + 0.5 * dt, k2_);
    for (int i = 0; i < n; ++i) vtmp_[i] = v[i] + 0.5 * dt * k2_[i];
    derivative_into(vtmp_, t + 0.5 * dt, k3_);
    for (int i = 0; i < n; ++i) vtmp_[i] = v[i] + dt * k3_[i];
    derivative_into(vtmp_, t + dt, k4_);
    for (int i = 0; i < n; ++i)
      v[i] += dt / 6.0 * (k1_[i] + 2.0 * (k2_[i] + k3_[i]) + k4_[i]);
  } else {
    // Fehlberg 4(5); steps whose error estimate exceeds the tolerance are
    // retried with a smaller dt, capped at the configured maximum.
    for (;;) {
      derivative_into(v, t, k1_);
      for (int i = 0; i < n; ++i) vtmp_[i] = v[i] + dt * (k1_[i] / 4.0);
      derivative_into(vtmp_, t + dt / 4.0, k2_);
      for (int i = 0; i < n; ++i)
        vtmp_[i] = v[i] + dt * (3.0 / 32.0 * k1_[i] + 9.0 / 32.0 * k2_[i]);
      derivative_into(vtmp_, t + 3.0 * dt / 8.0, k3_);
      for (int i = 0; i < n; ++i)
        vtmp_[i] = v[i] + dt * (1932.0 / 2197.0 * k1_[i] - 7200.0 / 2197.0 * k2_[i] +
                                7296.0 / 2197.0 * k3_[i]);
      derivative_into(vtmp_, t + 12.0 * dt / 13.0, k4_);
      for (int i = 0; i < n; ++i)
        vtmp_[i] = v[i] + dt * (439.0 / 216.0 * k1_[i] - 8.0 * k2_[i] +
                                3680.0 / 513.0 * k3_[i] - 845.0 / 4104.0 * k4_[i]);
      derivative_into(vtmp_, t + dt, k5_);
      for (int i = 0; i < n; ++i)
        vtmp_[i] = v[i] + dt * (-8.0 / 27.0 * k1_[i] + 2.0 * k2_[i] - 3544.0 / 2565.0 * k3_[i] +
                                1859.0 / 4104.0 * k4_[i] - 11.0 / 40.0 * k5_[i]);
      derivative_into(vtmp_, t + dt / 2.0, k6_);
      double err = 0.0;
      for (int i = 0; i < n; ++i) {
        double e = dt * (k1_[i] / 360.0 - 128.0 / 4275.0 * k3_[i] - 2197.0 / 75240.0 * k4_[i] +
                         k5_[i] / 50.0 + 2.0 / 55.0 * k6_[i]);
        err = std::max(err, std::abs(e));
      }
      if (err <= cfg_.adaptive_tol || dt <= cfg_.dt * 1e-3) {
        for (int i = 0; i < n; ++i)
          v[i] += dt * (25.0 / 216.0 * k1_[i] + 1408.0 / 2565.0 * k3_[i] +
                        2197.0 / 4104.0 * k4_[i] - k5_[i] / 5.0);
        double grow = err > 0.0 ? 0.9 * std::pow(cfg_.adaptive_tol / err, 0.2) : 2.0;
        dt_current_ = std::min(cfg_.dt, dt * std::clamp(grow, 0.2, 2.0));
        break;
      }
      dt *= std::max(0.2, 0.9 * std::pow(cfg_.adaptive_tol / err, 0.2));
    }
  }

  for (int i = 0; i < n; ++i) v[i] = std::clamp(v[i], -cfg_.rail, cfg_.rail);
  // hold clipped nodes at their rail for the clip window
  for (int i = 0; i < n; ++i)
    if (clip_until_[i] > t) v[i] = clip_value_[i];

  state_.time = t + dt;
  apply_due_spinfix_events();
  commit_quantization();
  ++steps_;
  return dt;
}

DecodeOutcome MachineSim::run(std::ostream* trajectory, int trajectory_nodes,
                              int trajectory_stride) {
  const int n = h_->n();
  const int tn = std::min(trajectory_nodes, n);
  auto emit = [&]() {
    *trajectory << state_.time;
    for (int i = 0; i < tn; ++i) *trajectory << ',' << state_.voltages[i];
    int sat = 0;
    for (std::int8_t p : state_.parities) sat += p > 0;
    *trajectory << ',' << sat << '\n';
  };
  if (trajectory) {
    *trajectory << "time";
    for (int i = 0; i < tn; ++i) *trajectory << ",v" << i;
    *trajectory << ",parities_satisfied\n";
    emit();
  }

  const double t_end = cfg_.total_time * (1.0 - 1e-12);
  while (state_.time < t_end) {
    step();
    if (trajectory && (steps_ % trajectory_stride == 0 || state_.time >= t_end)) emit();
  }

  DecodeOutcome out;
  out.bits = BitVector(n);
  for (int i = 0; i < n; ++i) out.bits.set(i, spin_to_bit(state_.quantized[i]));
  out.success = syndrome(*h_, out.bits).popcount() == 0;
  out.iterations = static_cast<int>(steps_);
  out.energy = energy_;
  return out;
}

bool MachineSim::terminal_flow_consistent() const {
  MachineState probe = state_;
  std::vector<double> f = derivative(probe, *h_, r_, cfg_);
  for (int i = 0; i < h_->n(); ++i) {
    if (std::abs(state_.voltages[i]) < cfg_.rail * (1.0 - 1e-9)) return false;
    double sign = state_.voltages[i] >= 0.0 ? 1.0 : -1.0;
    if (f[i] * sign < -1e-12) return false;
  }
  return true;
}

DecodeOutcome run_machine(std::shared_ptr<const ParityCheckMatrix> h, std::span<const double> r,
                          const MachineConfig& cfg) {
  MachineSim sim(std::move(h), std::vector<double>(r.begin(), r.end()), cfg);
  return sim.run();
}

}  // namespace ildpc
