#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "ising_ldpc/channel.hpp"
#include "ising_ldpc/higher_order.hpp"
#include "ising_ldpc/outcome.hpp"
#include "ising_ldpc/qubo.hpp"
#include "ising_ldpc/rng.hpp"

namespace ildpc {

struct SaConfig {
  int sweeps = 10000;
  int num_anneals = 10;
  double beta_start = 0.1;
  double beta_end = 5.0;
  std::uint64_t seed = 0;

  void validate() const;
};

enum class Formulation { Unary, Binary, HigherOrder };

Formulation formulation_from_name(const std::string& name);
const char* formulation_name(Formulation f);

// Mutable annealer state over one model. Energy is maintained incrementally:
// the quadratic path caches per-variable flip fields, the higher-order path
// caches check parities, so a visit costs O(1) resp. O(column degree).
class SaState {
 public:
  SaState(const QuadraticModel& m, std::span<const std::int8_t> spins);
  SaState(const HigherOrderModel& m, std::span<const std::int8_t> spins);

  // Internal raw views alias the owned buffers, so states do not relocate.
  SaState(const SaState&) = delete;
  SaState& operator=(const SaState&) = delete;

  static SaState random(const QuadraticModel& m, Rng& rng);
  static SaState random(const HigherOrderModel& m, Rng& rng);

  int num_vars() const { return static_cast<int>(spins_.size()); }
  std::span<const std::int8_t> spins() const { return spins_; }
  std::span<const std::int8_t> check_parities() const { return parities_; }
  double energy() const { return energy_; }

  // Exact analytic energy change of flipping variable i.
  double flip_delta(int i) const {
    if (field_ptr_) {
      // bit flips by (1 - 2x_i) = sigma_i; the field is l_i + sum_j q_ij x_j
      return spin_ptr_[i] * field_ptr_[i];
    }
    // psum_ caches the parity sum over the checks containing i
    return -2.0 * ho_bias_[i] * spin_ptr_[i] + ho_alpha_ * psum_ptr_[i];
  }

  void apply_flip(int i) { apply_flip(i, flip_delta(i)); }

  void apply_flip(int i, double delta) {
    energy_ += delta;
    if (field_ptr_) {
      const double dir = spin_ptr_[i];  // x gains sigma_old
      for (std::int32_t k = q_aptr_[i]; k < q_aptr_[i + 1]; ++k)
        field_ptr_[q_aidx_[k]] += dir * q_acoef_[k];
      spin_ptr_[i] = static_cast<std::int8_t>(-spin_ptr_[i]);
    } else {
      spin_ptr_[i] = static_cast<std::int8_t>(-spin_ptr_[i]);
      for (std::int32_t k = ho_cptr_[i]; k < ho_cptr_[i + 1]; ++k) {
        const std::int32_t j = ho_cidx_[k];
        const std::int32_t twice_old = 2 * par_ptr_[j];
        par_ptr_[j] = static_cast<std::int8_t>(-par_ptr_[j]);
        for (std::int32_t e = ho_rptr_[j]; e < ho_rptr_[j + 1]; ++e)
          psum_ptr_[ho_ridx_[e]] -= twice_old;
      }
    }
  }

  // Full recompute from the model; the incremental value must track this.
  double recompute_energy() const;

 private:
  void init_caches();

  const QuadraticModel* qm_ = nullptr;
  const HigherOrderModel* hm_ = nullptr;
  std::vector<std::int8_t> spins_;    // +1 <-> bit 0, -1 <-> bit 1
  std::vector<std::int8_t> parities_; // higher-order only
  std::vector<std::int32_t> psum_;    // higher-order: parity sum per variable
  std::vector<double> field_;         // quadratic only
  double energy_ = 0.0;

  // raw views hoisted out of the model objects for the visit loop
  std::int8_t* spin_ptr_ = nullptr;
  std::int8_t* par_ptr_ = nullptr;
  double* field_ptr_ = nullptr;
  const std::int32_t* ho_cptr_ = nullptr;
  const std::int32_t* ho_cidx_ = nullptr;
  const std::int32_t* ho_rptr_ = nullptr;
  const std::int32_t* ho_ridx_ = nullptr;
  std::int32_t* psum_ptr_ = nullptr;
  const double* ho_bias_ = nullptr;
  double ho_alpha_ = 0.0;
  const std::int32_t* q_aptr_ = nullptr;
  const std::int32_t* q_aidx_ = nullptr;
  const double* q_acoef_ = nullptr;
};

// Metropolis single-spin-flip annealing: num_anneals independent runs from
// random initializations, `sweeps` full passes in fresh random variable
// order per pass, beta geometric from beta_start to beta_end. Returns the
// best-energy state seen in each anneal; deterministic given cfg.seed.
std::vector<DecodeOutcome> anneal(const QuadraticModel& m, const SaConfig& cfg);
std::vector<DecodeOutcome> anneal(const HigherOrderModel& m, const SaConfig& cfg);

// Builds the chosen formulation from the observation, anneals, keeps the
// lowest-energy anneal and projects code-bit variables to bits.
DecodeOutcome decode_via_sa(std::shared_ptr<const ParityCheckMatrix> h,
                            const ChannelObservation& obs, Formulation formulation, double alpha,
                            const SaConfig& cfg);

// As decode_via_sa but over prebuilt models (the harness rebiases cached
// structures per trial). Also exposes the per-anneal projected outcomes for
// ensemble statistics.
DecodeOutcome decode_sa_prebuilt(const QuadraticModel& m, const ParityCheckMatrix& h,
                                 const SaConfig& cfg,
                                 std::vector<DecodeOutcome>* per_anneal = nullptr);
DecodeOutcome decode_sa_prebuilt(const HigherOrderModel& m, const SaConfig& cfg,
                                 std::vector<DecodeOutcome>* per_anneal = nullptr);

}  // namespace ildpc
