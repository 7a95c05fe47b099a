#include "ising_ldpc/sa.hpp"

#include <algorithm>
#include <cmath>

#include "ising_ldpc/errors.hpp"

namespace ildpc {

namespace {
// Above this exponent the acceptance probability is below any uniform draw's
// resolution; the draw is still consumed so the stream stays aligned.
constexpr double kExpCutoff = 45.0;
}  // namespace

void SaConfig::validate() const {
  if (sweeps < 1) throw ParameterError("sa: sweeps must be >= 1");
  if (num_anneals < 1) throw ParameterError("sa: num_anneals must be >= 1");
  if (!(beta_start > 0.0) || beta_start > beta_end)
    throw ParameterError("sa: need 0 < beta_start <= beta_end");
}

Formulation formulation_from_name(const std::string& name) {
  if (name == "unary") return Formulation::Unary;
  if (name == "binary") return Formulation::Binary;
  if (name == "higher-order" || name == "ho") return Formulation::HigherOrder;
  throw ParameterError("unknown formulation: " + name);
}

const char* formulation_name(Formulation f) {
  switch (f) {
    case Formulation::Unary: return "unary";
    case Formulation::Binary: return "binary";
    default: return "higher-order";
  }
}

SaState::SaState(const QuadraticModel& m, std::span<const std::int8_t> spins)
    : qm_(&m), spins_(spins.begin(), spins.end()) {
  if (num_vars() != m.num_vars()) throw DimensionError("sa state: spin count != num_vars");
  init_caches();
}

SaState::SaState(const HigherOrderModel& m, std::span<const std::int8_t> spins)
    : hm_(&m), spins_(spins.begin(), spins.end()) {
  if (num_vars() != m.n()) throw DimensionError("sa state: spin count != n");
  init_caches();
}

SaState SaState::random(const QuadraticModel& m, Rng& rng) {
  std::vector<std::int8_t> s(m.num_vars());
  for (auto& v : s) v = rng.coin() ? 1 : -1;
  return SaState(m, s);
}

SaState SaState::random(const HigherOrderModel& m, Rng& rng) {
  std::vector<std::int8_t> s(m.n());
  for (auto& v : s) v = rng.coin() ? 1 : -1;
  return SaState(m, s);
}

void SaState::init_caches() {
  spin_ptr_ = spins_.data();
  if (qm_) {
    field_.assign(num_vars(), 0.0);
    for (int i = 0; i < num_vars(); ++i) field_[i] = qm_->linear()[i];
    for (const auto& p : qm_->pairs()) {
      if (spins_[p.j] < 0) field_[p.i] += p.coeff;
      if (spins_[p.i] < 0) field_[p.j] += p.coeff;
    }
    field_ptr_ = field_.data();
    q_aptr_ = qm_->adj_ptr().data();
    q_aidx_ = qm_->adj_indices().data();
    q_acoef_ = qm_->adj_coeffs().data();
  } else {
    parities_.assign(hm_->num_checks(), 1);
    for (int j = 0; j < hm_->num_checks(); ++j) {
      int par = 1;
      for (std::int32_t i : hm_->check(j)) par *= spins_[i];
      parities_[j] = static_cast<std::int8_t>(par);
    }
    par_ptr_ = parities_.data();
    ho_cptr_ = hm_->h().col_ptr().data();
    ho_cidx_ = hm_->h().col_rows().data();
    ho_rptr_ = hm_->h().row_ptr().data();
    ho_ridx_ = hm_->h().row_cols().data();
    ho_bias_ = hm_->bias().data();
    ho_alpha_ = hm_->alpha();
    psum_.assign(hm_->n(), 0);
    for (int i = 0; i < hm_->n(); ++i) {
      std::int32_t acc = 0;
      for (std::int32_t j : hm_->checks_of(i)) acc += parities_[j];
      psum_[i] = acc;
    }
    psum_ptr_ = psum_.data();
  }
  energy_ = recompute_energy();
}

double SaState::recompute_energy() const {
  if (qm_) {
    std::vector<std::uint8_t> bits(num_vars());
    for (int i = 0; i < num_vars(); ++i) bits[i] = spin_to_bit(spins_[i]) ? 1 : 0;
    return qm_->energy(bits);
  }
  return hm_->energy(spins_);
}

namespace {

template <class Model>
std::vector<DecodeOutcome> anneal_impl(const Model& m, const SaConfig& cfg) {
  cfg.validate();
  std::vector<DecodeOutcome> results;
  results.reserve(cfg.num_anneals);

  const int nv = [&] {
    if constexpr (std::is_same_v<Model, QuadraticModel>)
      return m.num_vars();
    else
      return m.n();
  }();

  std::vector<std::int32_t> order(nv);
  for (int a = 0; a < cfg.num_anneals; ++a) {
    Rng rng = Rng::substream(cfg.seed, 0x5a11, static_cast<std::uint64_t>(a));
    SaState state = SaState::random(m, rng);

    double best_e = state.energy();
    std::vector<std::int8_t> best_spins(state.spins().begin(), state.spins().end());

    double beta = cfg.beta_start;
    const double ratio =
        cfg.sweeps > 1 ? std::pow(cfg.beta_end / cfg.beta_start, 1.0 / (cfg.sweeps - 1)) : 1.0;
    for (int s = 0; s < cfg.sweeps; ++s) {
      for (int i = 0; i < nv; ++i) order[i] = i;
      rng.shuffle(order.data(), order.size());
      for (int t = 0; t < nv; ++t) {
        const int i = order[t];
        const double d = state.flip_delta(i);
        if (d <= 0.0) {
          state.apply_flip(i, d);
          if (state.energy() < best_e) {
            best_e = state.energy();
            std::copy(state.spins().begin(), state.spins().end(), best_spins.begin());
          }
        } else {
          const double bd = beta * d;
          if (bd >= kExpCutoff) continue;  // below any uniform draw's resolution
          const double u = rng.uniform01();
          // exp(-x) >= 1-x and exp(-x) <= 1/(1+x) settle most draws cheaply
          if (u * (1.0 + bd) >= 1.0) continue;
          if (u < 1.0 - bd || u < std::exp(-bd)) state.apply_flip(i, d);
        }
      }
      beta *= ratio;
    }

    DecodeOutcome out;
    out.bits = BitVector(nv);
    for (int i = 0; i < nv; ++i) out.bits.set(i, spin_to_bit(best_spins[i]));
    out.iterations = cfg.sweeps;
    out.energy = best_e;
    results.push_back(std::move(out));
  }
  return results;
}

// Lowest energy wins; the first anneal achieving it is kept, which is
// deterministic because anneals are merged in index order.
std::size_t best_index(const std::vector<DecodeOutcome>& outs) {
  std::size_t best = 0;
  for (std::size_t a = 1; a < outs.size(); ++a)
    if (outs[a].energy < outs[best].energy) best = a;
  return best;
}

BitVector project_code_bits(const BitVector& full, int n) {
  BitVector b(n);
  for (int i = 0; i < n; ++i) b.set(i, full.get(i));
  return b;
}

}  // namespace

std::vector<DecodeOutcome> anneal(const QuadraticModel& m, const SaConfig& cfg) {
  return anneal_impl(m, cfg);
}

std::vector<DecodeOutcome> anneal(const HigherOrderModel& m, const SaConfig& cfg) {
  return anneal_impl(m, cfg);
}

DecodeOutcome decode_sa_prebuilt(const QuadraticModel& m, const ParityCheckMatrix& h,
                                 const SaConfig& cfg, std::vector<DecodeOutcome>* per_anneal) {
  auto outs = anneal(m, cfg);
  for (auto& o : outs) {
    o.bits = project_code_bits(o.bits, m.num_code_bits());
    o.success = syndrome(h, o.bits).popcount() == 0;
  }
  DecodeOutcome best = outs[best_index(outs)];
  if (per_anneal) *per_anneal = std::move(outs);
  return best;
}

DecodeOutcome decode_sa_prebuilt(const HigherOrderModel& m, const SaConfig& cfg,
                                 std::vector<DecodeOutcome>* per_anneal) {
  auto outs = anneal(m, cfg);
  for (auto& o : outs) o.success = syndrome(m.h(), o.bits).popcount() == 0;
  DecodeOutcome best = outs[best_index(outs)];
  if (per_anneal) *per_anneal = std::move(outs);
  return best;
}

DecodeOutcome decode_via_sa(std::shared_ptr<const ParityCheckMatrix> h,
                            const ChannelObservation& obs, Formulation formulation, double alpha,
                            const SaConfig& cfg) {
  if (formulation == Formulation::HigherOrder) {
    HigherOrderModel m = build_higher_order(h, obs.received, alpha);
    return decode_sa_prebuilt(m, cfg);
  }
  AuxEncoding enc = formulation == Formulation::Unary ? AuxEncoding::Unary : AuxEncoding::Binary;
  QuadraticModel m = build_qubo(*h, obs.received, alpha, enc);
  return decode_sa_prebuilt(m, *h, cfg);
}

}  // namespace ildpc
