#include "ising_ldpc/bp.hpp"

#include <algorithm>
#include <cmath>

#include "ising_ldpc/errors.hpp"

namespace ildpc {

namespace {

inline double clampd(double x, double lim) { return std::min(lim, std::max(-lim, x)); }

// Keeps atanh away from its poles; 2*atanh(1-1e-15) ~ 35, above any clamp.
constexpr double kTanhCeil = 1.0 - 1e-15;

}  // namespace

void BpConfig::validate() const {
  if (max_iterations < 1) throw ParameterError("bp: max_iterations must be >= 1");
  if (!(normalization_factor > 0.0) || normalization_factor > 1.0)
    throw ParameterError("bp: normalization_factor must be in (0, 1]");
  if (offset_beta < 0.0) throw ParameterError("bp: offset_beta must be >= 0");
  if (!(llr_clamp > 0.0)) throw ParameterError("bp: llr_clamp must be > 0");
}

double check_update(const BpConfig& cfg, std::span<const double> in_msgs) {
  if (in_msgs.empty()) throw ParameterError("check_update: needs at least one message");
  if (cfg.algorithm == BpAlgorithm::SumProduct) {
    double prod = 1.0;
    for (double m : in_msgs) prod *= std::tanh(0.5 * m);
    prod = clampd(prod, kTanhCeil);
    return clampd(2.0 * std::atanh(prod), cfg.llr_clamp);
  }
  double sign = 1.0, mag = std::abs(in_msgs[0]);
  for (double m : in_msgs) {
    if (m < 0.0) sign = -sign;
    mag = std::min(mag, std::abs(m));
  }
  if (cfg.algorithm == BpAlgorithm::NormalizedMinSum)
    mag *= cfg.normalization_factor;
  else if (cfg.algorithm == BpAlgorithm::OffsetMinSum)
    mag = std::max(mag - cfg.offset_beta, 0.0);
  return clampd(sign * mag, cfg.llr_clamp);
}

double variable_update(double intrinsic, std::span<const double> in_msgs, double llr_clamp) {
  double acc = intrinsic;
  for (double m : in_msgs) acc += m;
  return clampd(acc, llr_clamp);
}

BpDecoder::BpDecoder(const ParityCheckMatrix& h) : h_(h) {
  c2v_.resize(h.nnz());
  posterior_.resize(h.n());
  intrinsic_.resize(h.n());
  int max_deg = 0;
  for (int j = 0; j < h.m(); ++j) max_deg = std::max(max_deg, h.row_degree(j));
  scratch_v2c_.resize(max_deg);
  scratch_c2v_.resize(max_deg);
  fwd_.resize(max_deg + 1);
  bwd_.resize(max_deg + 1);
}

void BpDecoder::check_pass(const BpConfig& cfg, std::span<const double> v2c,
                           std::span<double> c2v_out) const {
  const std::size_t d = v2c.size();
  if (cfg.algorithm == BpAlgorithm::SumProduct) {
    // forward/backward tanh products avoid division by near-zero terms
    auto* fwd = const_cast<double*>(fwd_.data());
    auto* bwd = const_cast<double*>(bwd_.data());
    fwd[0] = 1.0;
    for (std::size_t e = 0; e < d; ++e) fwd[e + 1] = fwd[e] * std::tanh(0.5 * v2c[e]);
    bwd[d] = 1.0;
    for (std::size_t e = d; e > 0; --e) bwd[e - 1] = bwd[e] * std::tanh(0.5 * v2c[e - 1]);
    for (std::size_t e = 0; e < d; ++e) {
      double prod = clampd(fwd[e] * bwd[e + 1], kTanhCeil);
      c2v_out[e] = clampd(2.0 * std::atanh(prod), cfg.llr_clamp);
    }
    return;
  }
  // min-sum family: min and second-min magnitudes plus the sign product
  double min1 = std::numeric_limits<double>::infinity(), min2 = min1;
  std::size_t argmin = 0;
  int neg = 0;
  for (std::size_t e = 0; e < d; ++e) {
    double a = std::abs(v2c[e]);
    if (v2c[e] < 0.0) neg ^= 1;
    if (a < min1) {
      min2 = min1;
      min1 = a;
      argmin = e;
    } else if (a < min2) {
      min2 = a;
    }
  }
  for (std::size_t e = 0; e < d; ++e) {
    // d == 1 leaves min2 infinite: an empty extrinsic set is full certainty,
    // which the clamp turns into +llr_clamp.
    double mag = (e == argmin) ? min2 : min1;
    if (cfg.algorithm == BpAlgorithm::NormalizedMinSum)
      mag *= cfg.normalization_factor;
    else if (cfg.algorithm == BpAlgorithm::OffsetMinSum)
      mag = std::max(mag - cfg.offset_beta, 0.0);
    int s = neg ^ (v2c[e] < 0.0 ? 1 : 0);
    c2v_out[e] = clampd(s ? -mag : mag, cfg.llr_clamp);
  }
}

void BpDecoder::flooding_iteration(const BpConfig& cfg) {
  for (int j = 0; j < h_.m(); ++j) {
    auto cols = h_.row(j);
    const std::int32_t base = h_.row_ptr()[j];
    for (std::size_t e = 0; e < cols.size(); ++e)
      scratch_v2c_[e] = clampd(posterior_[cols[e]] - c2v_[base + e], cfg.llr_clamp);
    check_pass(cfg, {scratch_v2c_.data(), cols.size()}, {scratch_c2v_.data(), cols.size()});
    for (std::size_t e = 0; e < cols.size(); ++e) c2v_[base + e] = scratch_c2v_[e];
  }
  posterior_ = intrinsic_;
  for (int j = 0; j < h_.m(); ++j) {
    auto cols = h_.row(j);
    const std::int32_t base = h_.row_ptr()[j];
    for (std::size_t e = 0; e < cols.size(); ++e) posterior_[cols[e]] += c2v_[base + e];
  }
}

void BpDecoder::layered_iteration(const BpConfig& cfg) {
  const int zb = std::max(1, h_.z_block());
  for (int layer = 0; layer * zb < h_.m(); ++layer) {
    int j_end = std::min((layer + 1) * zb, h_.m());
    for (int j = layer * zb; j < j_end; ++j) {
      auto cols = h_.row(j);
      const std::int32_t base = h_.row_ptr()[j];
      for (std::size_t e = 0; e < cols.size(); ++e)
        scratch_v2c_[e] = clampd(posterior_[cols[e]] - c2v_[base + e], cfg.llr_clamp);
      check_pass(cfg, {scratch_v2c_.data(), cols.size()}, {scratch_c2v_.data(), cols.size()});
      for (std::size_t e = 0; e < cols.size(); ++e) {
        posterior_[cols[e]] += scratch_c2v_[e] - c2v_[base + e];
        c2v_[base + e] = scratch_c2v_[e];
      }
    }
  }
}

DecodeOutcome BpDecoder::decode(std::span<const double> llr, const BpConfig& cfg) {
  cfg.validate();
  if (static_cast<int>(llr.size()) != h_.n())
    throw DimensionError("bp decode: LLR length does not match n");

  for (int i = 0; i < h_.n(); ++i) intrinsic_[i] = clampd(llr[i], cfg.llr_clamp);
  posterior_ = intrinsic_;
  std::fill(c2v_.begin(), c2v_.end(), 0.0);

  DecodeOutcome out;
  out.bits = BitVector(h_.n());
  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    if (cfg.schedule == BpSchedule::Flooding)
      flooding_iteration(cfg);
    else
      layered_iteration(cfg);
    for (int i = 0; i < h_.n(); ++i) out.bits.set(i, posterior_[i] < 0.0);
    out.iterations = iter;
    if (syndrome(h_, out.bits).popcount() == 0) {
      out.success = true;
      return out;
    }
  }
  out.success = false;
  return out;
}

BpAlgorithm bp_algorithm_from_name(const std::string& name) {
  if (name == "bp" || name == "sum-product") return BpAlgorithm::SumProduct;
  if (name == "min-sum") return BpAlgorithm::MinSum;
  if (name == "nms" || name == "normalized-min-sum") return BpAlgorithm::NormalizedMinSum;
  if (name == "oms" || name == "offset-min-sum") return BpAlgorithm::OffsetMinSum;
  throw ParameterError("unknown BP algorithm: " + name);
}

}  // namespace ildpc
