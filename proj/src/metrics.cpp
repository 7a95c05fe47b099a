#include "ising_ldpc/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "ising_ldpc/errors.hpp"

namespace ildpc {

void BerStats::add(const BitVector& decoded, const BitVector& truth) {
  if (decoded.size() != truth.size()) throw DimensionError("ber: length mismatch");
  std::size_t d = decoded.hamming_distance(truth);
  bits_total += static_cast<std::int64_t>(truth.size());
  bit_errors += static_cast<std::int64_t>(d);
  frames_total += 1;
  frame_errors += d > 0 ? 1 : 0;
}

void BerStats::merge(const BerStats& o) {
  bits_total += o.bits_total;
  bit_errors += o.bit_errors;
  frames_total += o.frames_total;
  frame_errors += o.frame_errors;
}

double BerStats::stderr_ber() const {
  if (bits_total == 0) return 0.0;
  double p = ber();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(bits_total));
}

AnnealEnsemble::AnnealEnsemble(const std::vector<DecodeOutcome>& anneals,
                               const BitVector& truth) {
  for (const DecodeOutcome& a : anneals) {
    if (a.bits.size() != truth.size())
      throw DimensionError("ensemble: solution/truth length mismatch");
    auto it = std::find_if(ranked_.begin(), ranked_.end(),
                           [&](const Solution& s) { return s.bits == a.bits; });
    if (it != ranked_.end()) {
      ++it->multiplicity;
    } else {
      ranked_.push_back({a.bits, a.energy,
                         1, static_cast<int>(a.bits.hamming_distance(truth))});
    }
    ++total_;
  }
  std::sort(ranked_.begin(), ranked_.end(), [](const Solution& a, const Solution& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return a.bits.lex_less(b.bits);
  });
}

double expected_ber(const AnnealEnsemble& ensemble, int n_a, int num_bits) {
  if (n_a < 1) throw ParameterError("expected_ber: N_a must be >= 1");
  const auto& sols = ensemble.ranked();
  if (sols.empty()) throw ParameterError("expected_ber: empty ensemble");
  const double total = ensemble.total_anneals();
  const std::size_t levels = sols.size();

  // tail(k) = sum_{r >= k} P(r), with tail(levels) = 0
  std::vector<double> tail(levels + 1, 0.0);
  for (std::size_t k = levels; k > 0; --k)
    tail[k - 1] = tail[k] + sols[k - 1].multiplicity / total;

  double e = 0.0;
  for (std::size_t k = 0; k < levels; ++k) {
    double term = std::pow(tail[k], n_a) - std::pow(tail[k + 1], n_a);
    e += term * sols[k].bit_errors / static_cast<double>(num_bits);
  }
  return e;
}

double sign_test_two_sided(std::int64_t wins, std::int64_t losses) {
  const std::int64_t n = wins + losses;
  if (n == 0) return 1.0;
  const std::int64_t k = std::min(wins, losses);
  // 2 * P(Bin(n, 1/2) <= k), summed in log space for large n
  double cdf = 0.0;
  for (std::int64_t i = 0; i <= k; ++i) {
    double log_term = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) -
                      n * std::log(2.0);
    cdf += std::exp(log_term);
  }
  return std::min(1.0, 2.0 * cdf);
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace ildpc
