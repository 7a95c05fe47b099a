#include "ising_ldpc/channel.hpp"

#include <cmath>

#include "ising_ldpc/errors.hpp"

namespace ildpc {

std::vector<double> modulate(const BitVector& c) {
  std::vector<double> s(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) s[i] = c.get(i) ? -1.0 : 1.0;
  return s;
}

double noise_variance_for(double ebno_db, double rate) {
  if (!(rate > 0.0) || rate > 1.0) throw ParameterError("transmit: rate must be in (0, 1]");
  return 1.0 / (2.0 * rate * std::pow(10.0, ebno_db / 10.0));
}

ChannelObservation observe_with_noise(std::span<const double> s, double ebno_db, double rate,
                                      std::span<const double> z) {
  if (z.size() != s.size()) throw DimensionError("observe_with_noise: noise length mismatch");
  ChannelObservation obs;
  obs.ebno_db = ebno_db;
  obs.noise_variance = noise_variance_for(ebno_db, rate);
  const double sigma = std::sqrt(obs.noise_variance);
  obs.received.resize(s.size());
  obs.llr.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    obs.received[i] = s[i] + sigma * z[i];
    obs.llr[i] = 2.0 * obs.received[i] / obs.noise_variance;
  }
  return obs;
}

ChannelObservation transmit(std::span<const double> s, double ebno_db, double rate, Rng& rng) {
  std::vector<double> z(s.size());
  for (double& v : z) v = rng.gaussian();
  return observe_with_noise(s, ebno_db, rate, z);
}

std::vector<double> llr_init(const ChannelObservation& obs) {
  std::vector<double> llr(obs.received.size());
  for (std::size_t i = 0; i < llr.size(); ++i) llr[i] = 2.0 * obs.received[i] / obs.noise_variance;
  return llr;
}

}  // namespace ildpc
