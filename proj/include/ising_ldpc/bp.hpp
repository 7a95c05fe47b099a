#pragma once

#include <span>
#include <string>
#include <vector>

#include "ising_ldpc/outcome.hpp"
#include "ising_ldpc/parity_check.hpp"

namespace ildpc {

enum class BpAlgorithm { SumProduct, MinSum, NormalizedMinSum, OffsetMinSum };
enum class BpSchedule { Flooding, Layered };

struct BpConfig {
  BpAlgorithm algorithm = BpAlgorithm::SumProduct;
  BpSchedule schedule = BpSchedule::Flooding;
  int max_iterations = 20;
  double normalization_factor = 0.75;  // normalized min-sum
  double offset_beta = 0.5;            // offset min-sum
  double llr_clamp = 25.0;

  void validate() const;
};

// Check-node rule applied to the messages from N(c)\v. Sum-product uses the
// tanh product; min-sum variants use min magnitude with the sign product.
double check_update(const BpConfig& cfg, std::span<const double> in_msgs);

// intrinsic + sum of incoming messages, clamped to +-llr_clamp.
double variable_update(double intrinsic, std::span<const double> in_msgs, double llr_clamp);

// Message-passing decoder. One instance per worker; owns its edge buffers,
// shares the matrix read-only.
class BpDecoder {
 public:
  explicit BpDecoder(const ParityCheckMatrix& h);

  // Hard decision: bit = 1 iff posterior LLR < 0. Stops early on a zero
  // syndrome; success is exactly that condition.
  DecodeOutcome decode(std::span<const double> llr, const BpConfig& cfg);

 private:
  void flooding_iteration(const BpConfig& cfg);
  void layered_iteration(const BpConfig& cfg);
  void check_pass(const BpConfig& cfg, std::span<const double> v2c,
                  std::span<double> c2v_out) const;

  const ParityCheckMatrix& h_;
  std::vector<double> c2v_;        // per edge, row-major over rows_adj
  std::vector<double> posterior_;  // per variable
  std::vector<double> intrinsic_;
  std::vector<double> scratch_v2c_, scratch_c2v_, fwd_, bwd_;
};

BpAlgorithm bp_algorithm_from_name(const std::string& name);

}  // namespace ildpc
