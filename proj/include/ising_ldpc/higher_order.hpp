#pragma once

#include <memory>
#include <span>
#include <vector>

#include "ising_ldpc/parity_check.hpp"

namespace ildpc {

// f(sigma) = -2 sum_i R_i sigma_i - (alpha/2) sum_j prod_{i in check j} sigma_i
// with sigma = +1 for bit 0 and -1 for bit 1. Checks are the rows of H; no
// free auxiliary variables.
class HigherOrderModel {
 public:
  HigherOrderModel(std::shared_ptr<const ParityCheckMatrix> h, std::span<const double> r,
                   double alpha);

  int n() const { return h_->n(); }
  int num_checks() const { return h_->m(); }
  double alpha() const { return alpha_; }
  const ParityCheckMatrix& h() const { return *h_; }

  // -2 R_i, the weight of sigma_i's linear term.
  const std::vector<double>& bias() const { return bias_; }
  std::span<const std::int32_t> check(int j) const { return h_->row(j); }
  std::span<const std::int32_t> checks_of(int i) const { return h_->col(i); }

  double energy(std::span<const std::int8_t> spins) const;

  void rebias(std::span<const double> r);

 private:
  std::shared_ptr<const ParityCheckMatrix> h_;
  std::vector<double> bias_;
  double alpha_;
};

HigherOrderModel build_higher_order(std::shared_ptr<const ParityCheckMatrix> h,
                                    std::span<const double> r, double alpha);

// spin +1 <-> bit 0, spin -1 <-> bit 1
inline std::int8_t bit_to_spin(bool b) { return b ? -1 : 1; }
inline bool spin_to_bit(std::int8_t s) { return s < 0; }

}  // namespace ildpc
