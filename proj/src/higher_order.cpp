#include "ising_ldpc/higher_order.hpp"

#include "ising_ldpc/errors.hpp"

namespace ildpc {

HigherOrderModel::HigherOrderModel(std::shared_ptr<const ParityCheckMatrix> h,
                                   std::span<const double> r, double alpha)
    : h_(std::move(h)), alpha_(alpha) {
  if (!(alpha_ > 0.0)) throw ParameterError("higher-order model: alpha must be > 0");
  if (static_cast<int>(r.size()) != h_->n())
    throw DimensionError("higher-order model: |r| != n");
  for (int j = 0; j < h_->m(); ++j)
    if (h_->row_degree(j) == 0) throw IntegrityError("higher-order model: empty check");
  bias_.resize(h_->n());
  rebias(r);
}

void HigherOrderModel::rebias(std::span<const double> r) {
  if (static_cast<int>(r.size()) != h_->n())
    throw DimensionError("higher-order model: |r| != n");
  for (int i = 0; i < h_->n(); ++i) bias_[i] = -2.0 * r[i];
}

double HigherOrderModel::energy(std::span<const std::int8_t> spins) const {
  if (static_cast<int>(spins.size()) != n())
    throw DimensionError("higher-order energy: assignment length != n");
  double e = 0.0;
  for (int i = 0; i < n(); ++i) e += bias_[i] * spins[i];
  for (int j = 0; j < num_checks(); ++j) {
    int parity = 1;
    for (std::int32_t i : h_->row(j)) parity *= spins[i];
    e -= 0.5 * alpha_ * parity;
  }
  return e;
}

HigherOrderModel build_higher_order(std::shared_ptr<const ParityCheckMatrix> h,
                                    std::span<const double> r, double alpha) {
  return HigherOrderModel(std::move(h), r, alpha);
}

}  // namespace ildpc
