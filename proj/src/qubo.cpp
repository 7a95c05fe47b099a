#include "ising_ldpc/qubo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>
#include <unordered_map>

#include "ising_ldpc/errors.hpp"

namespace ildpc {

int aux_var_count(int check_degree, AuxEncoding enc) {
  if (check_degree < 1) throw ParameterError("aux_var_count: empty check");
  if (enc == AuxEncoding::Unary) return check_degree / 2 + 1;
  // Binary: floor(log2(d/2)) + 1 bits; degenerate checks (d <= 2) keep a
  // single auxiliary that the penalty forces toward zero.
  if (check_degree <= 2) return 1;
  return std::bit_width(static_cast<unsigned>(check_degree / 2));
}

QuadraticModel build_qubo(const ParityCheckMatrix& h, std::span<const double> r, double alpha,
                          AuxEncoding encoding) {
  if (!(alpha > 0.0)) throw ParameterError("build_qubo: alpha must be > 0");
  if (static_cast<int>(r.size()) != h.n()) throw DimensionError("build_qubo: |r| != n");

  QuadraticModel q;
  q.num_code_bits_ = h.n();
  q.alpha_ = alpha;

  int total_aux = 0;
  for (int j = 0; j < h.m(); ++j) total_aux += aux_var_count(h.row_degree(j), encoding);
  q.num_vars_ = h.n() + total_aux;
  q.linear_base_.assign(q.num_vars_, 0.0);
  q.var_map_.resize(q.num_vars_);
  for (int i = 0; i < h.n(); ++i) q.var_map_[i] = {VarTag::CodeBit, i, 0};

  std::unordered_map<std::uint64_t, double> pair_coeff;
  pair_coeff.reserve(static_cast<std::size_t>(h.nnz()) * 8);
  auto add_pair = [&](int a, int b, double c) {
    if (a > b) std::swap(a, b);
    pair_coeff[(static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b)] += c;
  };

  int aux_base = h.n();
  for (int j = 0; j < h.m(); ++j) {
    auto bits = h.row(j);
    const int num_aux = aux_var_count(static_cast<int>(bits.size()), encoding);
    std::vector<double> w(num_aux);
    for (int k = 0; k < num_aux; ++k) {
      w[k] = encoding == AuxEncoding::Unary ? 1.0 : static_cast<double>(1u << k);
      q.var_map_[aux_base + k] = {VarTag::Aux, j, k};
    }
    // alpha * (sum_i x_i - 2 sum_k w_k y_k)^2 with x^2 = x, y^2 = y
    for (std::size_t a = 0; a < bits.size(); ++a) {
      q.linear_base_[bits[a]] += alpha;
      for (std::size_t b = a + 1; b < bits.size(); ++b) add_pair(bits[a], bits[b], 2.0 * alpha);
      for (int k = 0; k < num_aux; ++k) add_pair(bits[a], aux_base + k, -4.0 * alpha * w[k]);
    }
    for (int k = 0; k < num_aux; ++k) {
      q.linear_base_[aux_base + k] += 4.0 * alpha * w[k] * w[k];
      for (int l = k + 1; l < num_aux; ++l)
        add_pair(aux_base + k, aux_base + l, 8.0 * alpha * w[k] * w[l]);
    }
    aux_base += num_aux;
  }

  q.pairs_.reserve(pair_coeff.size());
  for (auto [key, c] : pair_coeff) {
    if (c == 0.0) continue;
    q.pairs_.push_back({static_cast<std::int32_t>(key >> 32),
                        static_cast<std::int32_t>(key & 0xffffffffu), c});
  }
  std::sort(q.pairs_.begin(), q.pairs_.end(), [](const auto& a, const auto& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });

  q.linear_ = q.linear_base_;
  q.offset_ = 0.0;
  rebias_qubo(q, r);
  q.finalize();
  return q;
}

void rebias_qubo(QuadraticModel& q, std::span<const double> r) {
  if (static_cast<int>(r.size()) != q.num_code_bits_)
    throw DimensionError("rebias_qubo: |r| != number of code bits");
  double offset = 0.0;
  for (int i = 0; i < q.num_code_bits_; ++i) {
    q.linear_[i] = q.linear_base_[i] + 4.0 * r[i];
    offset += (r[i] - 1.0) * (r[i] - 1.0);
  }
  q.offset_ = offset;
}

QuadraticModel QuadraticModel::from_terms(int num_vars, double offset,
                                          std::vector<double> linear,
                                          std::vector<PairTerm> pairs, int num_code_bits) {
  if (static_cast<int>(linear.size()) != num_vars)
    throw DimensionError("from_terms: |linear| != num_vars");
  QuadraticModel q;
  q.num_vars_ = num_vars;
  q.num_code_bits_ = num_code_bits < 0 ? num_vars : num_code_bits;
  q.offset_ = offset;
  q.linear_ = std::move(linear);
  q.linear_base_ = q.linear_;
  q.var_map_.resize(num_vars);
  for (int i = 0; i < num_vars; ++i) q.var_map_[i] = {VarTag::CodeBit, i, 0};

  std::unordered_map<std::uint64_t, double> collect;
  for (const PairTerm& p : pairs) {
    int a = p.i, b = p.j;
    if (a == b) throw ParameterError("from_terms: diagonal entries belong in linear");
    if (a < 0 || b < 0 || a >= num_vars || b >= num_vars)
      throw DimensionError("from_terms: pair index out of range");
    if (a > b) std::swap(a, b);
    collect[(static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b)] += p.coeff;
  }
  for (auto [key, c] : collect) {
    if (c == 0.0) continue;
    q.pairs_.push_back({static_cast<std::int32_t>(key >> 32),
                        static_cast<std::int32_t>(key & 0xffffffffu), c});
  }
  std::sort(q.pairs_.begin(), q.pairs_.end(), [](const auto& a, const auto& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  q.finalize();
  return q;
}

void QuadraticModel::finalize() {
  adj_ptr_.assign(num_vars_ + 1, 0);
  for (const PairTerm& p : pairs_) {
    ++adj_ptr_[p.i + 1];
    ++adj_ptr_[p.j + 1];
  }
  for (int v = 0; v < num_vars_; ++v) adj_ptr_[v + 1] += adj_ptr_[v];
  adj_idx_.resize(2 * pairs_.size());
  adj_coeff_.resize(2 * pairs_.size());
  std::vector<std::int32_t> fill(adj_ptr_.begin(), adj_ptr_.end() - 1);
  for (const PairTerm& p : pairs_) {
    adj_idx_[fill[p.i]] = p.j;
    adj_coeff_[fill[p.i]++] = p.coeff;
    adj_idx_[fill[p.j]] = p.i;
    adj_coeff_[fill[p.j]++] = p.coeff;
  }
}

double QuadraticModel::energy(std::span<const std::uint8_t> bits) const {
  if (static_cast<int>(bits.size()) != num_vars_)
    throw DimensionError("qubo energy: assignment length != num_vars");
  double e = offset_;
  for (int i = 0; i < num_vars_; ++i)
    if (bits[i]) e += linear_[i];
  for (const PairTerm& p : pairs_)
    if (bits[p.i] && bits[p.j]) e += p.coeff;
  return e;
}

IsingForm to_ising(const QuadraticModel& q) {
  IsingForm f;
  f.num_vars = q.num_vars();
  f.h.assign(f.num_vars, 0.0);
  f.offset = q.offset();
  for (int i = 0; i < f.num_vars; ++i) {
    f.h[i] = -0.5 * q.linear()[i];
    f.offset += 0.5 * q.linear()[i];
  }
  f.j.reserve(q.pairs().size());
  for (const auto& p : q.pairs()) {
    f.j.push_back({p.i, p.j, -0.25 * p.coeff});
    f.h[p.i] -= 0.25 * p.coeff;
    f.h[p.j] -= 0.25 * p.coeff;
    f.offset += 0.25 * p.coeff;
  }
  return f;
}

double IsingForm::energy(std::span<const std::int8_t> spins) const {
  if (static_cast<int>(spins.size()) != num_vars)
    throw DimensionError("ising energy: assignment length != num_vars");
  double e = offset;
  for (int i = 0; i < num_vars; ++i) e -= h[i] * spins[i];
  for (const auto& t : j) e -= t.coeff * spins[t.i] * spins[t.j];
  return e;
}

void export_triplets(const QuadraticModel& q, std::ostream& out) {
  out << q.num_vars() << ' ' << q.offset() << '\n';
  for (int i = 0; i < q.num_vars(); ++i)
    if (q.linear()[i] != 0.0) out << i << ' ' << i << ' ' << q.linear()[i] << '\n';
  for (const auto& p : q.pairs()) out << p.i << ' ' << p.j << ' ' << p.coeff << '\n';
}

}  // namespace ildpc
