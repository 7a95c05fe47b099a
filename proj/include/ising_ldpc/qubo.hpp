#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "ising_ldpc/parity_check.hpp"

namespace ildpc {

enum class AuxEncoding { Unary, Binary };

// Tags each model variable as a code bit or an auxiliary of some check.
struct VarTag {
  enum Kind : std::uint8_t { CodeBit, Aux } kind = CodeBit;
  std::int32_t a = 0;  // code-bit index, or parent check j
  std::int32_t b = 0;  // aux index k within the check
};

// F(x) = offset + sum_i linear[i] x_i + sum_{i<j} q_ij x_i x_j over bits.
// Quadratic terms are collected (i < j, zeros dropped) and mirrored into a
// CSR adjacency for the annealer. Immutable once finalized.
class QuadraticModel {
 public:
  int num_vars() const { return num_vars_; }
  int num_code_bits() const { return num_code_bits_; }
  double offset() const { return offset_; }
  const std::vector<double>& linear() const { return linear_; }
  const std::vector<VarTag>& var_map() const { return var_map_; }

  struct PairTerm {
    std::int32_t i, j;  // i < j
    double coeff;
  };
  const std::vector<PairTerm>& pairs() const { return pairs_; }

  // CSR over both endpoints of every pair.
  std::span<const std::int32_t> neighbors(int v) const {
    return {adj_idx_.data() + adj_ptr_[v],
            static_cast<std::size_t>(adj_ptr_[v + 1] - adj_ptr_[v])};
  }
  std::span<const double> neighbor_coeffs(int v) const {
    return {adj_coeff_.data() + adj_ptr_[v],
            static_cast<std::size_t>(adj_ptr_[v + 1] - adj_ptr_[v])};
  }

  const std::vector<std::int32_t>& adj_ptr() const { return adj_ptr_; }
  const std::vector<std::int32_t>& adj_indices() const { return adj_idx_; }
  const std::vector<double>& adj_coeffs() const { return adj_coeff_; }

  double energy(std::span<const std::uint8_t> bits) const;

  // General-purpose model assembly (imports, synthetic instances). Pairs are
  // collected with i < j; zero coefficients dropped.
  static QuadraticModel from_terms(int num_vars, double offset, std::vector<double> linear,
                                   std::vector<PairTerm> pairs, int num_code_bits = -1);

  friend class QuboBuilder;
  friend QuadraticModel build_qubo(const ParityCheckMatrix&, std::span<const double>, double,
                                   AuxEncoding);
  friend void rebias_qubo(QuadraticModel&, std::span<const double>);

 private:
  void finalize();

  int num_vars_ = 0;
  int num_code_bits_ = 0;
  double offset_ = 0.0;
  double alpha_ = 1.0;
  std::vector<double> linear_;
  std::vector<double> linear_base_;  // penalty-only part, R-independent
  std::vector<VarTag> var_map_;
  std::vector<PairTerm> pairs_;
  std::vector<std::int32_t> adj_ptr_, adj_idx_;
  std::vector<double> adj_coeff_;
};

// Number of auxiliary variables a check of degree d needs under an encoding.
int aux_var_count(int check_degree, AuxEncoding enc);

// Expands F = sum_i (R_i - (1 - 2 c_i))^2 + alpha * F_s with the integer
// L_j of each check encoded in unary or binary auxiliaries.
QuadraticModel build_qubo(const ParityCheckMatrix& h, std::span<const double> r, double alpha,
                          AuxEncoding encoding);

// Refreshes the received-vector terms (linear code-bit coefficients and the
// offset) in place; the quadratic structure depends only on H and alpha.
void rebias_qubo(QuadraticModel& q, std::span<const double> r);

// E(sigma) = -sum_{i<j} J_ij s_i s_j - sum_i h_i s_i + offset, equal to the
// QUBO energy under sigma = 2b - 1.
struct IsingForm {
  int num_vars = 0;
  std::vector<double> h;
  std::vector<QuadraticModel::PairTerm> j;  // coeff = J_ij
  double offset = 0.0;

  double energy(std::span<const std::int8_t> spins) const;
};

IsingForm to_ising(const QuadraticModel& q);

// Plain-text triplet export: header "vars offset", then "i j coeff" lines
// (i = j for linear terms), 0-based.
void export_triplets(const QuadraticModel& q, std::ostream& out);

}  // namespace ildpc
