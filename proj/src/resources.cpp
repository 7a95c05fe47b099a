#include "ising_ldpc/resources.hpp"

namespace ildpc {

ResourceReport resource_report(const ParityCheckMatrix& h) {
  ResourceReport rep;
  rep.num_spins = h.n();
  rep.num_aux_spins = h.m();  // one derived parity spin per checksum
  rep.num_couplers = h.nnz();
  rep.num_coupled_pairs = h.nnz();
  rep.num_linear_terms = h.n();  // one bias injector per node
  rep.convention = "co-designed: one coupler per nonzero of H";
  return rep;
}

ResourceReport resource_report(const QuadraticModel& q) {
  ResourceReport rep;
  rep.num_spins = q.num_vars();
  rep.num_aux_spins = q.num_vars() - q.num_code_bits();
  rep.num_coupled_pairs = static_cast<std::int64_t>(q.pairs().size());
  rep.num_couplers = 2 * rep.num_coupled_pairs;
  for (double l : q.linear())
    if (l != 0.0) ++rep.num_linear_terms;
  rep.convention =
      "pairwise crossbar: two directed couplers per distinct unordered pair "
      "with nonzero coefficient after term collection";
  return rep;
}

}  // namespace ildpc
