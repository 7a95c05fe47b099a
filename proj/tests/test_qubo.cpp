#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <sstream>

#include "ising_ldpc/base_graph.hpp"
#include "ising_ldpc/channel.hpp"
#include "ising_ldpc/errors.hpp"
#include "ising_ldpc/generator.hpp"
#include "ising_ldpc/higher_order.hpp"
#include "ising_ldpc/qubo.hpp"
#include "ising_ldpc/resources.hpp"
#include "ising_ldpc/rng.hpp"

using namespace ildpc;

namespace {

ParityCheckMatrix product33() {
  std::vector<std::pair<int, int>> e;
  for (int row = 0; row < 3; ++row)
    for (int c = 0; c < 3; ++c) e.emplace_back(row, 3 * row + c);
  for (int col = 0; col < 3; ++col)
    for (int c = 0; c < 3; ++c) e.emplace_back(3 + col, 3 * c + col);
  return ParityCheckMatrix::from_entries(6, 9, std::move(e));
}

// Direct evaluation of the objective: sum (R_i - (1-2c_i))^2 + alpha * F_s
// with L_j decoded from the auxiliary bits under the given encoding weights.
double reference_objective(const ParityCheckMatrix& h, std::span<const double> r, double alpha,
                           AuxEncoding enc, std::span<const std::uint8_t> assignment) {
  double f = 0.0;
  for (int i = 0; i < h.n(); ++i) {
    double s = 1.0 - 2.0 * assignment[i];
    f += (r[i] - s) * (r[i] - s);
  }
  int aux = h.n();
  for (int j = 0; j < h.m(); ++j) {
    const int num_aux = aux_var_count(h.row_degree(j), enc);
    double l = 0.0;
    for (int k = 0; k < num_aux; ++k) {
      double w = enc == AuxEncoding::Unary ? 1.0 : static_cast<double>(1 << k);
      l += w * assignment[aux + k];
    }
    double sum = 0.0;
    for (auto i : h.row(j)) sum += assignment[i];
    f += alpha * (sum - 2.0 * l) * (sum - 2.0 * l);
    aux += num_aux;
  }
  return f;
}

// Minimum of alpha * (S - 2L)^2 over the L values the encoding can express.
double min_penalty(int degree, int ones, double alpha, AuxEncoding enc) {
  int max_l;
  if (enc == AuxEncoding::Unary) {
    max_l = degree / 2;
  } else {
    max_l = 0;
    for (int k = 0; k < aux_var_count(degree, enc); ++k) max_l += 1 << k;
  }
  double best = 1e300;
  for (int l = 0; l <= max_l; ++l) {
    double v = alpha * (ones - 2.0 * l) * (ones - 2.0 * l);
    best = std::min(best, v);
  }
  return best;
}

}  // namespace

TEST_CASE("auxiliary variable counts per encoding") {
  CHECK(aux_var_count(10, AuxEncoding::Unary) == 6);
  CHECK(aux_var_count(10, AuxEncoding::Binary) == 3);
  CHECK(aux_var_count(3, AuxEncoding::Unary) == 2);
  CHECK(aux_var_count(3, AuxEncoding::Binary) == 1);
  CHECK(aux_var_count(19, AuxEncoding::Unary) == 10);
  CHECK(aux_var_count(19, AuxEncoding::Binary) == 4);
  // degenerate short checks keep one auxiliary
  CHECK(aux_var_count(1, AuxEncoding::Unary) == 1);
  CHECK(aux_var_count(1, AuxEncoding::Binary) == 1);
  CHECK(aux_var_count(2, AuxEncoding::Binary) == 1);
}

TEST_CASE("model energy equals the direct objective on every assignment") {
  auto h = product33();
  Rng rng(31);
  std::vector<double> r(h.n());
  for (double& v : r) v = 2.0 * rng.uniform01() - 1.0;
  const double alpha = 2.5;

  for (auto enc : {AuxEncoding::Unary, AuxEncoding::Binary}) {
    QuadraticModel q = build_qubo(h, r, alpha, enc);
    // exhaustive over code bits, random over auxiliaries
    for (int b = 0; b < (1 << h.n()); b += 7) {
      std::vector<std::uint8_t> x(q.num_vars());
      for (int i = 0; i < h.n(); ++i) x[i] = (b >> i) & 1;
      for (int i = h.n(); i < q.num_vars(); ++i) x[i] = rng.coin();
      double want = reference_objective(h, r, alpha, enc, x);
      CHECK(q.energy(x) == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("a valid codeword with optimal aux assignment zeroes the penalty") {
  auto h = product33();
  GeneratorMatrix g = build_generator(h);
  Rng rng(5);
  BitVector cw = g.encode(random_message(g.k(), rng));
  auto s = modulate(cw);
  std::vector<double> r(s.begin(), s.end());
  const double alpha = 4.0;

  for (auto enc : {AuxEncoding::Unary, AuxEncoding::Binary}) {
    QuadraticModel q = build_qubo(h, r, alpha, enc);
    // optimal aux: encode L_j = ones(j)/2 exactly
    std::vector<std::uint8_t> x(q.num_vars(), 0);
    for (int i = 0; i < h.n(); ++i) x[i] = cw.get(i);
    int aux = h.n();
    for (int j = 0; j < h.m(); ++j) {
      int ones = 0;
      for (auto i : h.row(j)) ones += x[i];
      int l = ones / 2;
      int num_aux = aux_var_count(h.row_degree(j), enc);
      for (int k = 0; k < num_aux; ++k) {
        if (enc == AuxEncoding::Unary) {
          x[aux + k] = k < l;
        } else {
          x[aux + k] = (l >> k) & 1;
        }
      }
      aux += num_aux;
    }
    double direct = 0.0;
    for (int i = 0; i < h.n(); ++i) direct += (r[i] - (1.0 - 2.0 * x[i])) * (r[i] - (1.0 - 2.0 * x[i]));
    CHECK(q.energy(x) == doctest::Approx(direct).epsilon(1e-12));  // F_s contributes zero
  }
}

TEST_CASE("exhaustive: optimal-aux energy equals bias term plus per-check minimum penalty") {
  auto h = product33();
  Rng rng(77);
  std::vector<double> r(h.n());
  for (double& v : r) v = 2.0 * rng.uniform01() - 1.0;
  const double alpha = 1.5;

  for (auto enc : {AuxEncoding::Unary, AuxEncoding::Binary}) {
    QuadraticModel q = build_qubo(h, r, alpha, enc);
    for (int b = 0; b < (1 << h.n()); b += 5) {
      std::vector<std::uint8_t> x(q.num_vars(), 0);
      for (int i = 0; i < h.n(); ++i) x[i] = (b >> i) & 1;

      // brute-force minimum over each check's auxiliaries (they are local)
      double best = 0.0;
      for (int i = 0; i < h.n(); ++i) {
        double s = 1.0 - 2.0 * x[i];
        best += (r[i] - s) * (r[i] - s);
      }
      int aux = h.n();
      for (int j = 0; j < h.m(); ++j) {
        int num_aux = aux_var_count(h.row_degree(j), enc);
        int ones = 0;
        for (auto i : h.row(j)) ones += x[i];
        double check_best = 1e300;
        for (int y = 0; y < (1 << num_aux); ++y) {
          double l = 0.0;
          for (int k = 0; k < num_aux; ++k)
            if ((y >> k) & 1) l += enc == AuxEncoding::Unary ? 1.0 : static_cast<double>(1 << k);
          double v = alpha * (ones - 2.0 * l) * (ones - 2.0 * l);
          check_best = std::min(check_best, v);
        }
        CHECK(check_best ==
              doctest::Approx(min_penalty(h.row_degree(j), ones, alpha, enc)).epsilon(1e-12));
        best += check_best;

        // greedy assignment achieving the check minimum must exist in the model
        aux += num_aux;
      }

      // minimize the built model over aux bits check-locally and compare
      double model_best = 1e300;
      // exhaustive over all aux assignments is feasible here (12 unary / 6 binary)
      int total_aux = q.num_vars() - h.n();
      for (int y = 0; y < (1 << total_aux); ++y) {
        std::vector<std::uint8_t> full = x;
        for (int k = 0; k < total_aux; ++k) full[h.n() + k] = (y >> k) & 1;
        model_best = std::min(model_best, q.energy(full));
      }
      CHECK(model_best == doctest::Approx(best).epsilon(1e-12));
    }
  }
}

TEST_CASE("higher-order model basics") {
  auto hp = std::make_shared<const ParityCheckMatrix>(product33());
  Rng rng(13);
  std::vector<double> r(hp->n());
  for (double& v : r) v = 2.0 * rng.uniform01() - 1.0;
  const double alpha = 3.0;
  HigherOrderModel m = build_higher_order(hp, r, alpha);

  SUBCASE("spin product equals XOR truth table") {
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        int sa = bit_to_spin(a), sb = bit_to_spin(b);
        CHECK((sa * sb == 1) == ((a ^ b) == 0));
      }
  }

  SUBCASE("noiseless transmitted state is the structural minimum value") {
    GeneratorMatrix g = build_generator(*hp);
    BitVector cw = g.encode(random_message(g.k(), rng));
    auto s = modulate(cw);
    HigherOrderModel noiseless = build_higher_order(hp, s, alpha);
    std::vector<std::int8_t> spins(hp->n());
    for (int i = 0; i < hp->n(); ++i) spins[i] = bit_to_spin(cw.get(i));
    double want = 0.0;
    for (double v : s) want += -2.0 * std::abs(v);
    want -= 0.5 * alpha * hp->m();
    CHECK(noiseless.energy(spins) == doctest::Approx(want).epsilon(1e-12));
  }

  SUBCASE("flipping one spin in a satisfied state raises energy by 4|R_i| + alpha deg(i)") {
    // three variables, one check
    auto h1 = std::make_shared<const ParityCheckMatrix>(
        ParityCheckMatrix::from_entries(1, 3, {{0, 0}, {0, 1}, {0, 2}}));
    std::vector<double> rr{0.8, -0.4, -0.9};
    HigherOrderModel m1 = build_higher_order(h1, rr, alpha);
    std::vector<std::int8_t> spins{1, -1, -1};  // agrees with sign(R), parity +1
    double e0 = m1.energy(spins);
    for (int i = 0; i < 3; ++i) {
      auto flipped = spins;
      flipped[i] = -flipped[i];
      CHECK(m1.energy(flipped) - e0 ==
            doctest::Approx(4.0 * std::abs(rr[i]) + alpha * 1.0).epsilon(1e-12));
    }
  }

  SUBCASE("energy invariant under check relabeling") {
    std::vector<std::pair<int, int>> perm_entries;
    std::vector<int> perm{3, 5, 0, 2, 4, 1};
    for (int j = 0; j < hp->m(); ++j)
      for (auto i : hp->row(j)) perm_entries.emplace_back(perm[j], i);
    auto hperm = std::make_shared<const ParityCheckMatrix>(
        ParityCheckMatrix::from_entries(hp->m(), hp->n(), std::move(perm_entries)));
    HigherOrderModel mp = build_higher_order(hperm, r, alpha);
    std::vector<std::int8_t> spins(hp->n());
    for (int t = 0; t < 50; ++t) {
      for (auto& sp : spins) sp = rng.coin() ? 1 : -1;
      CHECK(m.energy(spins) == doctest::Approx(mp.energy(spins)).epsilon(1e-12));
    }
  }
}

TEST_CASE("higher-order argmin under noiseless R is the transmitted codeword (exhaustive)") {
  auto hp = std::make_shared<const ParityCheckMatrix>(product33());
  GeneratorMatrix g = build_generator(*hp);
  Rng rng(3);
  for (int trial = 0; trial < 4; ++trial) {
    BitVector cw = g.encode(random_message(g.k(), rng));
    auto s = modulate(cw);
    HigherOrderModel m = build_higher_order(hp, s, 2.0);
    double best = 1e300;
    int best_b = -1;
    for (int b = 0; b < (1 << hp->n()); ++b) {
      std::vector<std::int8_t> spins(hp->n());
      for (int i = 0; i < hp->n(); ++i) spins[i] = bit_to_spin((b >> i) & 1);
      double e = m.energy(spins);
      if (e < best) {
        best = e;
        best_b = b;
      }
    }
    BitVector arg(hp->n());
    for (int i = 0; i < hp->n(); ++i) arg.set(i, (best_b >> i) & 1);
    CHECK(arg == cw);
  }
}

TEST_CASE("to_ising agrees with the QUBO energy under sigma = 2b - 1") {
  SUBCASE("single-variable q(x) = 3x") {
    QuadraticModel q = QuadraticModel::from_terms(1, 0.0, {3.0}, {});
    IsingForm f = to_ising(q);
    for (int b = 0; b < 2; ++b) {
      std::vector<std::uint8_t> x{static_cast<std::uint8_t>(b)};
      std::vector<std::int8_t> s{static_cast<std::int8_t>(2 * b - 1)};
      CHECK(q.energy(x) == doctest::Approx(f.energy(s)).epsilon(1e-12));
    }
  }

  SUBCASE("random 20-variable model, 1000 assignments") {
    Rng rng(41);
    std::vector<double> lin(20);
    for (double& v : lin) v = 4.0 * rng.uniform01() - 2.0;
    std::vector<QuadraticModel::PairTerm> pairs;
    for (int i = 0; i < 20; ++i)
      for (int j = i + 1; j < 20; ++j)
        if (rng.uniform01() < 0.3)
          pairs.push_back({i, j, 4.0 * rng.uniform01() - 2.0});
    QuadraticModel q = QuadraticModel::from_terms(20, 1.25, lin, pairs);
    IsingForm f = to_ising(q);
    for (int t = 0; t < 1000; ++t) {
      std::vector<std::uint8_t> x(20);
      std::vector<std::int8_t> s(20);
      for (int i = 0; i < 20; ++i) {
        x[i] = rng.coin();
        s[i] = static_cast<std::int8_t>(2 * x[i] - 1);
      }
      double eq = q.energy(x), ei = f.energy(s);
      CHECK(std::abs(eq - ei) <= 1e-9 * std::max(1.0, std::abs(eq)));
    }
  }

  SUBCASE("exhaustive 16-variable model") {
    Rng rng(97);
    std::vector<double> lin(16);
    for (double& v : lin) v = 2.0 * rng.uniform01() - 1.0;
    std::vector<QuadraticModel::PairTerm> pairs;
    for (int i = 0; i < 16; ++i)
      for (int j = i + 1; j < 16; ++j)
        if (rng.uniform01() < 0.25) pairs.push_back({i, j, 2.0 * rng.uniform01() - 1.0});
    QuadraticModel q = QuadraticModel::from_terms(16, -0.5, lin, pairs);
    IsingForm f = to_ising(q);
    std::vector<std::uint8_t> x(16);
    std::vector<std::int8_t> s(16);
    for (int b = 0; b < (1 << 16); ++b) {
      for (int i = 0; i < 16; ++i) {
        x[i] = (b >> i) & 1;
        s[i] = static_cast<std::int8_t>(2 * x[i] - 1);
      }
      double eq = q.energy(x), ei = f.energy(s);
      CHECK(std::abs(eq - ei) <= 1e-9 * std::max(1.0, std::abs(eq)));
    }
  }

  SUBCASE("all-zero assignment energy is the offset") {
    QuadraticModel q = QuadraticModel::from_terms(3, 2.5, {1.0, -2.0, 3.0}, {{0, 1, 1.5}});
    std::vector<std::uint8_t> zero(3, 0);
    CHECK(q.energy(zero) == doctest::Approx(2.5));
  }
}

TEST_CASE("resource reports") {
  SUBCASE("co-designed counts pin to nnz(H)") {
    auto h64 = expand_base_graph(bundled_bg1(), 64);
    ResourceReport rep = resource_report(h64);
    CHECK(rep.num_spins == 4352);
    CHECK(rep.num_aux_spins == 2944);
    CHECK(rep.num_couplers == 20224);

    auto h384 = expand_base_graph(bundled_bg1(), 384);
    CHECK(resource_report(h384).num_couplers == 121344);
  }

  SUBCASE("empty H has zero couplers") {
    auto h = ParityCheckMatrix::from_entries(2, 3, {});
    CHECK(resource_report(h).num_couplers == 0);
  }

  SUBCASE("quadratic model carries both conventions") {
    auto h = product33();
    std::vector<double> r(h.n(), 0.0);
    QuadraticModel q = build_qubo(h, r, 1.0, AuxEncoding::Binary);
    ResourceReport rep = resource_report(q);
    CHECK(rep.num_spins == q.num_vars());
    CHECK(rep.num_aux_spins == q.num_vars() - h.n());
    CHECK(rep.num_couplers == 2 * rep.num_coupled_pairs);
    CHECK(rep.num_coupled_pairs == static_cast<std::int64_t>(q.pairs().size()));
  }
}

TEST_CASE("export triplet format") {
  QuadraticModel q = QuadraticModel::from_terms(3, 0.5, {2.0, 0.0, -1.0}, {{0, 2, 4.0}});
  std::ostringstream out;
  export_triplets(q, out);
  CHECK(out.str() == "3 0.5\n0 0 2\n2 2 -1\n0 2 4\n");
}

TEST_CASE("parameter validation") {
  auto h = product33();
  std::vector<double> r(h.n(), 0.0);
  CHECK_THROWS_AS(build_qubo(h, r, 0.0, AuxEncoding::Unary), ParameterError);
  std::vector<double> bad(h.n() + 1, 0.0);
  CHECK_THROWS_AS(build_qubo(h, bad, 1.0, AuxEncoding::Unary), DimensionError);
  auto hp = std::make_shared<const ParityCheckMatrix>(product33());
  CHECK_THROWS_AS(build_higher_order(hp, r, -1.0), ParameterError);
}
