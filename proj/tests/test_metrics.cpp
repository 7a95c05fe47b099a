#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ising_ldpc/errors.hpp"
#include "ising_ldpc/metrics.hpp"
#include "ising_ldpc/rng.hpp"

using namespace ildpc;

namespace {

DecodeOutcome make_outcome(std::initializer_list<int> bits, double energy) {
  DecodeOutcome o;
  o.bits = BitVector::from_bits(bits);
  o.energy = energy;
  return o;
}

}  // namespace

TEST_CASE("ber accumulation") {
  BerStats s;
  BitVector truth(100);
  s.add(truth, truth);
  CHECK(s.bit_errors == 0);
  CHECK(s.frame_errors == 0);

  BitVector one_err = truth;
  one_err.flip(3);
  s.add(one_err, truth);
  CHECK(s.ber() == doctest::Approx(1.0 / 200));
  CHECK(s.fer() == doctest::Approx(0.5));

  BitVector complement(100);
  for (int i = 0; i < 100; ++i) complement.set(i, true);
  BerStats c;
  c.add(complement, truth);
  CHECK(c.ber() == doctest::Approx(1.0));

  CHECK_THROWS_AS(s.add(BitVector(99), truth), DimensionError);
}

TEST_CASE("ensemble ranking and multiplicities") {
  BitVector truth = BitVector::from_bits({0, 0, 0, 0});
  std::vector<DecodeOutcome> anneals;
  anneals.push_back(make_outcome({0, 0, 0, 0}, -5.0));
  anneals.push_back(make_outcome({0, 0, 0, 0}, -5.0));
  anneals.push_back(make_outcome({1, 0, 0, 0}, -3.0));
  anneals.push_back(make_outcome({0, 1, 1, 0}, -3.0));
  anneals.push_back(make_outcome({1, 1, 1, 1}, -1.0));
  AnnealEnsemble ens(anneals, truth);

  CHECK(ens.total_anneals() == 5);
  REQUIRE(ens.ranked().size() == 4);
  int msum = 0;
  for (const auto& sol : ens.ranked()) msum += sol.multiplicity;
  CHECK(msum == 5);
  CHECK(ens.ranked()[0].energy == -5.0);
  CHECK(ens.ranked()[0].multiplicity == 2);
  CHECK(ens.ranked()[0].bit_errors == 0);
  // energy tie at -3 broken lexicographically: 0110 before 1000
  CHECK(ens.ranked()[1].bits == BitVector::from_bits({0, 1, 1, 0}));
  CHECK(ens.ranked()[2].bits == BitVector::from_bits({1, 0, 0, 0}));
}

TEST_CASE("expected BER: worked two-solution example equals 0.025") {
  // P = (0.5, 0.5), F = (0, 10), N = 100, N_a = 2
  BitVector truth(100);
  BitVector wrong(100);
  for (int i = 0; i < 10; ++i) wrong.set(i, true);
  std::vector<DecodeOutcome> anneals;
  DecodeOutcome good;
  good.bits = truth;
  good.energy = -10.0;
  DecodeOutcome bad;
  bad.bits = wrong;
  bad.energy = -8.0;
  anneals = {good, bad};
  AnnealEnsemble ens(anneals, truth);
  CHECK(expected_ber(ens, 2, 100) == doctest::Approx(0.025).epsilon(1e-12));

  SUBCASE("N_a = 1 collapses to the plain mean over anneals") {
    CHECK(expected_ber(ens, 1, 100) == doctest::Approx(0.05).epsilon(1e-12));
  }

  SUBCASE("large N_a approaches the best-ranked solution's BER") {
    CHECK(expected_ber(ens, 200, 100) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("expected BER: N_a = 1 equals the arithmetic mean to 1e-12") {
  Rng rng(404);
  const int n = 24;
  BitVector truth(n);
  for (int i = 0; i < n; ++i) truth.set(i, rng.coin());
  std::vector<DecodeOutcome> anneals;
  double mean = 0.0;
  for (int a = 0; a < 10; ++a) {
    DecodeOutcome o;
    o.bits = BitVector(n);
    for (int i = 0; i < n; ++i) o.bits.set(i, rng.coin());
    o.energy = 10.0 * rng.uniform01() - 5.0;
    mean += static_cast<double>(o.bits.hamming_distance(truth)) / n;
    anneals.push_back(std::move(o));
  }
  mean /= 10.0;
  AnnealEnsemble ens(anneals, truth);
  CHECK(std::abs(expected_ber(ens, 1, n) - mean) <= 1e-12);
}

TEST_CASE("expected BER is non-increasing in N_a when F is non-decreasing in rank") {
  BitVector truth(50);
  std::vector<DecodeOutcome> anneals;
  // energies ascending, errors non-decreasing with rank
  int errors[5] = {0, 1, 3, 7, 20};
  double energies[5] = {-9.0, -7.5, -6.0, -4.0, -1.0};
  Rng rng(7);
  for (int k = 0; k < 5; ++k) {
    DecodeOutcome o;
    o.bits = BitVector(50);
    for (int e = 0; e < errors[k]; ++e) o.bits.set(e, true);
    o.energy = energies[k];
    for (int rep = 0; rep <= static_cast<int>(rng.bounded(3)); ++rep) anneals.push_back(o);
  }
  AnnealEnsemble ens(anneals, truth);
  double prev = expected_ber(ens, 1, 50);
  for (int na = 2; na <= 12; ++na) {
    double cur = expected_ber(ens, na, 50);
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
}

TEST_CASE("sign test") {
  CHECK(sign_test_two_sided(0, 0) == 1.0);
  CHECK(sign_test_two_sided(1, 1) == doctest::Approx(1.0));
  // 10 wins, 0 losses: p = 2 * (1/2)^10
  CHECK(sign_test_two_sided(10, 0) == doctest::Approx(2.0 * std::pow(0.5, 10)).epsilon(1e-9));
  CHECK(sign_test_two_sided(0, 10) == doctest::Approx(2.0 * std::pow(0.5, 10)).epsilon(1e-9));
  // large unbalanced sample is decisive
  CHECK(sign_test_two_sided(800, 200) < 1e-10);
  CHECK(sign_test_two_sided(501, 499) > 0.9);
}

TEST_CASE("q function") {
  CHECK(q_function(0.0) == doctest::Approx(0.5));
  CHECK(q_function(1.0) == doctest::Approx(0.158655).epsilon(1e-5));
  CHECK(q_function(-1.0) == doctest::Approx(0.841345).epsilon(1e-5));
}
