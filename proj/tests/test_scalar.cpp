#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "padcal/scalar.hpp"

using namespace padcal;

static field_ptr cfg5() {
  static field_ptr c = field_config::make(5, 40);
  return c;
}

TEST_CASE("arithmetic identities") {
  auto cfg = cfg5();
  padic fifty = padic::from_long(cfg, 50);
  padic z = padic::zero(cfg);
  CHECK(fifty + z == fifty);
  CHECK(fifty.valuation() == 2);
  CHECK(fifty.unit() == 2);

  padic five = padic::from_long(cfg, 5);
  padic v25 = five * five;
  CHECK(v25.valuation() == 2);
  CHECK(v25.unit() == 1);

  padic six = padic::from_long(cfg, 6);
  padic one = padic::one(cfg);
  padic d = six - one;
  CHECK(d.valuation() == 1);
  CHECK(d.unit() == 1);
}

TEST_CASE("inversion") {
  auto cfg = cfg5();
  CHECK(padic::one(cfg).inverse() == padic::one(cfg));

  // closed form: 2^{-1} = (p^M + 1)/2 mod p^M
  padic inv2 = padic::from_long(cfg, 2).inverse();
  mpz_class expect = (cfg->p_pow_m + 1) / 2;
  CHECK(inv2.valuation() == 0);
  CHECK(inv2.unit() == expect);
  CHECK(inv2 * padic::from_long(cfg, 2) == padic::one(cfg));

  padic invp = padic::from_long(cfg, 5).inverse();
  CHECK(invp.valuation() == -1);
  CHECK(invp.unit() == 1);

  CHECK_THROWS_AS(padic::zero(cfg).inverse(), calc_error);
}

TEST_CASE("precision loss flagging") {
  auto strict = field_config::make(5, 8, true);
  padic a = padic::from_long(strict, 7);
  CHECK_THROWS_AS(a - a, calc_error);
  auto lax = field_config::make(5, 8);
  padic b = padic::from_long(lax, 7);
  CHECK((b - b).is_zero());
}

TEST_CASE("plog against exact partial-sum oracle") {
  auto cfg = cfg5();
  CHECK(plog(padic::one(cfg)).is_zero());

  // independent oracle: sum_{i=1}^{8} (-1)^{i+1} 5^i / i as an exact rational,
  // compared mod 5^4
  mpq_class oracle = 0;
  mpq_class pw = 1;
  for (int i = 1; i <= 8; ++i) {
    pw *= 5;
    mpq_class term = pw / i;
    oracle += (i % 2 == 1) ? term : -term;
  }
  padic expected = padic::from_mpq(cfg, oracle);
  padic got = plog(padic::from_long(cfg, 6));
  padic diff = got - expected;
  CHECK((diff.is_zero() || diff.valuation() >= 4));

  CHECK_THROWS_AS(plog(padic::from_long(cfg, 2)), calc_error);
}

TEST_CASE("plog is a homomorphism on 1 + pZ_p") {
  auto cfg = cfg5();
  std::mt19937_64 rng(20260809);
  for (int trial = 0; trial < 50; ++trial) {
    long ra = 1 + 5 * static_cast<long>(rng() % 100000);
    long rb = 1 + 5 * static_cast<long>(rng() % 100000);
    padic a = padic::from_long(cfg, ra);
    padic b = padic::from_long(cfg, rb);
    padic lhs = plog(a * b);
    padic rhs = plog(a) + plog(b);
    CHECK(eq_to_precision(lhs, rhs, 2));
  }
}

TEST_CASE("plog of a square doubles") {
  auto cfg = cfg5();
  padic a = padic::from_long(cfg, 6);
  CHECK(eq_to_precision(plog(a * a), plog(a) + plog(a), 2));
}

TEST_CASE("teichmuller lifts") {
  auto cfg = cfg5();
  CHECK(teichmuller(cfg, 1) == padic::one(cfg));

  // frozen: iterate a -> a^5 mod 25 stabilizes at 7 for a = 2
  padic w2 = teichmuller(cfg, 2);
  mpz_class mod25 = 25;
  mpz_class low;
  mpz_mod(low.get_mpz_t(), w2.unit().get_mpz_t(), mod25.get_mpz_t());
  CHECK(low == 7);

  padic w4 = teichmuller(cfg, 4);
  CHECK(w4 == -padic::one(cfg));

  for (unsigned long r = 1; r < 5; ++r) {
    padic w = teichmuller(cfg, r);
    CHECK(w.pow_int(4) == padic::one(cfg));
    CHECK(mpz_fdiv_ui(w.unit().get_mpz_t(), 5) == r);
  }
  CHECK_THROWS_AS(teichmuller(cfg, 0), calc_error);
}

TEST_CASE("multiplicativity of the valuation") {
  auto cfg = cfg5();
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    long na = static_cast<long>(rng() % 100000) + 1;
    long nb = static_cast<long>(rng() % 100000) + 1;
    padic a = padic::from_long(cfg, na);
    padic b = padic::from_long(cfg, nb);
    CHECK((a * b).valuation() == a.valuation() + b.valuation());
  }
}

TEST_CASE("edge configuration p = 2") {
  auto cfg = field_config::make(2, 40);
  CHECK(cfg->n_k() == 1);
  padic three = padic::from_long(cfg, 3);
  CHECK(eq_to_precision(plog(three * three), plog(three) + plog(three), 2));
  CHECK(teichmuller(cfg, 1) == padic::one(cfg));
}
