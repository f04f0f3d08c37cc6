#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "padcal/characters.hpp"
#include "padcal/periods.hpp"

using namespace padcal;

namespace {

struct setup {
  field_ptr cfg = field_config::make(5, 40);
  std::shared_ptr<generator_registry> reg = std::make_shared<generator_registry>(cfg);
  int p_id, zeta_id;
  setup() {
    p_id = reg->add("p", padic::from_long(cfg, 5));
    zeta_id = reg->add("zeta", teichmuller(cfg, 2), true, 4);
  }
};

}  // namespace

TEST_CASE("combine and pow") {
  setup s;
  character eps = character::generator_power(1, 0, generator_registry::eps_id, 1);
  CHECK(eps.mul(eps.inv()).is_identity());

  character q = eps.pow(mpq_class(1, 4));
  CHECK(q.coord(0).at(generator_registry::eps_id) == mpq_class(1, 4));

  character p1 = character::generator_power(1, 0, s.p_id, 1);
  character both = p1.mul(character::generator_power(1, 0, s.zeta_id, 1));
  CHECK(both.coord(0).size() == 2);

  character two = character::generator_power(2, 0, s.p_id, 1);
  CHECK_THROWS_AS(p1.mul(two), calc_error);
}

TEST_CASE("evaluation") {
  setup s;
  character p1 = character::generator_power(1, 0, s.p_id, 1);
  CHECK(evaluate1(*s.reg, p1, 3) == padic::from_long(s.cfg, 125));

  character eq = character::generator_power(1, 0, generator_registry::eps_id, mpq_class(1, 4));
  CHECK(evaluate1(*s.reg, eq, 4) == padic::one(s.cfg));
  CHECK_THROWS_AS(evaluate1(*s.reg, eq, 1), calc_error);

  // torsion reduction mod the order
  character z = character::generator_power(1, 0, s.zeta_id, 1);
  CHECK(evaluate1(*s.reg, z, 4) == padic::one(s.cfg));
  CHECK(evaluate1(*s.reg, z, 5) == s.reg->at(s.zeta_id).base);
}

TEST_CASE("group law of evaluation") {
  setup s;
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    character x = character::generator_power(1, 0, s.p_id, static_cast<long>(rng() % 5) - 2)
                      .mul(character::generator_power(1, 0, s.zeta_id, static_cast<long>(rng() % 7)));
    long a = static_cast<long>(rng() % 9) - 4;
    long b = static_cast<long>(rng() % 9) - 4;
    padic lhs = evaluate1(*s.reg, x, a + b);
    padic rhs = evaluate1(*s.reg, x, a) * evaluate1(*s.reg, x, b);
    CHECK(eq_to_precision(lhs, rhs, 2));
  }
}

TEST_CASE("norm exponent") {
  setup s;
  character p1 = character::generator_power(1, 0, s.p_id, 1);
  CHECK(norm_exponent_at(*s.reg, p1, {mpq_class(1)}) == 1);

  character eps = character::generator_power(1, 0, generator_registry::eps_id, 1);
  CHECK(norm_exponent_at(*s.reg, eps, {mpq_class(7, 3)}) == 0);

  CHECK(norm_exponent_at(*s.reg, p1.inv(), {mpq_class(4)}) == -4);

  // linearity in t
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    mpq_class t1(static_cast<long>(rng() % 19) - 9, 1 + static_cast<long>(rng() % 3));
    mpq_class t2(static_cast<long>(rng() % 19) - 9, 1 + static_cast<long>(rng() % 3));
    t1.canonicalize();
    t2.canonicalize();
    CHECK(norm_exponent_at(*s.reg, p1, {t1 + t2}) ==
          norm_exponent_at(*s.reg, p1, {t1}) + norm_exponent_at(*s.reg, p1, {t2}));
  }
}

TEST_CASE("torsion and closedness") {
  setup s;
  character zeta = character::generator_power(1, 0, s.zeta_id, 3);
  CHECK(is_torsion(*s.reg, zeta));
  CHECK(is_closed(*s.reg, zeta));

  character eps = character::generator_power(1, 0, generator_registry::eps_id, 1);
  CHECK_FALSE(is_torsion(*s.reg, eps));
  CHECK(is_closed(*s.reg, eps.pow(mpq_class(1, 4))));

  character p1 = character::generator_power(1, 0, s.p_id, 1);
  CHECK_FALSE(is_torsion(*s.reg, p1));
  CHECK_FALSE(is_closed(*s.reg, p1));

  // torsion implies closed on random mixes
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    character x = character::generator_power(1, 0, s.zeta_id,
                                             mpq_class(static_cast<long>(rng() % 13)));
    if (is_torsion(*s.reg, x)) CHECK(is_closed(*s.reg, x));
  }
}

TEST_CASE("log of characters") {
  setup s;
  character x = character::generator_power(1, 0, generator_registry::eps_id, 2)
                    .mul(character::generator_power(1, 0, s.p_id, 3));
  period lx = log_character(*s.reg, x);
  period expect = period::symbol(s.cfg, generator_registry::eps_id).scaled(padic::from_long(s.cfg, 2)) +
                  period::symbol(s.cfg, s.p_id).scaled(padic::from_long(s.cfg, 3));
  CHECK(eq_period(lx, expect));

  CHECK(log_character(*s.reg, character::generator_power(1, 0, s.zeta_id, 2))
            .is_zero_to_precision());
  CHECK(log_character(*s.reg, character::identity(1)).is_zero_to_precision());

  // homomorphism, exactly
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    mpq_class qa(static_cast<long>(rng() % 7) - 3, 2);
    mpq_class qb(static_cast<long>(rng() % 7) - 3, 4);
    qa.canonicalize();
    qb.canonicalize();
    character a = character::generator_power(1, 0, s.p_id, qa);
    character b = character::generator_power(1, 0, generator_registry::eps_id, qb);
    CHECK(eq_period(log_character(*s.reg, a.mul(b)),
                    log_character(*s.reg, a) + log_character(*s.reg, b)));
  }
}

TEST_CASE("galois twist on characters") {
  setup s;
  galois_action act(mpq_class(2), {});
  character eps = character::generator_power(1, 0, generator_registry::eps_id, 1);
  CHECK(act.apply(eps).coord(0).at(generator_registry::eps_id) == 2);

  galois_action kummer(mpq_class(1), {{s.p_id, mpz_class(3)}});
  character p1 = character::generator_power(1, 0, s.p_id, 1);
  character tw = kummer.apply(p1);
  CHECK(tw.coord(0).at(s.p_id) == 1);
  CHECK(tw.coord(0).at(generator_registry::eps_id) == 3);
}
