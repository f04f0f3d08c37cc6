#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "padcal/characters.hpp"
#include "padcal/periods.hpp"

using namespace padcal;

namespace {

struct setup {
  field_ptr cfg = field_config::make(5, 40);
  std::shared_ptr<generator_registry> reg = std::make_shared<generator_registry>(cfg);
  int p_id, zeta_id, ua_id;
  setup() {
    p_id = reg->add("p", padic::from_long(cfg, 5));
    zeta_id = reg->add("zeta", teichmuller(cfg, 2), true, 4);
    ua_id = reg->add("one_plus_a", padic::from_long(cfg, 6));
  }
  period lam(int s) const { return period::symbol(cfg, s); }
};

}  // namespace

TEST_CASE("ring operations") {
  setup s;
  period le = s.lam(generator_registry::eps_id);
  CHECK(eq_period(le + period::zero(s.cfg), le));

  period c624 = period::from_long(s.cfg, 624);
  character p1 = character::generator_power(1, 0, s.p_id, 1);
  period frac = divide_by_log(*s.reg, c624, p1);
  CHECK(eq_period(frac * s.lam(s.p_id), c624));

  period prod = le * s.lam(s.p_id);
  CHECK(prod.is_polynomial());
  CHECK(prod.numerator().size() == 1);
  CHECK(monomial_degree(prod.numerator().begin()->first) == 2);
}

TEST_CASE("divide_by_log") {
  setup s;
  period c624 = period::from_long(s.cfg, 624);
  character p1 = character::generator_power(1, 0, s.p_id, 1);
  period r = divide_by_log(*s.reg, c624, p1);
  CHECK(r.denominator().size() == 1);

  // torsion part of the divisor drops out
  character mixed = character::generator_power(1, 0, generator_registry::eps_id, 1)
                        .mul(character::generator_power(1, 0, s.zeta_id, 2));
  period q = divide_by_log(*s.reg, s.lam(s.p_id), mixed);
  period expect = s.lam(s.p_id).divided_by_form(
      linear_form{{generator_registry::eps_id, mpq_class(1)}});
  CHECK(eq_period(q, expect));

  character z = character::generator_power(1, 0, s.zeta_id, 1);
  CHECK_THROWS_AS(divide_by_log(*s.reg, c624, z), calc_error);
}

TEST_CASE("fil truncation") {
  setup s;
  period le = s.lam(generator_registry::eps_id);
  CHECK((le * le).fil_truncate(2).is_zero_to_precision());

  period v = period::from_long(s.cfg, 5) + s.lam(s.p_id);
  CHECK(eq_period(v.fil_truncate(1), period::from_long(s.cfg, 5)));

  // (a + b l_eps)/l_eps at N = 1 keeps only a/l_eps
  period a = period::from_long(s.cfg, 3);
  period b = period::from_long(s.cfg, 7);
  period mixed = (a + b * le).divided_by_form(
      linear_form{{generator_registry::eps_id, mpq_class(1)}});
  period cut = mixed.fil_truncate(1);
  period expect = a.divided_by_form(linear_form{{generator_registry::eps_id, mpq_class(1)}});
  CHECK(eq_period(cut, expect));
}

TEST_CASE("equality") {
  setup s;
  period le = s.lam(generator_registry::eps_id);
  period one = period::from_long(s.cfg, 1);
  CHECK(eq_period(le.divided_by_form(linear_form{{generator_registry::eps_id, mpq_class(1)}}), one));

  period a624 = period::from_long(s.cfg, 624);
  period via_p = a624.divided_by_form(linear_form{{s.p_id, mpq_class(1)}});
  period via_e = a624.divided_by_form(linear_form{{generator_registry::eps_id, mpq_class(1)}});
  CHECK_FALSE(eq_period(via_p, via_e));

  // (a/l) + (b/l) = (a+b)/l
  linear_form l{{s.p_id, mpq_class(1)}};
  period pa = period::from_long(s.cfg, 10).divided_by_form(l);
  period pb = period::from_long(s.cfg, 32).divided_by_form(l);
  CHECK(eq_period(pa + pb, period::from_long(s.cfg, 42).divided_by_form(l)));
}

TEST_CASE("equality is a congruence on random triples") {
  setup s;
  std::mt19937_64 rng(23);
  auto rnd = [&]() {
    period r = period::from_long(s.cfg, static_cast<long>(rng() % 11) - 5);
    r = r + s.lam(s.p_id).scaled(padic::from_long(s.cfg, static_cast<long>(rng() % 7) - 3));
    if (rng() % 2) r = r.divided_by_form(linear_form{{generator_registry::eps_id, mpq_class(1)}});
    return r;
  };
  for (int trial = 0; trial < 20; ++trial) {
    period x = rnd(), y = rnd(), z = rnd();
    CHECK(eq_period(x, x));
    if (eq_period(x, y)) CHECK(eq_period(y, x));
    CHECK(eq_period((x + y) * z, x * z + y * z));
  }
}

TEST_CASE("reduced logarithm") {
  setup s;
  // (1+a) with a = 5: log^r = l_{1+a} - 4 plog(6), no log p needed
  character ua = character::generator_power(1, 0, s.ua_id, 1);
  period r = reduced_log(*s.reg, ua);
  period expect = s.lam(s.ua_id) -
                  period::from_scalar(plog(padic::from_long(s.cfg, 6)).pow_int(1))
                      .scaled(padic::from_long(s.cfg, 4));
  CHECK(eq_period(r, expect));

  character eps = character::generator_power(1, 0, generator_registry::eps_id, 1);
  CHECK(eq_period(reduced_log(*s.reg, eps), s.lam(generator_registry::eps_id)));

  character p1 = character::generator_power(1, 0, s.p_id, 1);
  CHECK_THROWS_AS(reduced_log(*s.reg, p1), calc_error);
  period with_logp = reduced_log(*s.reg, p1, true);
  period want = s.lam(s.p_id) - s.lam(log_p_symbol).scaled(padic::from_long(s.cfg, 4));
  CHECK(eq_period(with_logp, want));
}

TEST_CASE("reduced log ignores the log p choice on norm-one characters") {
  setup s;
  character ua = character::generator_power(1, 0, s.ua_id, 1);
  CHECK(eq_period(reduced_log(*s.reg, ua, false), reduced_log(*s.reg, ua, true)));
}

TEST_CASE("galois action on periods") {
  setup s;
  galois_action act(mpq_class(2), {{s.p_id, mpz_class(1)}});
  period le = s.lam(generator_registry::eps_id);
  CHECK(eq_period(le.galois_twisted(act), le.scaled(padic::from_long(s.cfg, 2))));
  period lp = s.lam(s.p_id);
  CHECK(eq_period(lp.galois_twisted(act), lp + le));
}

TEST_CASE("fil truncation is multiplicative after truncation") {
  setup s;
  std::mt19937_64 rng(443);
  for (int trial = 0; trial < 20; ++trial) {
    auto rnd_poly = [&]() {
      period r = period::from_long(s.cfg, static_cast<long>(rng() % 9) - 4);
      r = r + s.lam(generator_registry::eps_id).scaled(padic::from_long(s.cfg, static_cast<long>(rng() % 7) - 3));
      r = r + s.lam(s.p_id).scaled(padic::from_long(s.cfg, static_cast<long>(rng() % 7) - 3));
      if (rng() % 2) r = r * s.lam(s.ua_id);
      return r;
    };
    period x = rnd_poly(), y = rnd_poly();
    for (long n = 1; n <= 3; ++n) {
      period lhs = (x * y).fil_truncate(n);
      period rhs = (x.fil_truncate(n) * y.fil_truncate(n)).fil_truncate(n);
      CHECK(eq_period(lhs, rhs));
    }
  }
}
