#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "padcal/io.hpp"

using namespace padcal;

namespace {

struct setup {
  field_ptr cfg = field_config::make(5, 40);
  std::shared_ptr<generator_registry> regm = std::make_shared<generator_registry>(cfg);
  registry_ptr reg;
  int p_id, zeta_id;
  setup() {
    p_id = regm->add("p", padic::from_long(cfg, 5));
    zeta_id = regm->add("zeta", teichmuller(cfg, 2), true, 4);
    reg = regm;
  }
};

}  // namespace

TEST_CASE("scalar round trip") {
  setup s;
  std::mt19937_64 rng(401);
  for (int t = 0; t < 30; ++t) {
    padic a = padic::from_long(s.cfg, static_cast<long>(rng() % 100000) - 50000);
    if (rng() % 3 == 0) a = a * padic::from_long(s.cfg, 5).pow_int(-(static_cast<long>(rng() % 4)));
    padic b = scalar_from_json(s.cfg, scalar_to_json(a));
    CHECK(a == b);
  }
  CHECK(scalar_from_json(s.cfg, scalar_to_json(padic::zero(s.cfg))).is_zero());
  CHECK(scalar_from_json(s.cfg, json("3/2")) == padic::from_mpq(s.cfg, mpq_class(3, 2)));
  CHECK_THROWS_AS(scalar_from_json(s.cfg, json::parse("{\"x\":1}")), calc_error);
}

TEST_CASE("character and function round trip") {
  setup s;
  character x = character::generator_power(1, 0, s.p_id, mpq_class(3, 4))
                    .mul(character::generator_power(1, 0, generator_registry::eps_id, -2));
  character y = character_from_json(*s.reg, character_to_json(*s.reg, x));
  CHECK(x == y);

  auto seg = polytope::interval(4);
  kfunction f(s.reg, seg);
  f.add_term(x, padic::from_long(s.cfg, 7));
  f.add_term(character::identity(1), padic::from_long(s.cfg, 30));
  f.set_tail(tail_certificate{mpq_class(1, 5), 60});
  kfunction g = function_from_json(s.reg, function_to_json(f));
  CHECK(eq_function(f, g));
  REQUIRE(g.tail().has_value());
  CHECK(g.tail()->bound == 60);

  // compact single-character shorthand
  kfunction h = function_from_json(s.reg, json::parse(R"({"p":"1"})"), seg);
  CHECK(eq_function(h, kfunction::term(s.reg, seg, character::generator_power(1, 0, s.p_id, 1),
                                       padic::one(s.cfg))));
}

TEST_CASE("polytope round trip and names") {
  auto c = polytope::cube(2, 4);
  auto c2 = polytope_from_json(polytope_to_json(*c));
  CHECK(same_polytope(*c, *c2));
  CHECK(same_polytope(*polytope_from_name("cube:2:4"), *c));
  CHECK(same_polytope(*polytope_from_name("interval:4"), *polytope::interval(4)));
  CHECK(same_polytope(*polytope_from_name("simplex:1:4"), *polytope::simplex(1, 4)));
  CHECK_THROWS_AS(polytope_from_name("octagon:2"), calc_error);
}

TEST_CASE("period text and json") {
  setup s;
  period v = period::from_long(s.cfg, 624).divided_by_form(linear_form{{s.p_id, mpq_class(1)}});
  CHECK(period_to_text(*s.reg, v) == "624 / (l_p)");
  json j = period_to_json(*s.reg, v);
  CHECK(j["num"].size() == 1);
  CHECK(j["den"].size() == 1);

  period mix = period::symbol(s.cfg, generator_registry::eps_id).scaled(padic::from_long(s.cfg, 3)) +
               period::from_long(s.cfg, 5);
  CHECK(period_to_text(*s.reg, mix) == "5 + 3*l_eps");
  CHECK(period_to_text(*s.reg, period::zero(s.cfg)) == "0");

  period neg = period::symbol(s.cfg, s.p_id).scaled(-padic::one(s.cfg));
  CHECK(period_to_text(*s.reg, neg) == "-1*l_p");
}

TEST_CASE("registry file") {
  setup s;
  json j = json::parse(R"({"generators":[{"name":"q","base":{"v":1,"u":"1"}},
                          {"name":"mu3","base":{"v":0,"u":"1"},"torsion":true,"order":1}]})");
  // order 1 torsion: base must be 1
  registry_from_json(*s.regm, j);
  CHECK(s.reg->find("q").has_value());
  CHECK(s.reg->at(*s.reg->find("q")).base == padic::from_long(s.cfg, 5));
  CHECK(s.reg->at(*s.reg->find("mu3")).torsion);
  CHECK_THROWS_AS(registry_from_json(*s.regm, json::parse(R"({"generators":[{"name":"q","base":1}]})")),
                  calc_error);  // duplicate name
}

TEST_CASE("path from json") {
  setup s;
  json j = json::parse(R"({"domain":"cube:1","target":"Gm",
                           "data":[{"eps":"1/4"}]})");
  path p = path_from_json(s.reg, j);
  CHECK(p.tgt.kind == target_kind::gm);
  CHECK(p.n == 1);
  CHECK(is_cycle(chain::of(p)));

  json bad = json::parse(R"({"domain":"blob:1","target":"Gm","data":[]})");
  CHECK_THROWS_AS(path_from_json(s.reg, bad), calc_error);
}
