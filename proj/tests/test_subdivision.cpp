#include <catch2/catch_amalgamated.hpp>

#include "padcal/subdivision.hpp"

using namespace padcal;

TEST_CASE("cubical generator counts") {
  CHECK(cubical_generator_count(0) == 0);
  CHECK(cubical_generator_count(1) == 3);
  CHECK(cubical_generator_count(2) == 17);
  CHECK(cubical_generator_count(3) == 111);
  // closed form sum 2^{n-i} (2^i + 1) n!/i!
  for (int n = 1; n <= 3; ++n) {
    mpq_class total = 0;
    mpz_class fact_n = 1;
    for (int i = 1; i <= n; ++i) fact_n *= i;
    mpz_class fact_i = 1;
    for (int i = 1; i <= n; ++i) {
      fact_i *= i;
      mpq_class part((mpz_class(1) << (n - i)) * ((mpz_class(1) << i) + 1) * fact_n, fact_i);
      part.canonicalize();
      total += part;
    }
    CHECK(total == cubical_generator_count(n));
  }
  CHECK(static_cast<long>(cubical_homotopy_maps(3).size()) == 111);
}

TEST_CASE("cubical B") {
  formal_chain b1 = cubical_b(1);
  REQUIRE(b1.size() == 2);
  // terms f(t/2) and f((t+1)/2)
  formal_map lower;
  lower.src = 1;
  lower.comps.push_back(qp_scale(qp_var(1, 0), mpq_class(1, 2)));
  formal_map upper;
  upper.src = 1;
  upper.comps.push_back(
      qp_add(qp_scale(qp_var(1, 0), mpq_class(1, 2)), qp_const(1, mpq_class(1, 2))));
  CHECK(b1.terms.count(lower) == 1);
  CHECK(b1.terms.count(upper) == 1);

  CHECK(cubical_b(2).size() == 4);
  CHECK(cubical_b(0).size() == 1);
}

TEST_CASE("cubical phi structure") {
  // n = 1, j = 1 term is f((1 + (2 t1 - 1) t2)/2)
  auto maps = cubical_homotopy_maps(1);
  REQUIRE(maps.size() == 3);
  qpoly expect;  // 1/2 + t1 t2 - t2/2
  expect[{0, 0}] = mpq_class(1, 2);
  expect[{1, 1}] = 1;
  expect[{0, 1}] = mpq_class(-1, 2);
  CHECK(maps[0].comps[0] == expect);

  // chi_1(1) = 1 (h = 1 branch)
  CHECK(cubical_sign_exponent(1, 1) == 1);
  CHECK(cubical_sign_exponent(1, 2) == 0);
  CHECK(cubical_sign_exponent(1, 3) == 0);
}

TEST_CASE("cubical boundary squares to zero") {
  for (int n = 1; n <= 3; ++n) {
    formal_chain c = cubical_phi(n);  // some nontrivial chain of (n+1)-maps
    if (n >= 2) {
      formal_chain dd = cubical_boundary(cubical_boundary(c, n + 1), n);
      CHECK(dd.is_zero());
    }
    formal_chain idc = formal_chain::of(formal_map::identity(n));
    if (n >= 2) CHECK(cubical_boundary(cubical_boundary(idc, n), n - 1).is_zero());
  }
}

TEST_CASE("B is a chain map") {
  for (int n = 1; n <= 3; ++n) {
    // cubical
    formal_chain idc = formal_chain::of(formal_map::identity(n));
    formal_chain db;
    {
      formal_chain b = cubical_b(n);
      db = cubical_boundary(b, n);
    }
    formal_chain bd;
    formal_chain faces = cubical_boundary(idc, n);
    formal_chain bprev = cubical_b(n - 1);
    for (const auto& [face, w] : faces.terms)
      for (const auto& [bmap, bw] : bprev.terms) bd.add(face.compose(bmap), w * bw);
    bd.drop_degenerate();
    CHECK((db - bd).is_zero());

    // simplicial
    formal_chain ids = formal_chain::of(formal_map::identity(n + 1));
    formal_chain dbs = simplicial_boundary(simplicial_b(n), n + 1);
    formal_chain bds;
    formal_chain sfaces = simplicial_boundary(ids, n + 1);
    formal_chain sbprev = simplicial_b(n - 1);
    for (const auto& [face, w] : sfaces.terms)
      for (const auto& [bmap, bw] : sbprev.terms) bds.add(face.compose(bmap), w * bw);
    CHECK((dbs - bds).is_zero());
  }
}

TEST_CASE("simplicial B structure") {
  formal_chain b0 = simplicial_b(0);
  REQUIRE(b0.size() == 1);
  CHECK(b0.terms.begin()->first == formal_map::identity(1));

  formal_chain b1 = simplicial_b(1);
  CHECK(b1.size() == 2);
  for (const auto& [m, w] : b1.terms) {
    (void)w;
    for (const auto& comp : m.comps)
      for (const auto& [e, c] : comp) {
        (void)e;
        CHECK((c == 0 || c == 1 || c == mpq_class(1, 2)));
      }
  }
  for (int n = 1; n <= 3; ++n) {
    long fact = 1;
    for (int i = 2; i <= n + 1; ++i) fact *= i;
    CHECK(static_cast<long>(simplicial_b(n).size()) == fact);
  }
}

TEST_CASE("simplicial phi structure") {
  // term counts: sum over i of the number of injections [i] -> [n+1]
  for (int n = 0; n <= 3; ++n) {
    long count = 0;
    for (int i = 0; i <= n; ++i) count += static_cast<long>(injections(i, n + 1).size());
    CHECK(static_cast<long>(simplicial_phi(n).size()) == count);
  }
  // all matrix entries are rationals from the nested cone grid
  formal_chain phi2 = simplicial_phi(2);
  for (const auto& [m, w] : phi2.terms) {
    (void)w;
    for (const auto& comp : m.comps)
      for (const auto& [e, c] : comp) {
        (void)e;
        bool ok = c == 0 || c == 1;
        for (int d = 2; d <= 6; ++d) ok = ok || c == mpq_class(1, d);
        CHECK(ok);
      }
  }
}

TEST_CASE("simplicial homotopy identity") {
  for (int n = 0; n <= 3; ++n) {
    homotopy_report rep = simplicial_homotopy_check(n);
    INFO("n = " << n << " residual terms " << rep.residual.size());
    CHECK(rep.pass);
  }
}

TEST_CASE("cubical homotopy identity") {
  for (int n = 0; n <= 3; ++n) {
    homotopy_report rep = cubical_homotopy_check(n);
    INFO("n = " << n << " residual terms " << rep.residual.size());
    CHECK(rep.pass);
    if (n == 3) CHECK(rep.phi_terms == 111);
  }
}
