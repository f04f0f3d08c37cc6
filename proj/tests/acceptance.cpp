// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line each.  Exits with the number of failed criteria.

#include <iomanip>
#include <iostream>
#include <random>

#include "padcal/calculus.hpp"
#include "padcal/io.hpp"
#include "padcal/paths.hpp"
#include "padcal/subdivision.hpp"

using namespace padcal;

namespace {

struct world {
  field_ptr cfg;
  std::shared_ptr<generator_registry> regm;
  registry_ptr reg;
  int p_id = -1, zeta_id = -1, q_id = -1, ua_id = -1, ub_id = -1;
  long nk;

  explicit world(unsigned long p, unsigned long m = 40) {
    cfg = field_config::make(p, m);
    nk = static_cast<long>(cfg->n_k());
    regm = std::make_shared<generator_registry>(cfg);
    p_id = regm->add("p", padic::from_long(cfg, static_cast<long>(p)));
    if (p > 2) zeta_id = regm->add("zeta", teichmuller(cfg, 2), true, cfg->n_k());
    q_id = regm->add("q", padic::from_long(cfg, static_cast<long>(p)));
    ua_id = regm->add("one_plus_a", padic::from_long(cfg, 1 + static_cast<long>(p)));
    ub_id = regm->add("one_plus_b", padic::from_long(cfg, 1 + 2 * static_cast<long>(p)));
    reg = regm;
  }

  polytope_ptr seg() const { return polytope::interval(nk); }

  kfunction charf(int id, const mpq_class& q, long c = 1) const {
    return kfunction::term(reg, seg(), character::generator_power(1, 0, id, q),
                           padic::from_long(cfg, c));
  }

  path eps_cycle(const mpq_class& expo) const {
    return make_path(domain_kind::cube, 1, target::gm(),
                     {charf(generator_registry::eps_id, expo)});
  }

  kfunction random_fn(std::mt19937_64& rng, int max_terms = 4) const {
    kfunction f = kfunction::zero(reg, seg());
    int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_terms));
    for (int i = 0; i < n; ++i) {
      character x = character::generator_power(1, 0, p_id,
                                               mpq_class(static_cast<long>(rng() % 7) - 3));
      mpq_class qe(static_cast<long>(rng() % (2 * static_cast<unsigned long>(nk) + 1)) - nk, nk);
      qe.canonicalize();
      x = x.mul(character::generator_power(1, 0, generator_registry::eps_id, qe));
      if (zeta_id >= 0)
        x = x.mul(character::generator_power(1, 0, zeta_id,
                                             mpq_class(static_cast<long>(rng() % cfg->n_k()))));
      long c = static_cast<long>(rng() % (cfg->p * cfg->p * cfg->p)) + 1;
      f = f + kfunction::term(reg, seg(), x, padic::from_long(cfg, c));
    }
    return f;
  }

  character random_simplex_char(std::mt19937_64& rng, int n) const {
    character x(n + 1);
    for (int i = 0; i <= n; ++i) {
      mpq_class qe(static_cast<long>(rng() % (2 * static_cast<unsigned long>(nk) + 1)) - nk, nk);
      qe.canonicalize();
      character slice =
          character::generator_power(1, 0, p_id, mpq_class(static_cast<long>(rng() % 5) - 2))
              .mul(character::generator_power(1, 0, generator_registry::eps_id, qe));
      x = x.mul(promote(slice, n + 1, i));
    }
    return x;
  }
};

int failures = 0;

void report(int idx, const std::string& name, bool pass, const std::string& detail) {
  std::cout << "[" << std::setw(2) << idx << "] " << std::left << std::setw(34) << name
            << (pass ? "PASS" : "FAIL") << "  " << detail << "\n"
            << std::right;
  if (!pass) ++failures;
}

// 1. residue theorem on the exhaustive monomial grid plus randomized sums
bool crit_residue(const world& w, long& cases) {
  long cmax = static_cast<long>(w.cfg->p * w.cfg->p);
  std::mt19937_64 rng(1);
  bool ok = true;
  for (long ap = -2; ap <= 2; ++ap) {
    path g = w.eps_cycle(mpq_class(ap, w.nk));
    for (long d = -3; d <= 3; ++d)
      for (long c = 1; c <= cmax; ++c) {
        laurent f{{d, padic::from_long(w.cfg, c)}};
        ok &= residue_pair(g, f, padic::zero(w.cfg), 0, 2).pass;
        ++cases;
      }
    for (int t = 0; t < 40; ++t) {
      laurent f;
      for (long d = -3; d <= 3; ++d)
        f[d] = padic::from_long(w.cfg, static_cast<long>(rng() % static_cast<unsigned long>(cmax)) + 1);
      ok &= residue_pair(g, f, padic::zero(w.cfg), 0, 2).pass;
      ++cases;
    }
  }
  return ok;
}

// 2. Cauchy / Goursat at valuation >= M - 6
bool crit_cauchy_goursat(const world& w, long& cases) {
  std::mt19937_64 rng(2);
  bool ok = true;
  long p = static_cast<long>(w.cfg->p);
  for (int t = 0; t < 25; ++t) {
    laurent f;
    for (long i = 0; i <= 8; ++i)
      f[i] = padic::from_long(w.cfg, static_cast<long>(rng() % 20) + 1) *
             padic::from_long(w.cfg, p).pow_int(i);
    for (long a0 : {p, 2 * p}) {
      padic a = padic::from_long(w.cfg, a0);
      kfunction gdata = w.charf(generator_registry::eps_id, mpq_class(1, w.nk)) +
                        kfunction::constant(w.reg, w.seg(), a);
      path g = make_path(domain_kind::cube, 1, target::affine(1), {gdata});
      for (long ord = 0; ord <= 3; ++ord) {
        ok &= residue_pair(g, f, a, ord + 1, 6).pass;
        ++cases;
      }
    }
  }
  return ok;
}

bool crit_ftc(const world& w, long& cases, long trials = 200) {
  std::mt19937_64 rng(3);
  bool ok = true;
  for (long t = 0; t < trials; ++t) {
    ok &= ftc_check(w.random_fn(rng)).pass;
    ++cases;
  }
  return ok;
}

bool crit_stokes(const world& w, long& cases, long per_dim = 50) {
  std::mt19937_64 rng(4);
  bool ok = true;
  for (int n = 1; n <= 3; ++n) {
    for (long t = 0; t < per_dim; ++t) {
      auto dom = polytope::cube(n, w.nk);
      kfunction acc = w.random_fn(rng, 2);
      for (int extra = 1; extra < n; ++extra) acc = tensor(acc, w.random_fn(rng, 2));
      bfunction fb(w.reg, dom);
      for (const auto& [x, c] : acc.terms()) fb.add_term(x, to_period(c));
      int omit = static_cast<int>(rng() % static_cast<unsigned>(n));
      std::vector<int> idx;
      for (int i = 0; i < n; ++i)
        if (i != omit) idx.push_back(i);
      form fw = form::zero(w.reg, dom, n - 1);
      fw.add_component(idx, fb);
      ok &= stokes_cube(fw, 6).pass;
      ++cases;
    }
    for (long t = 0; t < per_dim; ++t) {
      std::vector<std::pair<character, period>> terms;
      int nt = 1 + static_cast<int>(rng() % 2);
      for (int k = 0; k < nt; ++k)
        terms.emplace_back(w.random_simplex_char(rng, n),
                           period::from_long(w.cfg, static_cast<long>(rng() % 50) + 1));
      int h0 = static_cast<int>(rng() % static_cast<unsigned>(n));
      int h1 = h0 + 1 + static_cast<int>(rng() % static_cast<unsigned>(n - h0));
      ok &= stokes_simplex(*w.reg, terms, h0, h1, 6).pass;
      ++cases;
    }
  }
  return ok;
}

bool crit_welldef(const world& w, long& cases) {
  std::mt19937_64 rng(5);
  bool ok = true;
  long done = 0;
  while (done < 50) {
    int n = 2 + static_cast<int>(rng() % 2);
    character x = w.random_simplex_char(rng, n);
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j)
        if (!is_torsion(*w.reg, x.slice(i).mul(x.slice(j).inv()))) pairs.emplace_back(i, j);
    if (pairs.size() < 2) continue;
    ++done;
    ++cases;
    long floor = term_scale_floor(*w.reg, x, 0);
    period ref = simplex_char_integral(*w.reg, x, 0, pairs[0]);
    for (size_t k = 1; k < pairs.size(); ++k)
      ok &= eq_period_checked(ref, simplex_char_integral(*w.reg, x, 0, pairs[k]), floor, 4);
  }
  return ok;
}

bool crit_simplex_base(const world& w, long& cases) {
  bool ok = true;
  std::vector<int> ids{-1, w.zeta_id, w.ua_id};
  for (int id : ids) {
    character y = id < 0 ? character::identity(1)
                         : character::generator_power(1, 0, id, 1);
    character yy = promote(y, 2, 0).mul(promote(y, 2, 1));
    period got = simplex_char_integral(*w.reg, yy, 0);
    padic want = padic::from_mpq(w.cfg, mpq_class(w.nk * w.nk, 2)) * evaluate1(*w.reg, y, w.nk);
    ok &= eq_period(got, period::from_scalar(want), 2);
    ++cases;
  }
  return ok;
}

bool crit_gauss(const world& w, long& cases) {
  std::mt19937_64 rng(7);
  bool ok = true;
  for (int t = 0; t < 500; ++t) {
    kfunction f = w.random_fn(rng);
    kfunction g = w.random_fn(rng);
    auto ef = gauss_exponent(f);
    auto e2 = gauss_exponent(f * f);
    ok &= e2.has_value() && *e2 == 2 * (*ef);
    auto efg = gauss_exponent(f * g);
    ok &= efg.has_value();  // fg != 0
    ++cases;
  }
  return ok;
}

bool crit_inversion(const world& w, long& cases) {
  std::mt19937_64 rng(8);
  bool ok = true;
  long m = static_cast<long>(w.cfg->precision);
  for (int t = 0; t < 100; ++t) {
    padic a = padic::from_long(w.cfg, static_cast<long>(rng() % 624) + 1);
    character x = character::generator_power(
        1, 0, generator_registry::eps_id,
        mpq_class(static_cast<long>(rng() % (2 * static_cast<unsigned long>(w.nk) + 1)) - w.nk, w.nk));
    kfunction g = w.random_fn(rng, 2);
    mpq_class eg = *gauss_exponent(g);
    mpz_class floor_eg = eg.get_num() / eg.get_den();
    long lift = std::max(0L, 1 - floor_eg.get_si());
    g = g.scaled(padic::from_long(w.cfg, static_cast<long>(w.cfg->p)).pow_int(lift));
    kfunction one = kfunction::constant(w.reg, w.seg(), padic::one(w.cfg));
    kfunction f = kfunction::term(w.reg, w.seg(), x, a) * (one + g);
    kfunction res = f * invert_unit(f, m + 5) - one;
    for (const auto& [y, c] : res.terms()) {
      (void)y;
      ok &= c.valuation() >= m - 2;
    }
    ++cases;
  }
  return ok;
}

bool crit_equivariance(const world& w, long& cases) {
  std::mt19937_64 rng(9);
  bool ok = true;
  galois_action tw2(mpq_class(2), {{w.p_id, mpz_class(1)},
                                   {w.q_id, mpz_class(1)},
                                   {w.ua_id, mpz_class(0)}});
  galois_action twp(mpq_class(1 + static_cast<long>(w.cfg->p)),
                    {{w.p_id, mpz_class(2)}, {w.q_id, mpz_class(0)}, {w.ua_id, mpz_class(1)}});
  for (int t = 0; t < 100; ++t) {
    kfunction f = w.random_fn(rng);
    ok &= eq_period(integrate_interval(involution(f)), integrate_interval(f), 4);
    for (const auto* act : {&tw2, &twp})
      ok &= eq_period(integrate_interval(galois_twist(f, *act)),
                      integrate_interval(f).galois_twisted(*act), 4);
    ++cases;
  }
  return ok;
}

bool crit_tate(const world& w, long& cases, std::string& detail) {
  bool ok = true;
  long p = static_cast<long>(w.cfg->p);
  padic q = padic::from_long(w.cfg, p);
  target tate = target::tate(q);
  padic one = padic::one(w.cfg);

  // gamma1 -> N_k l_{1+a}
  path g1 = make_path(domain_kind::cube, 1, tate, {w.charf(w.ua_id, 1)});
  period v1 = integrate_invariant_form(g1);
  ok &= eq_period(v1, period::symbol(w.cfg, w.ua_id).scaled(padic::from_long(w.cfg, w.nk)), 2);
  ++cases;

  // gamma2 -> N_k plog(1+a), matching the independent geometric-series value
  padic uaN = padic::from_long(w.cfg, 1 + p).pow_int(w.nk);
  padic pN = padic::from_long(w.cfg, p).pow_int(w.nk);
  padic ca = (one - uaN) / (one - pN);
  padic cb = (uaN - pN) / (one - pN);
  kfunction interp = w.charf(w.p_id, 1).scaled(ca) +
                     kfunction::constant(w.reg, w.seg(), cb);
  path g2 = make_path(domain_kind::cube, 1, tate, {interp});
  period v2 = integrate_invariant_form(g2);
  padic want2 = plog(padic::from_long(w.cfg, 1 + p)) * padic::from_long(w.cfg, w.nk);
  ok &= eq_period(v2, period::from_scalar(want2), 2);
  ++cases;
  {
    // series oracle: -sum C^{i+1} (p^{N(i+1)} - 1)/(i+1), C = (uaN-1)/(uaN-pN)
    padic c = (uaN - one) / (uaN - pN);
    padic series = padic::zero(w.cfg);
    padic cpow = one;
    for (long i = 0; i < static_cast<long>(w.cfg->precision) + 12; ++i) {
      cpow = cpow * c;
      series = series - cpow * (pN.pow_int(i + 1) - one) / padic::from_long(w.cfg, i + 1);
    }
    ok &= eq_period(v2, period::from_scalar(series), 6);
    ++cases;
  }

  // gamma3 -> N_k l_q
  path g3 = make_path(domain_kind::cube, 1, tate, {w.charf(w.q_id, 1)});
  ok &= eq_period(integrate_invariant_form(g3),
                  period::symbol(w.cfg, w.q_id).scaled(padic::from_long(w.cfg, w.nk)), 2);
  ++cases;

  // obstruction verdicts over the (d, a) grid
  for (long a0 : {p, 2 * p}) {
    padic uaN2 = padic::from_long(w.cfg, 1 + a0).pow_int(w.nk);
    padic ca2 = (one - uaN2) / (one - pN);
    padic cb2 = (uaN2 - pN) / (one - pN);
    kfunction interp2 = w.charf(w.p_id, 1).scaled(ca2) +
                        kfunction::constant(w.reg, w.seg(), cb2);
    kfunction sys = w.charf(a0 == p ? w.ua_id : w.ub_id, 1);
    kfunction ratio = sys * invert_unit(interp2, static_cast<long>(w.cfg->precision) + 5);
    path g12 = make_path(domain_kind::cube, 1, tate, {ratio});
    for (long d = -2; d <= 2; ++d) {
      chain cchain = chain::of(g12) + chain::of(g3).scaled(d);
      obstruction_report r = obstruction_certificate(cchain, w.cfg);
      ok &= r.verdict == obstruction_verdict::nonboundary;
      ++cases;
    }
  }
  detail = "period table and obstruction grid";
  return ok;
}

bool crit_subdivision(long& cases) {
  bool ok = true;
  for (int n = 0; n <= 3; ++n) {
    ok &= simplicial_homotopy_check(n).pass;
    ++cases;
    homotopy_report r = cubical_homotopy_check(n);
    ok &= r.pass;
    if (n >= 1) ok &= static_cast<long>(r.phi_terms) == cubical_generator_count(n);
    ++cases;
  }
  return ok;
}

}  // namespace

int main() {
  world w5(5);
  long c;
  std::string detail;

  bool ok;
  c = 0;
  ok = crit_residue(w5, c);
  report(1, "residue theorem", ok, std::to_string(c) + " cases, slack M-2");
  c = 0;
  ok = crit_cauchy_goursat(w5, c);
  report(2, "cauchy/goursat", ok, std::to_string(c) + " cases, val >= M-6");
  c = 0;
  ok = crit_ftc(w5, c);
  report(3, "fundamental theorem of calculus", ok, std::to_string(c) + " random sums");
  c = 0;
  ok = crit_stokes(w5, c);
  report(4, "stokes on cubes and simplices", ok, std::to_string(c) + " instances, n <= 3");
  c = 0;
  ok = crit_welldef(w5, c);
  report(5, "simplex well-definedness", ok, std::to_string(c) + " characters");
  c = 0;
  ok = crit_simplex_base(w5, c);
  report(6, "simplex base value", ok, std::to_string(c) + " cases: N^2 y(N)/2");
  c = 0;
  ok = crit_gauss(w5, c);
  report(7, "gauss norm power-multiplicativity", ok, std::to_string(c) + " pairs");
  c = 0;
  ok = crit_inversion(w5, c);
  report(8, "unit inversion residuals", ok, std::to_string(c) + " units, val >= M-2");
  c = 0;
  ok = crit_equivariance(w5, c);
  report(9, "involution/galois equivariance", ok, std::to_string(c) + " functions");
  c = 0;
  ok = crit_tate(w5, c, detail);
  report(10, "tate periods and obstructions", ok, std::to_string(c) + " rows");
  c = 0;
  ok = crit_subdivision(c);
  report(11, "subdivision homotopies", ok, std::to_string(c) + " identities, counts 3/17/111");

  // 12. the edge configuration p = 2 re-runs suites 1, 3, 4
  {
    world w2(2);
    long c2 = 0;
    bool r1 = crit_residue(w2, c2);
    bool r3 = crit_ftc(w2, c2);
    bool r4 = crit_stokes(w2, c2, 25);
    report(12, "edge configuration p = 2", r1 && r3 && r4,
           std::to_string(c2) + " cases across 1/3/4" +
               (r1 ? "" : " [residue]") + (r3 ? "" : " [ftc]") + (r4 ? "" : " [stokes]"));
  }

  std::cout << (failures == 0 ? "acceptance: all criteria pass"
                              : "acceptance: FAILURES present")
            << "\n";
  return failures;
}
