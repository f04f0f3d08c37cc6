// Command-line surface: compute (integrate / norm / decompose / evaluate),
// verify (the identity suites), and demo (period tables).
//
// Exit codes: 0 success / all checks pass, 1 verification failure,
// 2 parse error, 3 domain error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "padcal/calculus.hpp"
#include "padcal/io.hpp"
#include "padcal/paths.hpp"
#include "padcal/subdivision.hpp"

using namespace padcal;

namespace {

struct app_state {
  unsigned long p = 5;
  unsigned long precision = 40;
  std::string registry_file;
  bool json_mode = false;
  unsigned long long seed = 20260809;
  long a_val = 0;   // base value offset for one_plus_a (default p)
  long q_val = 0;   // Tate parameter (default p)

  field_ptr cfg;
  std::shared_ptr<generator_registry> regm;
  registry_ptr reg;
  int p_id = -1, zeta_id = -1, q_id = -1, ua_id = -1;

  void init() {
    cfg = field_config::make(p, precision);
    regm = std::make_shared<generator_registry>(cfg);
    p_id = regm->add("p", padic::from_long(cfg, static_cast<long>(p)));
    if (p > 2) {
      unsigned long r = 2;
      zeta_id = regm->add("zeta", teichmuller(cfg, r), true, cfg->n_k());
    }
    if (a_val == 0) a_val = static_cast<long>(p);
    if (q_val == 0) q_val = static_cast<long>(p);
    q_id = regm->add("q", padic::from_long(cfg, q_val));
    ua_id = regm->add("one_plus_a", padic::from_long(cfg, 1 + a_val));
    if (!registry_file.empty()) {
      std::ifstream in(registry_file);
      if (!in) throw calc_error(errc::parse_error, "cannot open registry file");
      json j = json::parse(in);
      registry_from_json(*regm, j);
    }
    reg = regm;
  }

  kfunction charf(int id, const mpq_class& q, long c = 1) const {
    auto seg = polytope::interval(static_cast<long>(cfg->n_k()));
    return kfunction::term(reg, seg, character::generator_power(1, 0, id, q),
                           padic::from_long(cfg, c));
  }
};

json parse_json_arg(const std::string& arg) {
  try {
    if (arg == "-") {
      std::stringstream buf;
      buf << std::cin.rdbuf();
      return json::parse(buf.str());
    }
    if (!arg.empty() && arg[0] == '@') {
      std::ifstream in(arg.substr(1));
      if (!in) throw calc_error(errc::parse_error, "cannot open " + arg.substr(1));
      return json::parse(in);
    }
    return json::parse(arg);
  } catch (const json::exception& e) {
    throw calc_error(errc::parse_error, std::string("bad JSON: ") + e.what());
  }
}

struct reporter {
  bool json_mode;
  bool all_pass = true;
  long cases = 0;

  void case_result(const std::string& suite, const json& id, bool pass, const json& extra = {}) {
    ++cases;
    if (!pass) all_pass = false;
    if (json_mode) {
      json line{{"suite", suite}, {"case", id}, {"pass", pass}};
      if (!extra.is_null() && !extra.empty()) line["detail"] = extra;
      std::cout << line.dump() << "\n";
    } else if (!pass) {
      std::cout << "FAIL " << suite << " case " << id.dump() << "\n";
      if (!extra.is_null() && !extra.empty()) std::cout << "  reproducer: " << extra.dump() << "\n";
    }
  }

  int finish(const std::string& suite) {
    if (!json_mode)
      std::cout << suite << ": " << (all_pass ? "pass" : "FAIL") << " (" << cases << " cases)\n";
    return all_pass ? 0 : 1;
  }
};

// --- verify suites -------------------------------------------------------------

path eps_cycle(const app_state& st, const mpq_class& expo) {
  return make_path(domain_kind::cube, 1, target::gm(),
                   {st.charf(generator_registry::eps_id, expo)});
}

int verify_residue(const app_state& st, const std::string& grid, long trials) {
  reporter rep{st.json_mode};
  long nk = static_cast<long>(st.cfg->n_k());
  long cmax = grid == "small" ? static_cast<long>(st.p) : static_cast<long>(st.p * st.p);
  std::mt19937_64 rng(st.seed);
  if (!st.json_mode) std::cout << "seed " << st.seed << "\n";
  for (long ap = -2; ap <= 2; ++ap) {
    path g = eps_cycle(st, mpq_class(ap, nk));
    // exhaustive single monomials c T^d
    for (long d = -3; d <= 3; ++d)
      for (long c = 1; c <= cmax; ++c) {
        laurent f{{d, padic::from_long(st.cfg, c)}};
        pair_report r = residue_pair(g, f, padic::zero(st.cfg), 0, 2);
        rep.case_result("residue", json{{"a'", ap}, {"d", d}, {"c", c}}, r.pass);
      }
    // random multi-term Laurent polynomials
    for (long t = 0; t < trials; ++t) {
      laurent f;
      for (long d = -3; d <= 3; ++d) {
        long c = static_cast<long>(rng() % static_cast<unsigned long>(cmax)) + 1;
        f[d] = padic::from_long(st.cfg, c);
      }
      pair_report r = residue_pair(g, f, padic::zero(st.cfg), 0, 2);
      json repro{{"a'", ap}, {"trial", t}, {"seed", st.seed}};
      rep.case_result("residue", repro, r.pass);
    }
  }
  return rep.finish("residue");
}

int verify_cauchy_goursat(const app_state& st, bool goursat, long trials) {
  reporter rep{st.json_mode};
  long nk = static_cast<long>(st.cfg->n_k());
  std::mt19937_64 rng(st.seed);
  if (!st.json_mode) std::cout << "seed " << st.seed << "\n";
  std::vector<long> centers{static_cast<long>(st.p), 2 * static_cast<long>(st.p)};
  for (long t = 0; t < trials; ++t) {
    laurent f;
    for (long i = 0; i <= 8; ++i) {
      long c = static_cast<long>(rng() % 20) + 1;
      f[i] = padic::from_long(st.cfg, c) *
             padic::from_long(st.cfg, static_cast<long>(st.p)).pow_int(i);
    }
    for (long a0 : centers) {
      padic a = padic::from_long(st.cfg, a0);
      kfunction gdata = st.charf(generator_registry::eps_id, mpq_class(1, nk)) +
                        kfunction::constant(st.reg, polytope::interval(nk), a);
      path g = make_path(domain_kind::cube, 1, target::affine(1), {gdata});
      long omax = goursat ? 3 : 0;
      for (long ord = goursat ? 1 : 0; ord <= omax; ++ord) {
        pair_report r = residue_pair(g, f, a, ord + 1, 6);
        rep.case_result(goursat ? "goursat" : "cauchy",
                        json{{"trial", t}, {"a", a0}, {"order", ord}, {"seed", st.seed}}, r.pass);
      }
    }
  }
  return rep.finish(goursat ? "goursat" : "cauchy");
}

kfunction random_interval_function(const app_state& st, std::mt19937_64& rng, int max_terms = 4) {
  long nk = static_cast<long>(st.cfg->n_k());
  auto seg = polytope::interval(nk);
  kfunction f = kfunction::zero(st.reg, seg);
  int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_terms));
  for (int i = 0; i < n; ++i) {
    character x = character::generator_power(1, 0, st.p_id,
                                             mpq_class(static_cast<long>(rng() % 7) - 3));
    mpq_class qe(static_cast<long>(rng() % (2 * static_cast<unsigned long>(nk) + 1)) - nk, nk);
    qe.canonicalize();
    x = x.mul(character::generator_power(1, 0, generator_registry::eps_id, qe));
    if (st.zeta_id >= 0)
      x = x.mul(character::generator_power(1, 0, st.zeta_id,
                                           mpq_class(static_cast<long>(rng() % st.cfg->n_k()))));
    f = f + kfunction::term(st.reg, seg, x,
                            padic::from_long(st.cfg, static_cast<long>(rng() % 3124) + 1));
  }
  return f;
}

int verify_ftc(const app_state& st, long trials) {
  reporter rep{st.json_mode};
  std::mt19937_64 rng(st.seed);
  if (!st.json_mode) std::cout << "seed " << st.seed << "\n";
  for (long t = 0; t < trials; ++t) {
    kfunction f = random_interval_function(st, rng);
    stokes_report r = ftc_check(f);
    rep.case_result("ftc", json{{"trial", t}, {"seed", st.seed}}, r.pass,
                    r.pass ? json{} : function_to_json(f));
  }
  return rep.finish("ftc");
}

int verify_fubini(const app_state& st, long trials) {
  reporter rep{st.json_mode};
  std::mt19937_64 rng(st.seed);
  if (!st.json_mode) std::cout << "seed " << st.seed << "\n";
  for (long t = 0; t < trials; ++t) {
    kfunction f = random_interval_function(st, rng, 3);
    kfunction g = random_interval_function(st, rng, 3);
    period prod = integrate_interval(f) * integrate_interval(g);
    period joint = integrate_cube_function(tensor(f, g));
    rep.case_result("fubini", json{{"trial", t}, {"seed", st.seed}},
                    eq_period(prod, joint, 4));
  }
  return rep.finish("fubini");
}

character random_simplex_character(const app_state& st, std::mt19937_64& rng, int n) {
  long nk = static_cast<long>(st.cfg->n_k());
  character x(n + 1);
  for (int i = 0; i <= n; ++i) {
    mpq_class qe(static_cast<long>(rng() % (2 * static_cast<unsigned long>(nk) + 1)) - nk, nk);
    qe.canonicalize();
    character slice =
        character::generator_power(1, 0, st.p_id, mpq_class(static_cast<long>(rng() % 5) - 2))
            .mul(character::generator_power(1, 0, generator_registry::eps_id, qe));
    x = x.mul(promote(slice, n + 1, i));
  }
  return x;
}

int verify_stokes(const app_state& st, const std::string& domain, int nmax, long trials) {
  reporter rep{st.json_mode};
  std::mt19937_64 rng(st.seed);
  long nk = static_cast<long>(st.cfg->n_k());
  if (!st.json_mode) std::cout << "seed " << st.seed << "\n";
  for (int n = 1; n <= nmax; ++n) {
    for (long t = 0; t < trials; ++t) {
      if (domain == "cube") {
        auto dom = polytope::cube(n, nk);
        kfunction acc = random_interval_function(st, rng, 2);
        for (int extra = 1; extra < n; ++extra)
          acc = tensor(acc, random_interval_function(st, rng, 2));
        bfunction fb(st.reg, dom);
        for (const auto& [x, c] : acc.terms()) fb.add_term(x, to_period(c));
        int omit = static_cast<int>(rng() % static_cast<unsigned>(n));
        std::vector<int> idx;
        for (int i = 0; i < n; ++i)
          if (i != omit) idx.push_back(i);
        form w = form::zero(st.reg, dom, n - 1);
        w.add_component(idx, fb);
        stokes_report r = stokes_cube(w, 6);
        rep.case_result("stokes-cube", json{{"n", n}, {"trial", t}, {"seed", st.seed}}, r.pass);
      } else {
        std::vector<std::pair<character, period>> terms;
        int nt = 1 + static_cast<int>(rng() % 2);
        for (int k = 0; k < nt; ++k)
          terms.emplace_back(random_simplex_character(st, rng, n),
                             period::from_long(st.cfg, static_cast<long>(rng() % 50) + 1));
        int h0 = static_cast<int>(rng() % static_cast<unsigned>(n));
        int h1 = h0 + 1 + static_cast<int>(rng() % static_cast<unsigned>(n - h0));
        stokes_report r = stokes_simplex(*st.reg, terms, h0, h1, 6);
        rep.case_result("stokes-simplex", json{{"n", n}, {"trial", t}, {"seed", st.seed}}, r.pass);
      }
    }
  }
  return rep.finish("stokes-" + domain);
}

int verify_simplex_welldef(const app_state& st, long trials) {
  reporter rep{st.json_mode};
  std::mt19937_64 rng(st.seed);
  if (!st.json_mode) std::cout << "seed " << st.seed << "\n";
  long done = 0;
  while (done < trials) {
    int n = 2 + static_cast<int>(rng() % 2);
    character x = random_simplex_character(st, rng, n);
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j)
        if (!is_torsion(*st.reg, x.slice(i).mul(x.slice(j).inv()))) pairs.emplace_back(i, j);
    if (pairs.size() < 2) continue;
    ++done;
    long floor = term_scale_floor(*st.reg, x, 0);
    period ref = simplex_char_integral(*st.reg, x, 0, pairs[0]);
    bool pass = true;
    for (size_t k = 1; k < pairs.size(); ++k)
      if (!eq_period_checked(ref, simplex_char_integral(*st.reg, x, 0, pairs[k]), floor, 4))
        pass = false;
    rep.case_result("simplex-welldef",
                    json{{"trial", done}, {"n", n}, {"pairs", pairs.size()}, {"seed", st.seed}},
                    pass, pass ? json{} : character_to_json(*st.reg, x));
  }
  return rep.finish("simplex-welldef");
}

int verify_subdivision(const app_state& st, const std::string& kind, int nmax) {
  reporter rep{st.json_mode};
  for (int n = 0; n <= nmax; ++n) {
    homotopy_report r =
        kind == "cubical" ? cubical_homotopy_check(n) : simplicial_homotopy_check(n);
    json detail{{"phi_terms", r.phi_terms}, {"residual_terms", r.residual.size()}};
    rep.case_result("subdivision-" + kind, json{{"n", n}}, r.pass, detail);
    if (!st.json_mode)
      std::cout << "  n=" << n << " generator maps " << r.phi_terms << " residual "
                << r.residual.size() << "\n";
    if (kind == "cubical" && n >= 1) {
      bool count_ok =
          static_cast<long>(r.phi_terms) == cubical_generator_count(n);
      rep.case_result("subdivision-count", json{{"n", n}}, count_ok,
                      json{{"expected", cubical_generator_count(n)}, {"got", r.phi_terms}});
    }
  }
  return rep.finish("subdivision-" + kind);
}

int verify_equivariance(const app_state& st, long trials) {
  reporter rep{st.json_mode};
  std::mt19937_64 rng(st.seed);
  if (!st.json_mode) std::cout << "seed " << st.seed << "\n";
  galois_action tw2(mpq_class(2), {{st.p_id, mpz_class(1)},
                                   {st.q_id, mpz_class(1)},
                                   {st.ua_id, mpz_class(0)}});
  galois_action twp(mpq_class(1 + static_cast<long>(st.p)), {{st.p_id, mpz_class(2)},
                                                             {st.q_id, mpz_class(0)},
                                                             {st.ua_id, mpz_class(1)}});
  for (long t = 0; t < trials; ++t) {
    kfunction f = random_interval_function(st, rng);
    bool inv_ok = eq_period(integrate_interval(involution(f)), integrate_interval(f), 4);
    rep.case_result("equivariance-involution", json{{"trial", t}, {"seed", st.seed}}, inv_ok,
                    inv_ok ? json{} : function_to_json(f));
    int which = 0;
    for (const auto* act : {&tw2, &twp}) {
      period lhs = integrate_interval(galois_twist(f, *act));
      period rhs = integrate_interval(f).galois_twisted(*act);
      bool ok = eq_period(lhs, rhs, 4);
      rep.case_result("equivariance-galois",
                      json{{"trial", t}, {"twist", which++ == 0 ? 2 : 1 + static_cast<long>(st.p)},
                           {"seed", st.seed}},
                      ok, ok ? json{} : function_to_json(f));
    }
  }
  return rep.finish("equivariance");
}

// --- demos -----------------------------------------------------------------------

int demo_tate(const app_state& st) {
  long nk = static_cast<long>(st.cfg->n_k());
  padic q = padic::from_long(st.cfg, st.q_val);
  target tate = target::tate(q);
  path g1 = make_path(domain_kind::cube, 1, tate, {st.charf(st.ua_id, 1)});
  padic uaN = padic::from_long(st.cfg, 1 + st.a_val).pow_int(nk);
  padic pN = padic::from_long(st.cfg, static_cast<long>(st.p)).pow_int(nk);
  padic one = padic::one(st.cfg);
  padic ca = (one - uaN) / (one - pN);
  padic cb = (uaN - pN) / (one - pN);
  kfunction interp =
      st.charf(st.p_id, 1).scaled(ca) +
      kfunction::constant(st.reg, polytope::interval(nk), cb);
  path g2 = make_path(domain_kind::cube, 1, tate, {interp});
  path g3 = make_path(domain_kind::cube, 1, tate, {st.charf(st.q_id, 1)});
  json rows = json::array();
  const char* names[3] = {"gamma1", "gamma2", "gamma3"};
  const path* ps[3] = {&g1, &g2, &g3};
  for (int i = 0; i < 3; ++i) {
    period v = integrate_invariant_form(*ps[i]);
    rows.push_back(json{{"cycle", names[i]},
                        {"period", period_to_text(*st.reg, v)},
                        {"json", period_to_json(*st.reg, v)}});
    if (!st.json_mode)
      std::cout << names[i] << ": " << period_to_text(*st.reg, v) << "\n";
  }
  if (st.json_mode) std::cout << json{{"demo", "tate-periods"}, {"rows", rows}}.dump() << "\n";
  return 0;
}

int demo_gm_cycles(const app_state& st) {
  long nk = static_cast<long>(st.cfg->n_k());
  json rows = json::array();
  for (long ap = -3; ap <= 3; ++ap) {
    path g = eps_cycle(st, mpq_class(ap, nk));
    period r = rot(g, padic::zero(st.cfg));
    rows.push_back(json{{"a'", ap}, {"rot", period_to_text(*st.reg, r)}});
    if (!st.json_mode)
      std::cout << "a' = " << ap << "  rot = " << period_to_text(*st.reg, r) << "\n";
  }
  if (st.json_mode) std::cout << json{{"demo", "gm-cycles"}, {"rows", rows}}.dump() << "\n";
  return 0;
}

int demo_obstruction(const app_state& st) {
  long nk = static_cast<long>(st.cfg->n_k());
  padic q = padic::from_long(st.cfg, st.q_val);
  target tate = target::tate(q);
  padic uaN = padic::from_long(st.cfg, 1 + st.a_val).pow_int(nk);
  padic pN = padic::from_long(st.cfg, static_cast<long>(st.p)).pow_int(nk);
  padic one = padic::one(st.cfg);
  padic ca = (one - uaN) / (one - pN);
  padic cb = (uaN - pN) / (one - pN);
  kfunction interp = st.charf(st.p_id, 1).scaled(ca) +
                     kfunction::constant(st.reg, polytope::interval(nk), cb);
  long budget = static_cast<long>(st.cfg->precision) + 5;
  kfunction ratio = st.charf(st.ua_id, 1) * invert_unit(interp, budget);
  path g12 = make_path(domain_kind::cube, 1, tate, {ratio});
  path g3 = make_path(domain_kind::cube, 1, tate, {st.charf(st.q_id, 1)});
  json rows = json::array();
  for (long d = -2; d <= 2; ++d) {
    chain c = chain::of(g12) + chain::of(g3).scaled(d);
    obstruction_report r = obstruction_certificate(c, st.cfg);
    const char* verdict =
        r.verdict == obstruction_verdict::nonboundary ? "NONBOUNDARY" : "INCONCLUSIVE";
    rows.push_back(json{{"d", d},
                        {"a", st.a_val},
                        {"value", period_to_text(*st.reg, r.value)},
                        {"verdict", verdict}});
    if (!st.json_mode)
      std::cout << "d = " << d << ", a = " << st.a_val << ": " << verdict << "  ("
                << period_to_text(*st.reg, r.value) << ")\n";
  }
  // the trivial combination is inconclusive
  chain zero;
  zero.n = 1;
  obstruction_report r0 = obstruction_certificate(zero, st.cfg);
  const char* verdict0 =
      r0.verdict == obstruction_verdict::nonboundary ? "NONBOUNDARY" : "INCONCLUSIVE";
  rows.push_back(json{{"d", 0}, {"a", 0}, {"value", "0"}, {"verdict", verdict0}});
  if (!st.json_mode) std::cout << "d = 0, a = 0: " << verdict0 << "  (0)\n";
  if (st.json_mode) std::cout << json{{"demo", "obstruction"}, {"rows", rows}}.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact symbolic path calculus over Q_p"};
  app.require_subcommand(1);

  app_state st;
  app.add_option("--p", st.p, "prime of the base field");
  app.add_option("--precision", st.precision, "relative precision M");
  app.add_option("--registry", st.registry_file, "extra generator registry (JSON)");
  app.add_flag("--json", st.json_mode, "NDJSON report stream");
  app.add_option("--seed", st.seed, "seed for randomised suites");
  app.add_option("--a", st.a_val, "offset a for the one_plus_a generator (default p)");
  app.add_option("--qval", st.q_val, "Tate parameter q (default p)");

  // compute commands
  auto* integ = app.add_subcommand("integrate", "integrate a function");
  bool interval_flag = false;
  std::string domain_name, fn_arg;
  int simplex_h = 0;
  integ->add_flag("--interval", interval_flag, "integrate over [0, N_k]");
  integ->add_option("--domain", domain_name, "cube:n or simplex:n");
  auto* fn_opt = integ->add_option("--fn", fn_arg, "function JSON (inline, @file, or -)");
  integ->add_option("--form", fn_arg, "alias of --fn for form payloads")->excludes(fn_opt);
  integ->add_option("--basis-h", simplex_h, "omitted index of the simplex volume form");

  auto* norm = app.add_subcommand("norm", "Gauss norm exponent");
  std::string norm_poly, norm_fn;
  norm->add_option("--polytope", norm_poly, "polytope name or JSON")->required();
  norm->add_option("--fn", norm_fn, "function JSON")->required();

  auto* deco = app.add_subcommand("decompose", "multiplicative unit decomposition");
  std::string deco_fn, deco_poly;
  deco->add_option("--fn", deco_fn, "function JSON")->required();
  deco->add_option("--polytope", deco_poly, "polytope name or JSON");

  auto* eval = app.add_subcommand("evaluate", "point evaluation");
  std::string eval_fn, eval_at, eval_mode = "iu";
  eval->add_option("--fn", eval_fn, "function JSON")->required();
  eval->add_option("--at", eval_at, "comma-separated rational point")->required();
  eval->add_option("--mode", eval_mode, "iu or ip");

  // verify
  auto* verify = app.add_subcommand("verify", "identity suites");
  std::string suite, grid = "small", stokes_domain = "cube", sub_kind = "cubical";
  long trials = 50;
  int vn = 3;
  verify->add_option("suite", suite,
                     "residue|cauchy|goursat|ftc|fubini|stokes|simplex-welldef|subdivision|"
                     "equivariance")
      ->required();
  verify->add_option("--grid", grid, "small or full coefficient grid");
  verify->add_option("--trials", trials, "random trials");
  verify->add_option("--domain", stokes_domain, "cube or simplex (stokes)");
  verify->add_option("--kind", sub_kind, "simplicial or cubical (subdivision)");
  verify->add_option("--n", vn, "maximal dimension");

  // demo
  auto* demo = app.add_subcommand("demo", "period tables");
  std::string demo_name;
  demo->add_option("name", demo_name, "tate-periods|gm-cycles|obstruction")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    st.init();
    if (integ->parsed()) {
      json fj = parse_json_arg(fn_arg);
      period v(st.cfg);
      if (interval_flag || domain_name.empty() || domain_name == "interval") {
        kfunction f = function_from_json(st.reg, fj,
                                         polytope::interval(static_cast<long>(st.cfg->n_k())));
        v = integrate_interval(f);
      } else if (domain_name.rfind("cube:", 0) == 0) {
        int n = std::stoi(domain_name.substr(5));
        kfunction f = function_from_json(
            st.reg, fj, polytope::cube(n, static_cast<long>(st.cfg->n_k())));
        v = integrate_cube_function(f);
      } else if (domain_name.rfind("simplex:", 0) == 0) {
        int n = std::stoi(domain_name.substr(8));
        std::vector<simplex_form_term> terms;
        json tj = fj.contains("terms") ? fj["terms"] : json::array({json{{"char", fj}}});
        for (const auto& t : tj) {
          simplex_form_term term;
          term.x = character_from_json(*st.reg, t.at("char"));
          term.coeff = period::from_scalar(
              t.contains("coeff") ? scalar_from_json(st.cfg, t["coeff"]) : padic::one(st.cfg));
          term.h = simplex_h;
          if (term.x.arity() != n + 1)
            throw calc_error(errc::arity_mismatch, "simplex characters want arity n+1");
          terms.push_back(std::move(term));
        }
        v = integrate_simplex(*st.reg, terms);
      } else {
        throw calc_error(errc::parse_error, "unknown domain " + domain_name);
      }
      std::cout << period_to_text(*st.reg, v) << "\n";
      if (st.json_mode) std::cout << period_to_json(*st.reg, v).dump() << "\n";
      return 0;
    }
    if (norm->parsed()) {
      polytope_ptr dom = norm_poly.front() == '{' ? polytope_from_json(parse_json_arg(norm_poly))
                                                  : polytope_from_name(norm_poly);
      kfunction f = function_from_json(st.reg, parse_json_arg(norm_fn), dom);
      auto e = gauss_exponent(f);
      if (e)
        std::cout << "exponent " << e->get_str() << "\n";
      else
        std::cout << "exponent +inf (zero function)\n";
      if (st.json_mode)
        std::cout << json{{"exponent", e ? json(e->get_str()) : json(nullptr)}}.dump() << "\n";
      return 0;
    }
    if (deco->parsed()) {
      polytope_ptr dom = deco_poly.empty()
                             ? polytope::interval(static_cast<long>(st.cfg->n_k()))
                             : (deco_poly.front() == '{'
                                    ? polytope_from_json(parse_json_arg(deco_poly))
                                    : polytope_from_name(deco_poly));
      kfunction f = function_from_json(st.reg, parse_json_arg(deco_fn), dom);
      auto d = unit_decompose(f);
      if (!d) {
        std::cout << "NotUnit\n";
        if (st.json_mode) std::cout << json{{"unit", false}}.dump() << "\n";
        return 0;
      }
      std::cout << "scalar " << d->scalar.str() << "\n";
      std::cout << "character " << character_to_json(*st.reg, d->char_part).dump() << "\n";
      std::cout << "series " << function_to_json(d->g_part)["terms"].dump() << "\n";
      if (st.json_mode)
        std::cout << json{{"unit", true},
                          {"scalar", scalar_to_json(d->scalar)},
                          {"character", character_to_json(*st.reg, d->char_part)},
                          {"g", function_to_json(d->g_part)}}
                         .dump()
                  << "\n";
      return 0;
    }
    if (eval->parsed()) {
      kfunction f = function_from_json(st.reg, parse_json_arg(eval_fn),
                                       polytope::interval(static_cast<long>(st.cfg->n_k())));
      qvec at;
      std::stringstream ss(eval_at);
      std::string tok;
      while (std::getline(ss, tok, ',')) at.push_back(parse_rational(tok));
      if (eval_mode == "iu") {
        padic v = evaluate_iu(f, at);
        std::cout << v.str() << "\n";
        if (st.json_mode) std::cout << scalar_to_json(v).dump() << "\n";
      } else {
        auto e = evaluate_ip(f, at);
        std::cout << "exponent " << (e ? e->get_str() : std::string("+inf")) << "\n";
        if (st.json_mode)
          std::cout << json{{"exponent", e ? json(e->get_str()) : json(nullptr)}}.dump() << "\n";
      }
      return 0;
    }
    if (verify->parsed()) {
      if (suite == "residue") return verify_residue(st, grid, std::min(trials, 1000L));
      if (suite == "cauchy") return verify_cauchy_goursat(st, false, trials);
      if (suite == "goursat") return verify_cauchy_goursat(st, true, trials);
      if (suite == "ftc") return verify_ftc(st, trials);
      if (suite == "fubini") return verify_fubini(st, trials);
      if (suite == "stokes") return verify_stokes(st, stokes_domain, std::min(vn, 3), trials);
      if (suite == "simplex-welldef") return verify_simplex_welldef(st, trials);
      if (suite == "subdivision") return verify_subdivision(st, sub_kind, std::min(vn, 3));
      if (suite == "equivariance") return verify_equivariance(st, trials);
      throw calc_error(errc::parse_error, "unknown suite " + suite);
    }
    if (demo->parsed()) {
      if (demo_name == "tate-periods") return demo_tate(st);
      if (demo_name == "gm-cycles") return demo_gm_cycles(st);
      if (demo_name == "obstruction") return demo_obstruction(st);
      throw calc_error(errc::parse_error, "unknown demo " + demo_name);
    }
  } catch (const calc_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == errc::parse_error ? 2 : 3;
  } catch (const json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
