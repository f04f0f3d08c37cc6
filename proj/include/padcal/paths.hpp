#pragma once

// Analytic paths from normalised cubes and simplices into the supported
// targets, integer chains with the cubical/simplicial boundary, rotation
// numbers, the residue/Cauchy evaluators, and boundary-obstruction
// certificates.

#include <map>
#include <optional>
#include <vector>

#include "padcal/calculus.hpp"
#include "padcal/funcring.hpp"

namespace padcal {

enum class target_kind { disc, open_disc, affine, annulus, unit_circle, gm, tate };

/// Target space of a path; radii are recorded as exponents, radius = p^e.
struct target {
  target_kind kind = target_kind::affine;
  int arity = 1;
  std::vector<mpq_class> radius_exp;  // disc/open_disc, one exponent per coordinate
  mpq_class inner_exp, outer_exp;     // annulus: p^inner <= |T| <= p^outer
  padic tate_q;

  static target affine(int m = 1) { return target{target_kind::affine, m, {}, 0, 0, {}}; }
  static target gm() { return target{target_kind::gm, 1, {}, 0, 0, {}}; }
  static target unit_circle() { return target{target_kind::unit_circle, 1, {}, 0, 0, {}}; }
  static target disc(std::vector<mpq_class> exps) {
    target t{target_kind::disc, static_cast<int>(exps.size()), std::move(exps), 0, 0, {}};
    return t;
  }
  static target annulus(mpq_class inner, mpq_class outer) {
    return target{target_kind::annulus, 1, {}, std::move(inner), std::move(outer), {}};
  }
  static target tate(padic q) {
    if (q.is_zero() || q.valuation() < 1)
      throw calc_error(errc::constraint_violation, "Tate parameter needs v(q) >= 1");
    return target{target_kind::tate, 1, {}, 0, 0, std::move(q)};
  }

  friend bool operator==(const target& a, const target& b) {
    if (a.kind != b.kind || a.arity != b.arity) return false;
    if (a.kind == target_kind::tate) return a.tate_q == b.tate_q;
    return a.radius_exp == b.radius_exp && a.inner_exp == b.inner_exp &&
           a.outer_exp == b.outer_exp;
  }
};

enum class domain_kind { cube, simplex };

/// Analytic path: function data subject to the target's norm and unit
/// constraints, justified by the adjoint property of the realisation.
struct path {
  domain_kind dom = domain_kind::cube;
  int n = 1;
  polytope_ptr domain;
  target tgt;
  std::vector<kfunction> data;
};

inline polytope_ptr path_domain(const field_ptr& cfg, domain_kind k, int n) {
  long nk = static_cast<long>(cfg->n_k());
  if (k == domain_kind::cube) return n == 0 ? polytope::cube(0, 1) : polytope::cube(n, nk);
  return polytope::simplex(n, nk);
}

inline path make_path(domain_kind dom, int n, const target& tgt, std::vector<kfunction> data) {
  if (static_cast<int>(data.size()) != tgt.arity)
    throw calc_error(errc::constraint_violation, "path data arity mismatch");
  const auto& reg = data.front().registry();
  path p{dom, n, path_domain(reg->config(), dom, n), tgt, std::move(data)};
  for (int j = 0; j < tgt.arity; ++j) {
    const kfunction& f = p.data[static_cast<size_t>(j)];
    if (!same_polytope(*f.domain(), *p.domain) && !same_polytope(*f.thick_domain(), *thick_of(p.domain)))
      throw calc_error(errc::polytope_mismatch, "path data lives on the wrong domain");
    auto e = gauss_exponent(f);
    switch (tgt.kind) {
      case target_kind::affine:
        break;
      case target_kind::disc:
        if (e && *e < -tgt.radius_exp[static_cast<size_t>(j)])
          throw calc_error(errc::constraint_violation, "disc bound ||f|| <= d violated");
        break;
      case target_kind::open_disc:
        if (e && *e <= -tgt.radius_exp[static_cast<size_t>(j)])
          throw calc_error(errc::constraint_violation, "open disc bound ||f|| < d violated");
        break;
      case target_kind::unit_circle:
      case target_kind::gm:
      case target_kind::annulus:
      case target_kind::tate: {
        auto d = unit_decompose(f);
        if (!d)
          throw calc_error(errc::constraint_violation,
                           "target needs a unit: no strictly dominant term");
        mpq_class fe = *e;
        mpq_class finv = -(mpq_class(d->scalar.valuation()) +
                           f.char_weight(d->char_part));  // exponent of ||f||
        // exponent of ||f^{-1}||: from a^{-1} x^{-1} with ||1+g|| = 1
        mpq_class inve = mpq_class(-d->scalar.valuation()) + f.char_weight(d->char_part.inv());
        (void)finv;
        if (tgt.kind == target_kind::unit_circle && (fe != 0 || inve != 0))
          throw calc_error(errc::constraint_violation, "unit circle needs ||f|| = ||f^-1|| = 1");
        if (tgt.kind == target_kind::annulus) {
          if (fe < -tgt.outer_exp)
            throw calc_error(errc::constraint_violation, "annulus outer bound violated");
          if (inve < tgt.inner_exp)
            throw calc_error(errc::constraint_violation, "annulus inner bound violated");
        }
        break;
      }
    }
  }
  return p;
}

/// Values of 0-dimensional paths agree; Tate targets compare modulo q^Z.
inline bool point_values_equal(const target& tgt, const padic& a, const padic& b,
                               unsigned long slack = 2) {
  if (tgt.kind != target_kind::tate) return eq_to_precision(a, b, slack);
  if (a.is_zero() || b.is_zero()) return a.is_zero() == b.is_zero();
  padic ratio = a / b;
  long vq = tgt.tate_q.valuation();
  long vr = ratio.valuation();
  if (vr % vq != 0) return false;
  padic adj = ratio * tgt.tate_q.pow_int(-vr / vq);
  return eq_to_precision(adj, padic::one(a.config()), slack);
}

inline bool path_equal(const path& a, const path& b, unsigned long slack = 2) {
  if (a.dom != b.dom || a.n != b.n || !(a.tgt == b.tgt)) return false;
  if (a.n == 0 && a.tgt.arity == 1) {
    padic va = evaluate_iu(a.data[0], qvec(static_cast<size_t>(a.domain->ambient_dim()), 0));
    padic vb = evaluate_iu(b.data[0], qvec(static_cast<size_t>(b.domain->ambient_dim()), 0));
    return point_values_equal(a.tgt, va, vb, slack);
  }
  for (size_t j = 0; j < a.data.size(); ++j)
    if (!eq_function(a.data[j], b.data[j], slack)) return false;
  return true;
}

/// Cubical degeneracy: all data functions are independent of some coordinate.
inline bool is_degenerate(const path& p) {
  if (p.dom != domain_kind::cube || p.n == 0) return false;
  for (int i = 0; i < p.n; ++i) {
    bool independent = true;
    for (const auto& f : p.data)
      for (const auto& [x, c] : f.terms()) {
        (void)c;
        if (!x.coord(i).empty()) independent = false;
      }
    if (independent) return true;
  }
  return false;
}

/// Integer chain of paths of a common dimension, reduced modulo degenerate
/// cubes and cancelling equal paths.
struct chain {
  int n = 0;
  std::vector<std::pair<long, path>> terms;

  static chain of(const path& p, long w = 1) {
    chain c;
    c.n = p.n;
    c.terms.emplace_back(w, p);
    c.reduce();
    return c;
  }

  chain& reduce() {
    std::vector<std::pair<long, path>> out;
    for (auto& [w, p] : terms) {
      if (w == 0 || is_degenerate(p)) continue;
      bool merged = false;
      for (auto& [w2, p2] : out)
        if (path_equal(p, p2)) {
          w2 += w;
          merged = true;
          break;
        }
      if (!merged) out.emplace_back(w, p);
    }
    std::erase_if(out, [](const auto& t) { return t.first == 0; });
    terms = std::move(out);
    return *this;
  }

  bool is_zero() const { return terms.empty(); }

  friend chain operator+(const chain& a, const chain& b) {
    chain r = a;
    r.terms.insert(r.terms.end(), b.terms.begin(), b.terms.end());
    r.reduce();
    return r;
  }

  chain scaled(long w) const {
    chain r = *this;
    for (auto& [wt, p] : r.terms) wt *= w;
    r.reduce();
    return r;
  }
};

/// Boundary operator: faces by affine pullback of the function data.
inline chain boundary(const chain& c) {
  chain r;
  r.n = c.n - 1;
  if (c.n < 1) throw calc_error(errc::dimension_mismatch, "boundary needs dimension >= 1");
  for (const auto& [w, p] : c.terms) {
    const field_ptr& cfg = p.data.front().registry()->config();
    long nk = static_cast<long>(cfg->n_k());
    polytope_ptr facedom = path_domain(cfg, p.dom, p.n - 1);
    if (p.dom == domain_kind::cube) {
      for (int i = 1; i <= p.n; ++i)
        for (int sigma = 0; sigma <= 1; ++sigma) {
          path face{p.dom, p.n - 1, facedom, p.tgt, {}};
          for (const auto& f : p.data)
            face.data.push_back(pullback(cube_face(p.n, i, sigma, nk), f, facedom));
          long sign = ((i + sigma) % 2 == 0) ? 1 : -1;
          r.terms.emplace_back(w * sign, std::move(face));
        }
    } else {
      for (int i = 0; i <= p.n; ++i) {
        path face{p.dom, p.n - 1, facedom, p.tgt, {}};
        for (const auto& f : p.data)
          face.data.push_back(pullback(simplex_face(p.n, i), f, facedom));
        long sign = (i % 2 == 0) ? 1 : -1;
        r.terms.emplace_back(w * sign, std::move(face));
      }
    }
  }
  r.reduce();
  return r;
}

inline bool is_cycle(const chain& c) { return boundary(c).is_zero(); }

/// Rotation number of a cycle around a: N_k log x for the unit decomposition
/// of gamma - a (the series contribution vanishes on cycles).
inline period rot(const path& p, const padic& a) {
  if (p.dom != domain_kind::cube || p.n != 1 || p.data.size() != 1)
    throw calc_error(errc::dimension_mismatch, "rot wants a 1-cube path");
  const auto& reg = p.data[0].registry();
  kfunction shifted = p.data[0] - kfunction::constant(reg, p.data[0].domain(), a);
  auto d = unit_decompose(shifted);
  if (!d) throw calc_error(errc::constraint_violation, "gamma - a is not a unit path");
  path q{p.dom, p.n, p.domain, p.tgt, {shifted}};
  if (p.tgt.kind == target_kind::tate) q.tgt = p.tgt;
  if (!is_cycle(chain::of(q))) throw calc_error(errc::not_a_cycle, "rot is defined on cycles");
  return log_character(*reg, d->char_part)
      .scaled(padic::from_long(reg->config(), static_cast<long>(reg->config()->n_k())));
}

// --- Laurent data on one-dimensional targets ---------------------------------

using laurent = std::map<long, padic>;  // T-exponent -> coefficient

inline laurent laurent_derivative(const laurent& f) {
  laurent d;
  for (const auto& [j, c] : f) {
    if (j == 0) continue;
    padic nc = c * padic::from_long(c.config(), j);
    if (!nc.is_zero()) d[j - 1] = nc;
  }
  return d;
}

/// Coefficient of (T - a)^{-1} in f(T) / (T - a)^m; Laurent tails require
/// a = 0.
inline padic residue_at(const laurent& f, const padic& a, long m, const field_ptr& cfg) {
  padic r = padic::zero(cfg);
  long want = m - 1;  // coefficient of (T-a)^{m-1} in f
  for (const auto& [j, c] : f) {
    if (j < 0) {
      if (!a.is_zero())
        throw calc_error(errc::constraint_violation,
                         "Laurent tail with a nonzero centre is unsupported");
      if (j == want) r = r + c;
      continue;
    }
    if (a.is_zero()) {
      if (j == want) r = r + c;
      continue;
    }
    if (j >= want && want >= 0) {
      // binom(j, want) * c * a^{j - want}
      mpz_class bin;
      mpz_bin_uiui(bin.get_mpz_t(), static_cast<unsigned long>(j),
                   static_cast<unsigned long>(want));
      r = r + c * padic::from_mpz(cfg, bin) * a.pow_int(j - want);
    }
  }
  return r;
}

/// Pullback of f(T) / (T - a)^m dT along a 1-cube path; exact when the unit
/// parts involved are bare characters, geometric-series truncation otherwise.
inline bfunction pullback_laurent_form(const path& p, const laurent& f, const padic& a, long m,
                                       long budget = 64) {
  if (p.dom != domain_kind::cube || p.n != 1)
    throw calc_error(errc::dimension_mismatch, "laurent pullback wants a 1-cube path");
  const auto& reg = p.data[0].registry();
  const kfunction& g = p.data[0];
  kfunction shifted = g - kfunction::constant(reg, g.domain(), a);
  kfunction acc = kfunction::zero(reg, g.thick_domain());
  for (const auto& [j, c] : f) {
    kfunction pw = power(g, j, budget);
    acc = acc + pw.scaled(c);
  }
  if (m != 0) acc = acc * power(shifted, -m, budget);
  bfunction integrand(reg, g.thick_domain());
  for (const auto& [x, c] : acc.terms()) integrand.add_term(x, to_period(c));
  integrand.set_tail(acc.tail());
  bfunction deriv = differentiate(g, 0);
  return integrand * deriv;
}

struct pair_report {
  period lhs;
  period rhs;
  bool pass = false;
};

/// Two-route check of the residue theorem family: the pullback integral of
/// f(T)/(T-a)^m dT against rot(gamma, a) * Res_a.
inline pair_report residue_pair(const path& p, const laurent& f, const padic& a, long m,
                                unsigned long slack = 2, long budget = 64) {
  const auto& reg = p.data[0].registry();
  pair_report rep;
  rep.lhs = integrate_interval(pullback_laurent_form(p, f, a, m, budget));
  rep.rhs = rot(p, a) * period::from_scalar(residue_at(f, a, m, reg->config()));
  rep.pass = eq_period(rep.lhs, rep.rhs, slack);
  return rep;
}

/// Exact integral of the invariant form along a unit path:
/// N_k log x + plog(1 + g(N_k)) - plog(1 + g(0)).
inline period integrate_invariant_form(const path& p) {
  if (p.dom != domain_kind::cube || p.n != 1)
    throw calc_error(errc::dimension_mismatch, "invariant form wants a 1-cube path");
  const auto& reg = p.data[0].registry();
  const field_ptr& cfg = reg->config();
  long nk = static_cast<long>(cfg->n_k());
  auto d = unit_decompose(p.data[0]);
  if (!d) throw calc_error(errc::constraint_violation, "invariant form needs a unit path");
  period base = log_character(*reg, d->char_part).scaled(padic::from_long(cfg, nk));
  padic gn = evaluate_iu(d->g_part, {mpq_class(nk)});
  padic g0 = evaluate_iu(d->g_part, {mpq_class(0)});
  padic one = padic::one(cfg);
  return base + period::from_scalar(plog(one + gn) - plog(one + g0));
}

// --- forms on multi-coordinate targets and the chain pairing -----------------

using target_poly = std::map<std::vector<long>, padic>;   // T-multiexponent -> coeff
using target_form = std::map<std::vector<int>, target_poly>;  // increasing dT tuple

inline target_form d_target_form(const target_form& w, const field_ptr& cfg) {
  target_form r;
  for (const auto& [idx, poly] : w)
    for (const auto& [expo, c] : poly) {
      for (size_t j = 0; j < expo.size(); ++j) {
        if (expo[j] == 0) continue;
        if (std::find(idx.begin(), idx.end(), static_cast<int>(j)) != idx.end()) continue;
        std::vector<long> de = expo;
        de[j] -= 1;
        padic nc = c * padic::from_long(cfg, expo[j]);
        // sort dT_j ^ dT_idx into increasing order with sign
        std::vector<int> tuple{static_cast<int>(j)};
        tuple.insert(tuple.end(), idx.begin(), idx.end());
        int sign = 1;
        for (size_t x = 0; x + 1 < tuple.size(); ++x)
          for (size_t y = 0; y + 1 < tuple.size() - x; ++y)
            if (tuple[y] > tuple[y + 1]) {
              std::swap(tuple[y], tuple[y + 1]);
              sign = -sign;
            }
        if (sign < 0) nc = -nc;
        auto& slot = r[tuple][de];
        slot = coeff_is_zero(slot) ? nc : slot + nc;
      }
    }
  for (auto it = r.begin(); it != r.end();) {
    for (auto jt = it->second.begin(); jt != it->second.end();)
      jt = jt->second.is_zero() ? it->second.erase(jt) : std::next(jt);
    it = it->second.empty() ? r.erase(it) : std::next(it);
  }
  return r;
}

/// gamma^* of a target form as a differential form on the domain cube.
inline form pullback_target_form(const path& p, const target_form& w, long budget = 64) {
  const auto& reg = p.data[0].registry();
  polytope_ptr dom = thick_of(p.domain);
  form out = form::zero(reg, dom, w.empty() ? 0 : static_cast<int>(w.begin()->first.size()));
  for (const auto& [idx, poly] : w) {
    kfunction coeff = kfunction::zero(reg, dom);
    for (const auto& [expo, c] : poly) {
      kfunction term = kfunction::constant(reg, dom, c);
      for (size_t j = 0; j < expo.size(); ++j)
        if (expo[j] != 0) term = term * power(p.data[j], expo[j], budget);
      coeff = coeff + term;
    }
    bfunction cb(reg, dom);
    for (const auto& [x, c] : coeff.terms()) cb.add_term(x, to_period(c));
    cb.set_tail(coeff.tail());
    form piece = form::zero(reg, dom, 0);
    piece.add_component({}, cb);
    for (int j : idx) {
      form dgamma = form::zero(reg, dom, 1);
      for (int l = 0; l < dom->ambient_dim(); ++l) {
        bfunction dl = differentiate(p.data[static_cast<size_t>(j)], l);
        if (!dl.is_zero()) dgamma.add_component({l}, dl);
      }
      piece = wedge_forms(piece, dgamma);
    }
    for (const auto& [t, fcomp] : piece.comps) out.add_component(t, fcomp);
  }
  return out;
}

/// The chain-level pairing: weighted sum of per-path pullback-and-integrate.
/// The zero chain integrates to 0.
inline period integrate_along(const chain& c, const target_form& w, const field_ptr& cfg,
                              long budget = 64) {
  period acc = period::zero(cfg);
  for (const auto& [wt, p] : c.terms) {
    form fw = pullback_target_form(p, w, budget);
    period v = integrate_cube_form(fw);
    acc = acc + v.scaled(padic::from_long(cfg, wt));
  }
  return acc;
}

enum class obstruction_verdict { nonboundary, inconclusive };

struct obstruction_report {
  period value;
  obstruction_verdict verdict = obstruction_verdict::inconclusive;
};

/// Stokes obstruction against the invariant form T^{-1} dT: a nonzero integral
/// of a closed form along a cycle certifies that the cycle is not a boundary.
inline obstruction_report obstruction_certificate(const chain& c, const field_ptr& cfg,
                                                  unsigned long slack = 4) {
  if (!c.is_zero() && !is_cycle(c))
    throw calc_error(errc::not_a_cycle, "obstruction certificates want cycles");
  obstruction_report rep;
  rep.value = period::zero(cfg);
  for (const auto& [w, p] : c.terms)
    rep.value = rep.value + integrate_invariant_form(p).scaled(padic::from_long(cfg, w));
  rep.verdict = rep.value.is_zero_to_precision(slack) ? obstruction_verdict::inconclusive
                                                      : obstruction_verdict::nonboundary;
  return rep;
}

}  // namespace padcal
