#pragma once

// Differentiation and integration of character sums on intervals, cubes and
// normalised simplices, exterior calculus with period coefficients, and the
// Stokes checkers.

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "padcal/funcring.hpp"

namespace padcal {

inline period to_period(const padic& c) { return period::from_scalar(c); }
inline period to_period(const period& c) { return c; }

/// Default slack covering denominator growth when a certified tail is
/// integrated (the coefficient estimate is polynomial in the index).
constexpr long default_tail_slack = 8;

/// Interval integral of a single arity-1 character over [0, N_k]:
/// (x(N_k) - 1)/log x off the torsion part, N_k on it.
inline period interval_factor(const generator_registry& reg, const character& x) {
  const field_ptr& cfg = reg.config();
  long nk = static_cast<long>(cfg->n_k());
  if (is_torsion(reg, x)) return period::from_long(cfg, nk);
  padic num = evaluate1(reg, x, mpq_class(nk)) - padic::one(cfg);
  if (num.is_zero()) return period::zero(cfg);
  return period::from_scalar(num).divided_by_form(log_form(reg, x));
}

template <class C>
void check_tail_budget(const poly_function<C>& f, long d_slack) {
  if (f.tail() &&
      f.tail()->bound < static_cast<long>(f.registry()->config()->precision) + d_slack)
    throw calc_error(errc::tail_budget, "tail certificate misses the integration budget");
}

/// Integral over [0, N_k] of a function on the interval.
template <class C>
period integrate_interval(const poly_function<C>& f, long d_slack = default_tail_slack) {
  const auto& reg = *f.registry();
  if (f.thick_dim() != 1)
    throw calc_error(errc::dimension_mismatch, "interval integral wants a 1-dimensional domain");
  check_tail_budget(f, d_slack);
  period acc = period::zero(reg.config());
  for (const auto& [x, c] : f.terms()) acc = acc + to_period(c) * interval_factor(reg, x);
  return acc;
}

/// Fubini: the cube integral is the term-wise product of coordinate factors.
template <class C>
period integrate_cube_function(const poly_function<C>& f, long d_slack = default_tail_slack) {
  const auto& reg = *f.registry();
  check_tail_budget(f, d_slack);
  period acc = period::zero(reg.config());
  for (const auto& [x, c] : f.terms()) {
    period t = to_period(c);
    for (int i = 0; i < x.arity(); ++i) t = t * interval_factor(reg, x.slice(i));
    acc = acc + t;
  }
  return acc;
}

/// Formal partial derivative: coefficient-wise multiplication by log x^(i).
template <class C>
bfunction differentiate(const poly_function<C>& f, int i) {
  const auto& reg = f.registry();
  bfunction r(reg, f.domain());
  for (const auto& [x, c] : f.terms()) {
    period l = log_character(*reg, x.slice(i));
    r.add_term(x, to_period(c) * l);
  }
  r.set_tail(f.tail());
  return r;
}

/// Scalar evaluation of a period-coefficient function at a rational point
/// (B_dR-linear extension of i_u).
inline period evaluate_iu_b(const bfunction& f, const qvec& t_ambient) {
  const auto& reg = *f.registry();
  qvec t = f.domain()->thick().t ? f.domain()->thick().to_thick.apply(t_ambient) : t_ambient;
  period r = period::zero(reg.config());
  for (const auto& [x, c] : f.terms()) {
    std::vector<mpq_class> tv(t.begin(), t.end());
    r = r + c * period::from_scalar(evaluate(reg, x, tv));
  }
  return r;
}

// --- exterior calculus on thick polytopes ------------------------------------

/// Differential form with period-coefficient component functions indexed by
/// increasing coordinate tuples.
struct form {
  registry_ptr reg;
  polytope_ptr domain;  // thick
  int degree = 0;
  std::map<std::vector<int>, bfunction> comps;

  static form zero(registry_ptr r, polytope_ptr d, int deg) {
    form w;
    w.reg = std::move(r);
    w.domain = std::move(d);
    w.degree = deg;
    return w;
  }

  form& add_component(std::vector<int> idx, const bfunction& f) {
    // sort the tuple, tracking the permutation sign
    int sign = 1;
    for (size_t i = 0; i + 1 < idx.size(); ++i)
      for (size_t j = 0; j + 1 < idx.size() - i; ++j)
        if (idx[j] > idx[j + 1]) {
          std::swap(idx[j], idx[j + 1]);
          sign = -sign;
        }
    for (size_t i = 0; i + 1 < idx.size(); ++i)
      if (idx[i] == idx[i + 1]) return *this;  // repeated differential
    bfunction g = sign == 1 ? f : bfunction::zero(f.registry(), f.domain()) - f;
    auto it = comps.find(idx);
    if (it == comps.end()) {
      if (!g.is_zero()) comps.emplace(std::move(idx), std::move(g));
    } else {
      it->second = it->second + g;
      if (it->second.is_zero()) comps.erase(it);
    }
    return *this;
  }
};

inline form d_form(const form& w) {
  int n = w.domain->ambient_dim();
  // d of a top-degree form vanishes through the repeated-differential rule
  form r = form::zero(w.reg, w.domain, w.degree + 1);
  for (const auto& [idx, f] : w.comps)
    for (int i = 0; i < n; ++i) {
      bfunction df = differentiate(f, i);
      if (df.is_zero()) continue;
      std::vector<int> ext{i};
      ext.insert(ext.end(), idx.begin(), idx.end());
      r.add_component(std::move(ext), df);
    }
  return r;
}

inline form wedge_forms(const form& a, const form& b) {
  if (a.degree + b.degree > a.domain->ambient_dim())
    throw calc_error(errc::degree_overflow, "wedge exceeds the ambient dimension");
  form r = form::zero(a.reg, a.domain, a.degree + b.degree);
  for (const auto& [ia, fa] : a.comps)
    for (const auto& [ib, fb] : b.comps) {
      std::vector<int> idx = ia;
      idx.insert(idx.end(), ib.begin(), ib.end());
      r.add_component(std::move(idx), fa * fb);
    }
  return r;
}

/// Pullback along an integral affine map a: S -> T (both thick):
/// coefficients pull back and dt_j expands to sum_i A[j][i] dt_i.
inline form pullback_form(const affine_map& a, const form& w, polytope_ptr s) {
  form r = form::zero(w.reg, s, w.degree);
  for (const auto& [idx, f] : w.comps) {
    bfunction pf = pullback(a, f, s);
    // expand the wedge of pulled-back differentials
    std::vector<std::pair<std::vector<int>, long>> expanded{{{}, 1}};
    for (int j : idx) {
      std::vector<std::pair<std::vector<int>, long>> next;
      for (const auto& [tuple, coeff] : expanded)
        for (int i = 0; i < a.cols(); ++i) {
          const mpz_class& aji = a.at(j, i);
          if (aji == 0) continue;
          std::vector<int> t2 = tuple;
          t2.push_back(i);
          next.emplace_back(std::move(t2), coeff * aji.get_si());
        }
      expanded = std::move(next);
    }
    for (const auto& [tuple, coeff] : expanded) {
      if (coeff == 0) continue;
      bfunction g = pf.scaled(period::from_long(w.reg->config(), coeff));
      r.add_component(tuple, g);
    }
  }
  return r;
}

/// Integral of a top-degree form over the cube [0, N_k]^n.
inline period integrate_cube_form(const form& w, long d_slack = default_tail_slack) {
  int n = w.domain->ambient_dim();
  if (w.degree != n) throw calc_error(errc::degree_overflow, "cube integral wants top degree");
  period acc = period::zero(w.reg->config());
  for (const auto& [idx, f] : w.comps) {
    (void)idx;  // the unique increasing top tuple
    acc = acc + integrate_cube_function(f, d_slack);
  }
  return acc;
}

// --- the recursive simplex integral ------------------------------------------

/// Conventions for the all-torsion-ratio base value of the simplex integral.
/// `pinned` carries the endpoint factor x^(0)(N_k) and the normalisation
/// N^{n+1}/(n+1)! fixed by the worked 1-simplex value; the alternatives keep
/// the other readings of the source formulas available for auditing.
enum class simplex_base_convention { pinned, no_endpoint_factor, dimension_indexed };

/// Integral of a single character of arity n+1 over N_k Delta^n against the
/// basis form dt'_{n,h}.  The recursive case divides out the log of the least
/// non-torsion coordinate ratio; the base case is the normalised volume times
/// the common endpoint value.
inline period simplex_char_integral(const generator_registry& reg, const character& x, int h,
                                    std::optional<std::pair<int, int>> forced_pair = std::nullopt,
                                    simplex_base_convention variant = simplex_base_convention::pinned) {
  const field_ptr& cfg = reg.config();
  int n = x.arity() - 1;
  long nk = static_cast<long>(cfg->n_k());
  if (n == 0) {
    // Delta^0 is the point {N_k}: the integral is evaluation
    return period::from_scalar(evaluate1(reg, x.slice(0), mpq_class(nk)));
  }
  std::optional<std::pair<int, int>> pair = forced_pair;
  if (!pair) {
    for (int i = 0; i <= n && !pair; ++i)
      for (int j = i + 1; j <= n && !pair; ++j)
        if (!is_torsion(reg, x.slice(i).mul(x.slice(j).inv()))) pair = std::make_pair(i, j);
  }
  if (!pair) {
    // all coordinate ratios torsion
    padic endpoint = evaluate1(reg, x.slice(0), mpq_class(nk));
    mpq_class vol;
    switch (variant) {
      case simplex_base_convention::dimension_indexed: {
        mpq_class v = 1;
        for (int i = 1; i <= n; ++i) v *= mpq_class(nk, i);
        vol = v;
        break;
      }
      case simplex_base_convention::pinned:
      case simplex_base_convention::no_endpoint_factor: {
        mpq_class v = 1;
        for (int i = 1; i <= n + 1; ++i) v *= mpq_class(nk, i);
        vol = v;
        break;
      }
    }
    vol.canonicalize();
    padic scale = padic::from_mpq(cfg, vol);
    if (variant != simplex_base_convention::no_endpoint_factor) scale = scale * endpoint;
    if (h % 2 == 1) scale = -scale;
    return period::from_scalar(scale);
  }
  auto [i, j] = *pair;
  character ratio = x.slice(i).mul(x.slice(j).inv());
  if (is_torsion(reg, ratio))
    throw calc_error(errc::torsion_divide, "forced pair has a torsion ratio");
  period rec = simplex_char_integral(reg, x.drop_coord(i), i, std::nullopt, variant) -
               simplex_char_integral(reg, x.drop_coord(j), i, std::nullopt, variant);
  period value = rec.divided_by_form(log_form(reg, ratio));
  long sign = ((h + i + 1) % 2 == 0) ? 1 : -1;
  return sign == 1 ? value : period::zero(cfg) - value;
}

/// Top-degree form on the normalised simplex, given termwise in the dt'_{n,h}
/// basis with ambient characters of arity n+1.
struct simplex_form_term {
  character x;
  period coeff;
  int h = 0;
};

inline period integrate_simplex(const generator_registry& reg,
                                const std::vector<simplex_form_term>& terms,
                                simplex_base_convention variant = simplex_base_convention::pinned) {
  period acc = period::zero(reg.config());
  for (const auto& t : terms)
    acc = acc + t.coeff * simplex_char_integral(reg, t.x, t.h, std::nullopt, variant);
  return acc;
}

// --- Stokes checkers -----------------------------------------------------------

struct stokes_report {
  period lhs;
  period rhs;
  bool pass = false;
};

/// Lower bound on the valuation of every scalar produced while integrating a
/// character term: the coefficient valuation plus the negative part of the
/// slice values at the endpoint N_k.
inline long term_scale_floor(const generator_registry& reg, const character& x, long coeff_val) {
  long nk = static_cast<long>(reg.config()->n_k());
  mpq_class total = coeff_val;
  for (int i = 0; i < x.arity(); ++i) {
    mpq_class e = 0;
    for (const auto& [g, q] : x.coord(i)) {
      const padic& b = reg.at(g).base;
      if (!b.is_zero() && b.valuation() != 0) e += q * b.valuation();
    }
    mpq_class val_at_n = e * nk;
    if (val_at_n < 0) total += val_at_n;
  }
  mpz_class fl = total.get_num() / total.get_den();
  long out = fl.get_si();
  if (mpq_class(fl) > total) --out;  // floor for negatives
  return std::min(out, 0L);
}

inline long coeff_scale(const padic& c) { return c.is_zero() ? 0 : std::min(c.valuation(), 0L); }
inline long coeff_scale(const period& c) {
  long s = 0;
  for (const auto& [m, a] : c.numerator()) {
    (void)m;
    if (!a.is_zero()) s = std::min(s, a.valuation());
  }
  return s;
}

/// Identity comparison with the scale floor and a denominator-count burn
/// allowance: every cross-multiplication by a denominator form can cost one
/// digit of working precision.
inline bool eq_period_checked(const period& a, const period& b, long floor,
                              unsigned long slack) {
  unsigned long dyn =
      slack + static_cast<unsigned long>(std::max(a.denominator().size(), b.denominator().size()));
  return eq_period_at_floor(a, b, floor, dyn);
}

template <class C>
long function_scale_floor(const poly_function<C>& f) {
  const auto& reg = *f.registry();
  long floor = 0;
  for (const auto& [x, c] : f.terms())
    floor = std::min(floor, term_scale_floor(reg, x, coeff_scale(c)));
  return floor;
}

/// Cube Stokes: the integral of d(omega) over [0,N]^d equals the signed sum of
/// the face integrals of omega.
inline stokes_report stokes_cube(const form& w, unsigned long slack = 2) {
  int d = w.domain->ambient_dim();
  long nk = static_cast<long>(w.reg->config()->n_k());
  stokes_report rep;
  long floor = 0;
  for (const auto& [idx, f] : w.comps) {
    (void)idx;
    floor = std::min(floor, function_scale_floor(f));
  }
  rep.lhs = integrate_cube_form(d_form(w));
  rep.rhs = period::zero(w.reg->config());
  polytope_ptr facedom = polytope::cube(d - 1, nk);
  for (int i = 1; i <= d; ++i)
    for (int sigma = 0; sigma <= 1; ++sigma) {
      form fw = pullback_form(cube_face(d, i, sigma, nk), w, facedom);
      period v = integrate_cube_form(fw);
      rep.rhs = ((i + sigma) % 2 == 0) ? rep.rhs + v : rep.rhs - v;
    }
  rep.pass = eq_period_checked(rep.lhs, rep.rhs, floor, slack);
  return rep;
}

/// Simplicial Stokes for an (n-1)-form f dt'_{n,h0,h1} on N_k Delta^n:
/// lhs integrates the two surviving components of d(omega); rhs is the stated
/// signed pair of face integrals.
inline stokes_report stokes_simplex(const generator_registry& reg,
                                    const std::vector<std::pair<character, period>>& terms, int h0,
                                    int h1, unsigned long slack = 2,
                                    simplex_base_convention variant = simplex_base_convention::pinned) {
  stokes_report rep;
  rep.lhs = period::zero(reg.config());
  rep.rhs = period::zero(reg.config());
  long floor = 0;
  for (const auto& [x, c] : terms)
    floor = std::min(floor, term_scale_floor(reg, x, coeff_scale(c)));
  for (const auto& [x, c] : terms) {
    // d(x dt'_{n,h0,h1}) = (-1)^{h0} log x^(h0) x dt'_{n,h1}
    //                    + (-1)^{h1-1} log x^(h1) x dt'_{n,h0}
    period t0 = log_character(reg, x.slice(h0)) * simplex_char_integral(reg, x, h1, std::nullopt, variant);
    period t1 = log_character(reg, x.slice(h1)) * simplex_char_integral(reg, x, h0, std::nullopt, variant);
    period lhs_term = (h0 % 2 == 0 ? t0 : period::zero(reg.config()) - t0) +
                      (h1 % 2 == 1 ? t1 : period::zero(reg.config()) - t1);
    rep.lhs = rep.lhs + c * lhs_term;
    // faces at h0 and h1 (the form pulls back to zero on the others)
    period f0 = simplex_char_integral(reg, x.drop_coord(h0), h1 - 1, std::nullopt, variant);
    period f1 = simplex_char_integral(reg, x.drop_coord(h1), h0, std::nullopt, variant);
    period rhs_term = (h0 % 2 == 0 ? f0 : period::zero(reg.config()) - f0) +
                      (h1 % 2 == 0 ? f1 : period::zero(reg.config()) - f1);
    rep.rhs = rep.rhs + c * rhs_term;
  }
  rep.pass = eq_period_checked(rep.lhs, rep.rhs, floor, slack);
  return rep;
}

/// Fundamental theorem of calculus on [0, N_k].
template <class C>
stokes_report ftc_check(const poly_function<C>& f, unsigned long slack = 2) {
  const auto& reg = *f.registry();
  long nk = static_cast<long>(reg.config()->n_k());
  stokes_report rep;
  rep.lhs = integrate_interval(differentiate(f, 0));
  bfunction fb(f.registry(), f.domain());
  for (const auto& [x, c] : f.terms()) fb.add_term(x, to_period(c));
  rep.rhs = evaluate_iu_b(fb, {mpq_class(nk)}) - evaluate_iu_b(fb, {mpq_class(0)});
  rep.pass = eq_period_at_floor(rep.lhs, rep.rhs, function_scale_floor(f), slack);
  return rep;
}

}  // namespace padcal
