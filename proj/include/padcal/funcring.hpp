#pragma once

// The ring of finite character sums on a polytope modulo I(S).  A function is
// stored in the thick coordinates of its domain (the normal form is unique per
// deterministic thick representative), with coefficients in k or in the period
// model, and an optional certified tail for truncated overconvergent series.

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "padcal/characters.hpp"
#include "padcal/periods.hpp"
#include "padcal/polytope.hpp"

namespace padcal {

// coefficient adapters shared by k-valued and period-valued functions
inline bool coeff_is_zero(const padic& c) { return c.is_zero(); }
inline bool coeff_is_zero(const period& c) { return c.numerator().empty(); }
inline bool coeff_eq(const padic& a, const padic& b, unsigned long slack) {
  return eq_to_precision(a, b, slack);
}
inline bool coeff_eq(const period& a, const period& b, unsigned long slack) {
  return eq_period(a, b, slack);
}
inline padic coeff_scale(const padic& c, const padic& s) { return c * s; }
inline bool coeff_small(const padic& c, unsigned long slack) { return small_to_precision(c, slack); }
inline bool coeff_small(const period& c, unsigned long slack) {
  return c.is_zero_to_precision(slack);
}
inline period coeff_scale(const period& c, const padic& s) { return c.scaled(s); }

/// Certified bound on the omitted tail of a truncated overconvergent series:
/// every dropped term has Gauss-norm exponent >= bound.
struct tail_certificate {
  mpq_class delta;  // overconvergence radius in (0,1)
  long bound = 0;   // E_tail
};

inline std::optional<tail_certificate> combine_tails(const std::optional<tail_certificate>& a,
                                                     const std::optional<tail_certificate>& b) {
  if (!a) return b;
  if (!b) return a;
  tail_certificate t;
  t.delta = std::max(a->delta, b->delta);
  t.bound = std::min(a->bound, b->bound);
  return t;
}

/// Place an arity-1 character into coordinate i of an arity-n character.
inline character promote(const character& s, int n, int i) {
  character r(n);
  for (const auto& [g, q] : s.coord(0)) r = r.mul(character::generator_power(n, i, g, q));
  return r;
}

/// Pull a character back along an integral affine map psi: A -> B; returns the
/// pulled-back character together with the base-value factor prod x^(j)(b_j).
inline std::pair<character, padic> pull_character(const generator_registry& reg,
                                                  const affine_map& psi, const character& x) {
  if (x.arity() != psi.rows())
    throw calc_error(errc::arity_mismatch, "character arity does not match map target");
  int a = psi.cols();
  character y(a);
  padic base = padic::one(reg.config());
  for (int j = 0; j < x.arity(); ++j) {
    character slice = x.slice(j);
    if (slice.coord(0).empty()) continue;
    for (int i = 0; i < a; ++i) {
      const mpz_class& aji = psi.at(j, i);
      if (aji == 0) continue;
      y = y.mul(promote(slice.pow(mpq_class(aji)), a, i));
    }
    base = base * evaluate1(reg, slice, mpq_class(psi.shift(j)));
  }
  return {y, base};
}

template <class C>
class poly_function {
public:
  poly_function() = default;
  poly_function(registry_ptr reg, polytope_ptr domain)
      : reg_(std::move(reg)), domain_(std::move(domain)) {}

  static poly_function zero(registry_ptr reg, polytope_ptr domain) {
    return poly_function(std::move(reg), std::move(domain));
  }

  static poly_function constant(registry_ptr reg, polytope_ptr domain, C value) {
    poly_function f(std::move(reg), std::move(domain));
    if (!coeff_is_zero(value)) f.terms_[character(f.thick_dim())] = std::move(value);
    return f;
  }

  /// Single term c * x with x given in thick coordinates.
  static poly_function term(registry_ptr reg, polytope_ptr domain, const character& x, C value) {
    poly_function f(std::move(reg), std::move(domain));
    if (x.arity() != f.thick_dim())
      throw calc_error(errc::arity_mismatch, "term arity != thick dimension");
    if (!coeff_is_zero(value)) f.terms_[x] = std::move(value);
    return f;
  }

  const registry_ptr& registry() const { return reg_; }
  const polytope_ptr& domain() const { return domain_; }
  const std::map<character, C>& terms() const { return terms_; }
  const std::optional<tail_certificate>& tail() const { return tail_; }
  void set_tail(std::optional<tail_certificate> t) { tail_ = std::move(t); }

  int thick_dim() const { return thick_of(domain_)->ambient_dim(); }
  polytope_ptr thick_domain() const { return thick_of(domain_); }

  bool is_zero() const { return terms_.empty(); }

  poly_function& add_term(const character& x, const C& c) {
    auto it = terms_.find(x);
    if (it == terms_.end()) {
      if (!coeff_is_zero(c)) terms_.emplace(x, c);
    } else {
      it->second = it->second + c;
      if (coeff_is_zero(it->second)) terms_.erase(it);
    }
    return *this;
  }

  friend poly_function operator+(const poly_function& f, const poly_function& g) {
    f.check_same(g);
    poly_function r = f;
    for (const auto& [x, c] : g.terms_) r.add_term(x, c);
    r.tail_ = combine_tails(f.tail_, g.tail_);
    return r;
  }

  friend poly_function operator-(const poly_function& f, const poly_function& g) {
    f.check_same(g);
    poly_function r = f;
    for (const auto& [x, c] : g.terms_) r.add_term(x, negate(c));
    r.tail_ = combine_tails(f.tail_, g.tail_);
    return r;
  }

  friend poly_function operator*(const poly_function& f, const poly_function& g) {
    f.check_same(g);
    poly_function r(f.reg_, f.domain_);
    for (const auto& [x, cx] : f.terms_)
      for (const auto& [y, cy] : g.terms_) r.add_term(x.mul(y), cx * cy);
    r.tail_ = combine_tails(f.tail_, g.tail_);
    return r;
  }

  poly_function scaled(const C& c) const {
    poly_function r(reg_, domain_);
    for (const auto& [x, cx] : terms_) r.add_term(x, cx * c);
    r.tail_ = tail_;
    return r;
  }

  friend bool eq_function(const poly_function& f, const poly_function& g,
                          unsigned long slack = 2) {
    if (!same_polytope(*f.domain_, *g.domain_)) return false;
    poly_function d = f - g;
    for (const auto& [x, c] : d.terms_) {
      (void)x;
      if (!coeff_small(c, slack)) return false;
    }
    return true;
  }

  /// min over thick vertices of the valuation form of x (|x| = p^-w on S).
  mpq_class char_weight(const character& x) const {
    const auto& verts = thick_domain()->vertices();
    bool first = true;
    mpq_class best = 0;
    for (const auto& v : verts) {
      mpq_class e = norm_exponent_at(*reg_, x, v);
      if (first || e < best) {
        best = e;
        first = false;
      }
    }
    return best;
  }

private:
  static padic negate(const padic& c) { return -c; }
  static period negate(const period& c) { return period::zero(c.config()) - c; }
  static padic zero_like(const padic& c) { return padic::zero(c.config()); }
  static period zero_like(const period& c) { return period::zero(c.config()); }

  void check_same(const poly_function& g) const {
    if (!same_polytope(*domain_, *g.domain_))
      throw calc_error(errc::polytope_mismatch, "functions live on different polytopes");
  }

  registry_ptr reg_;
  polytope_ptr domain_;
  std::map<character, C> terms_;
  std::optional<tail_certificate> tail_;
};

using kfunction = poly_function<padic>;
using bfunction = poly_function<period>;

/// Gauss-norm exponent e with ||f|| = p^-e; nullopt encodes +infinity (f = 0).
inline std::optional<mpq_class> gauss_exponent(const kfunction& f) {
  if (f.is_zero()) return std::nullopt;
  bool first = true;
  mpq_class best = 0;
  for (const auto& [x, c] : f.terms()) {
    mpq_class e = mpq_class(c.valuation()) + f.char_weight(x);
    if (first || e < best) {
      best = e;
      first = false;
    }
  }
  return best;
}

/// Pullback along an integral affine map a: S -> U of a function on U.
template <class C>
poly_function<C> pullback(const affine_map& a, const poly_function<C>& f, polytope_ptr s) {
  const auto& reg = f.registry();
  // composite map between thick coordinates: T_S -> T_U
  affine_map up = f.domain()->thick().t ? f.domain()->thick().to_thick
                                        : affine_map::identity(f.domain()->ambient_dim());
  affine_map down = s->thick().t ? s->thick().from_thick : affine_map::identity(s->ambient_dim());
  affine_map psi = up.compose(a).compose(down);
  poly_function<C> r(reg, std::move(s));
  for (const auto& [x, c] : f.terms()) {
    auto [y, base] = pull_character(*reg, psi, x);
    r.add_term(y, coeff_scale(c, base));
  }
  r.set_tail(f.tail());
  return r;
}

template <class C>
poly_function<C> restrict_to(const poly_function<C>& f, const polytope_ptr& piece) {
  if (!is_subpolytope(piece, f.domain()))
    throw calc_error(errc::polytope_mismatch, "restriction target is not a subpolytope");
  affine_map incl = affine_map::identity(f.domain()->ambient_dim());
  return pullback(incl, f, piece);
}

/// Tensor product: coordinates concatenate over the product of the thick
/// representatives; Gauss exponents add.
template <class C>
poly_function<C> tensor(const poly_function<C>& f, const poly_function<C>& g) {
  polytope_ptr prod = polytope::product(f.thick_domain(), g.thick_domain());
  poly_function<C> r(f.registry(), prod);
  for (const auto& [x, cx] : f.terms())
    for (const auto& [y, cy] : g.terms()) r.add_term(x.concat(y), cx * cy);
  r.set_tail(combine_tails(f.tail(), g.tail()));
  return r;
}

/// Involution on an interval [0, m]: pullback along t -> m - t.
template <class C>
poly_function<C> involution(const poly_function<C>& f) {
  polytope_ptr d = f.domain();
  if (d->ambient_dim() != 1 || !d->is_thick() || d->vertices().size() != 2 ||
      d->vertices()[0] != qvec{0})
    throw calc_error(errc::domain_error, "involution needs an interval [0, m]");
  const mpq_class& m = d->vertices()[1][0];
  if (m.get_den() != 1) throw calc_error(errc::domain_error, "interval endpoint must be integral");
  affine_map refl({{mpz_class(-1)}}, {mpz_class(m.get_num())});
  refl.set_cols_hint(1);
  return pullback(refl, f, d);
}

/// Coefficient-fixing Galois twist by exponent substitution; isometric.
inline kfunction galois_twist(const kfunction& f, const galois_action& act) {
  kfunction r(f.registry(), f.domain());
  for (const auto& [x, c] : f.terms()) r.add_term(act.apply(x), c);
  r.set_tail(f.tail());
  return r;
}

enum class eval_mode { i_u, i_p };

/// i_u: the field value sum f_x x(t).  Throws when some x(t) needs a root
/// outside Q_p.
inline padic evaluate_iu(const kfunction& f, const qvec& t_ambient) {
  const auto& reg = *f.registry();
  qvec t = f.domain()->thick().t ? f.domain()->thick().to_thick.apply(t_ambient) : t_ambient;
  padic r = padic::zero(reg.config());
  for (const auto& [x, c] : f.terms()) {
    std::vector<mpq_class> tv(t.begin(), t.end());
    r = r + c * evaluate(reg, x, tv);
  }
  return r;
}

/// i_p: the multiplicative seminorm exponent min_x (v(f_x) + e_x(t)).
inline std::optional<mpq_class> evaluate_ip(const kfunction& f, const qvec& t_ambient) {
  const auto& reg = *f.registry();
  qvec t = f.domain()->thick().t ? f.domain()->thick().to_thick.apply(t_ambient) : t_ambient;
  if (f.is_zero()) return std::nullopt;
  bool first = true;
  mpq_class best = 0;
  for (const auto& [x, c] : f.terms()) {
    std::vector<mpq_class> tv(t.begin(), t.end());
    mpq_class e = mpq_class(c.valuation()) + norm_exponent_at(reg, x, tv);
    if (first || e < best) {
      best = e;
      first = false;
    }
  }
  return best;
}

/// Multiplicative unit decomposition f = a * x * (1 + g) by the dominant-term
/// criterion; nullopt when no strictly dominant term exists.
struct unit_decomposition {
  padic scalar;
  character char_part;
  kfunction one_plus_rest;  // the function 1 + g
  kfunction g_part;         // g itself
};

inline std::optional<unit_decomposition> unit_decompose(const kfunction& f) {
  if (f.is_zero()) return std::nullopt;
  const auto& reg = f.registry();
  polytope_ptr t = f.thick_domain();
  // translate a vertex to the origin if needed (weights then satisfy w <= 0)
  qvec shift(static_cast<size_t>(t->ambient_dim()), 0);
  if (!t->contains(shift)) shift = t->vertices().front();
  auto weight = [&](const character& x) {
    bool first = true;
    mpq_class best = 0;
    for (const auto& v : t->vertices()) {
      qvec w(v.size());
      for (size_t i = 0; i < v.size(); ++i) w[i] = v[i] - shift[i];
      mpq_class e = norm_exponent_at(*reg, x, w);
      if (first || e < best) {
        best = e;
        first = false;
      }
    }
    return best;
  };
  std::vector<mpq_class> tshift(shift.begin(), shift.end());
  // dominant term of the translated function
  bool first = true;
  mpq_class best = 0;
  const character* dom = nullptr;
  bool tie = false;
  std::map<character, padic> translated;
  for (const auto& [x, c] : f.terms()) {
    padic ct = c * evaluate(*reg, x, tshift);
    translated.emplace(x, ct);
    mpq_class e = mpq_class(ct.valuation()) + weight(x);
    if (first || e < best) {
      best = e;
      dom = &x;
      tie = false;
      first = false;
    } else if (e == best) {
      tie = true;
    }
  }
  if (tie || dom == nullptr) return std::nullopt;
  character xhat = *dom;
  padic ahat = translated.at(xhat);
  // strict dominance: || f / (a x) - 1 || < 1 in translated coordinates
  kfunction h(reg, t);
  for (const auto& [y, cy] : translated) {
    character rel = y.mul(xhat.inv());
    padic coeff = cy / ahat;
    if (rel.is_identity()) coeff = coeff - padic::one(reg->config());
    if (!coeff.is_zero()) h.add_term(rel, coeff);
  }
  for (const auto& [y, cy] : h.terms()) {
    if (mpq_class(cy.valuation()) + weight(y) <= 0) return std::nullopt;
  }
  // translate back: f = [ahat * xhat(-shift)] * xhat * (1 + g)
  std::vector<mpq_class> back(tshift.size());
  for (size_t i = 0; i < back.size(); ++i) back[i] = -tshift[i];
  unit_decomposition d{ahat * evaluate(*reg, xhat, back), xhat, kfunction(reg, t),
                       kfunction(reg, t)};
  for (const auto& [y, cy] : h.terms()) d.g_part.add_term(y, cy * evaluate(*reg, y, back));
  d.one_plus_rest = kfunction::constant(reg, t, padic::one(reg->config())) + d.g_part;
  return d;
}

/// Inverse of a unit through the geometric series with a certified tail.
inline kfunction invert_unit(const kfunction& f, long budget) {
  auto d = unit_decompose(f);
  if (!d) throw calc_error(errc::constraint_violation, "invert_unit needs a unit");
  const auto& reg = f.registry();
  const field_ptr& cfg = reg->config();
  polytope_ptr t = f.thick_domain();
  kfunction acc = kfunction::constant(reg, t, padic::one(cfg));
  if (!d->g_part.is_zero()) {
    auto eg = gauss_exponent(d->g_part);
    mpq_class tailexp = mpq_class(budget + 1) * (*eg);
    if (tailexp < static_cast<long>(cfg->precision))
      throw calc_error(errc::budget_too_small, "geometric-series budget misses the precision");
    kfunction pw = kfunction::constant(reg, t, padic::one(cfg));
    kfunction neg = kfunction::zero(reg, t) - d->g_part;
    for (long i = 1; i <= budget; ++i) {
      pw = pw * neg;
      if (pw.is_zero()) break;
      acc = acc + pw;
    }
    tail_certificate cert;
    cert.delta = mpq_class(1, static_cast<long>(cfg->p));
    mpz_class num = tailexp.get_num() / tailexp.get_den();
    cert.bound = static_cast<long>(num.get_si());
    acc.set_tail(cert);
  }
  kfunction r(reg, t);
  padic ainv = d->scalar.inverse();
  character xinv = d->char_part.inv();
  for (const auto& [y, cy] : acc.terms()) r.add_term(xinv.mul(y), cy * ainv);
  r.set_tail(acc.tail());
  return r;
}

/// Exact power f^e for unit f with trivial series part, general e otherwise
/// only for e >= 0.
inline kfunction power(const kfunction& f, long e, long budget = 0) {
  const auto& reg = f.registry();
  if (e >= 0) {
    kfunction r = kfunction::constant(reg, f.thick_domain(), padic::one(reg->config()));
    kfunction base = f;
    long k = e;
    while (k > 0) {
      if (k & 1) r = r * base;
      base = base * base;
      k >>= 1;
    }
    return r;
  }
  kfunction inv = invert_unit(f, budget);
  return power(inv, -e, budget);
}

/// Glue compatible sections over a veebar covering; coefficients are forced
/// equal, so gluing is coefficient-wise union plus a compatibility check.
inline kfunction glue(const polytope_ptr& s, const std::vector<polytope_ptr>& pieces,
                      const std::vector<kfunction>& sections, unsigned long slack = 2) {
  if (pieces.size() != sections.size() || pieces.empty())
    throw calc_error(errc::domain_error, "glue needs matching pieces and sections");
  if (!veebar_check(s, pieces))
    throw calc_error(errc::domain_error, "pieces do not cover the target polytope");
  const auto& reg = sections.front().registry();
  // re-express every section in the thick coordinates of s
  std::vector<kfunction> renorm;
  for (size_t i = 0; i < pieces.size(); ++i) {
    if (!same_polytope(*sections[i].domain(), *pieces[i]))
      throw calc_error(errc::polytope_mismatch, "section does not live on its piece");
    affine_map up = pieces[i]->thick().t ? pieces[i]->thick().to_thick
                                         : affine_map::identity(pieces[i]->ambient_dim());
    affine_map down = s->thick().t ? s->thick().from_thick
                                   : affine_map::identity(s->ambient_dim());
    affine_map chi = up.compose(down);  // T_S -> T_{S_i}
    kfunction g(reg, s);
    for (const auto& [x, c] : sections[i].terms()) {
      auto [y, base] = pull_character(*reg, chi, x);
      g.add_term(y, coeff_scale(c, base));
    }
    renorm.push_back(std::move(g));
  }
  for (size_t i = 1; i < renorm.size(); ++i)
    if (!eq_function(renorm[0], renorm[i], slack))
      throw calc_error(errc::incompatible_sections, "sections disagree on an overlap");
  return renorm[0];
}

}  // namespace padcal
