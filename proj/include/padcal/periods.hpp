#pragma once

// Finitely generated formal model of the de Rham period ring: localized
// polynomials over k in independent log-symbols lambda_g (one per non-torsion
// generator, plus an optional symbol for a chosen log p), graded by total
// lambda-degree, with denominators restricted to nonzero degree-1 forms.

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

#include "padcal/characters.hpp"
#include "padcal/scalar.hpp"

namespace padcal {

/// Symbol id: a non-torsion generator id, or log_p_symbol for the configured
/// branch value of log p.
constexpr int log_p_symbol = -1;

using monomial = std::map<int, unsigned long>;       // symbol -> exponent, no zeros
using linear_form = std::map<int, mpq_class>;        // symbol -> coefficient, no zeros
using poly = std::map<monomial, padic>;              // monomial -> coefficient

inline unsigned long monomial_degree(const monomial& m) {
  unsigned long d = 0;
  for (const auto& [s, e] : m) d += e;
  return d;
}

inline poly poly_mul(const field_ptr& cfg, const poly& a, const poly& b) {
  poly r;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      monomial m = ma;
      for (const auto& [s, e] : mb) m[s] += e;
      padic c = ca * cb;
      auto it = r.find(m);
      if (it == r.end())
        r.emplace(std::move(m), std::move(c));
      else
        it->second = it->second + c;
    }
  for (auto it = r.begin(); it != r.end();)
    it = it->second.is_zero() ? r.erase(it) : std::next(it);
  (void)cfg;
  return r;
}

inline poly poly_add(const poly& a, const poly& b) {
  poly r = a;
  for (const auto& [m, c] : b) {
    auto it = r.find(m);
    if (it == r.end())
      r.emplace(m, c);
    else
      it->second = it->second + c;
  }
  for (auto it = r.begin(); it != r.end();)
    it = it->second.is_zero() ? r.erase(it) : std::next(it);
  return r;
}

inline poly form_to_poly(const field_ptr& cfg, const linear_form& f) {
  poly r;
  for (const auto& [s, q] : f) {
    monomial m;
    m[s] = 1;
    r[m] = padic::from_mpq(cfg, q);
  }
  return r;
}

/// Element of the period model: num / prod(den), den a multiset of monic
/// degree-1 forms.
class period {
public:
  period() = default;
  explicit period(field_ptr cfg) : cfg_(std::move(cfg)) {}

  static period zero(field_ptr cfg) { return period(std::move(cfg)); }

  static period from_scalar(const padic& a) {
    period r(a.config());
    if (!a.is_zero()) r.num_[monomial{}] = a;
    return r;
  }

  static period from_long(field_ptr cfg, long n) {
    return from_scalar(padic::from_long(std::move(cfg), n));
  }

  static period symbol(field_ptr cfg, int sym) {
    period r(cfg);
    monomial m;
    m[sym] = 1;
    r.num_[m] = padic::one(cfg);
    return r;
  }

  const field_ptr& config() const { return cfg_; }
  const poly& numerator() const { return num_; }
  const std::vector<linear_form>& denominator() const { return den_; }

  bool is_polynomial() const { return den_.empty(); }

  bool is_zero_to_precision(unsigned long slack = 2) const {
    for (const auto& [m, c] : num_)
      if (!small_to_precision(c, slack)) return false;
    return true;
  }

  /// Degree-0 part of a polynomial period as a field scalar.
  padic constant_part() const {
    if (!den_.empty()) throw calc_error(errc::not_graded, "period has a denominator");
    auto it = num_.find(monomial{});
    return it == num_.end() ? padic::zero(cfg_) : it->second;
  }

  friend period operator+(const period& x, const period& y) { return add_impl(x, y, false); }
  friend period operator-(const period& x, const period& y) { return add_impl(x, y, true); }

  friend period operator*(const period& x, const period& y) {
    period r(x.cfg_ ? x.cfg_ : y.cfg_);
    r.num_ = poly_mul(r.cfg_, x.num_, y.num_);
    r.den_ = x.den_;
    r.den_.insert(r.den_.end(), y.den_.begin(), y.den_.end());
    std::sort(r.den_.begin(), r.den_.end());
    r.reduce();
    return r;
  }

  period scaled(const padic& c) const {
    period r(cfg_);
    r.den_ = den_;
    for (const auto& [m, a] : num_) {
      padic v = a * c;
      if (!v.is_zero()) r.num_[m] = v;
    }
    r.reduce();
    return r;
  }

  /// Append a nonzero degree-1 form to the denominator (division by it).
  period divided_by_form(linear_form f) const {
    if (f.empty()) throw calc_error(errc::torsion_divide, "division by the zero form");
    period r = *this;
    mpq_class lead = f.begin()->second;
    for (auto& [s, q] : f) q /= lead;
    r.num_ = poly_mul(cfg_, r.num_, poly{{monomial{}, padic::from_mpq(cfg_, 1 / lead)}});
    r.den_.push_back(std::move(f));
    std::sort(r.den_.begin(), r.den_.end());
    r.reduce();
    return r;
  }

  /// Drop numerator monomials of total lambda-degree >= N.
  period fil_truncate(long n) const {
    period r(cfg_);
    r.den_ = den_;
    for (const auto& [m, c] : num_)
      if (static_cast<long>(monomial_degree(m)) < n) r.num_[m] = c;
    r.reduce();
    return r;
  }

  /// Equality at an explicit absolute scale floor: every coefficient of the
  /// cross-multiplied difference has valuation at least floor + M - slack.
  /// Callers derive the floor from the scale of the computation's inputs;
  /// exact cancellation can hide that scale from the results themselves.
  friend bool eq_period_at_floor(const period& x, const period& y, long floor,
                                 unsigned long slack = 2) {
    const field_ptr& cfg = x.cfg_ ? x.cfg_ : y.cfg_;
    poly lhs = x.num_;
    for (const auto& f : y.den_) lhs = poly_mul(cfg, lhs, form_to_poly(cfg, f));
    poly rhs = y.num_;
    for (const auto& f : x.den_) rhs = poly_mul(cfg, rhs, form_to_poly(cfg, f));
    long bar = floor + static_cast<long>(cfg->precision) - static_cast<long>(slack);
    auto ok = [&](const padic& d) { return d.is_zero() || d.valuation() >= bar; };
    for (const auto& [m, c] : lhs) {
      auto it = rhs.find(m);
      padic d = it == rhs.end() ? c : c - it->second;
      if (!ok(d)) return false;
    }
    for (const auto& [m, c] : rhs)
      if (lhs.find(m) == lhs.end() && !ok(c)) return false;
    return true;
  }

  /// Equality to precision by cross-multiplication: every coefficient of the
  /// difference has valuation at least min(0, scale) + M - slack, where scale
  /// is the least coefficient valuation appearing on either side.
  friend bool eq_period(const period& x, const period& y, unsigned long slack = 2) {
    const field_ptr& cfg = x.cfg_ ? x.cfg_ : y.cfg_;
    poly lhs = x.num_;
    for (const auto& f : y.den_) lhs = poly_mul(cfg, lhs, form_to_poly(cfg, f));
    poly rhs = y.num_;
    for (const auto& f : x.den_) rhs = poly_mul(cfg, rhs, form_to_poly(cfg, f));
    long scale = 0;
    for (const auto& [m, c] : lhs) {
      (void)m;
      if (!c.is_zero()) scale = std::min(scale, c.valuation());
    }
    for (const auto& [m, c] : rhs) {
      (void)m;
      if (!c.is_zero()) scale = std::min(scale, c.valuation());
    }
    long bar = scale + static_cast<long>(cfg->precision) - static_cast<long>(slack);
    auto ok = [&](const padic& d) { return d.is_zero() || d.valuation() >= bar; };
    for (const auto& [m, c] : lhs) {
      auto it = rhs.find(m);
      padic d = it == rhs.end() ? c : c - it->second;
      if (!ok(d)) return false;
    }
    for (const auto& [m, c] : rhs)
      if (lhs.find(m) == lhs.end() && !ok(c)) return false;
    return true;
  }

  /// Substitute symbols per the Galois action: lambda_eps -> u lambda_eps,
  /// lambda_g -> lambda_g + c_g lambda_eps; scalars fixed.
  period galois_twisted(const galois_action& act) const {
    period r(cfg_);
    for (const auto& [m, c] : num_) {
      poly t{{monomial{}, c}};
      for (const auto& [s, e] : m) {
        poly img = substituted_symbol(act, s);
        for (unsigned long i = 0; i < e; ++i) t = poly_mul(cfg_, t, img);
      }
      r.num_ = poly_add(r.num_, t);
    }
    for (const auto& f : den_) {
      linear_form g;
      mpq_class eps_c = 0;
      for (const auto& [s, q] : f) {
        if (s == generator_registry::eps_id) {
          eps_c += act.unit() * q;
        } else {
          g[s] += q;
          auto it = act.cocycle().find(s);
          if (it != act.cocycle().end()) eps_c += mpq_class(it->second) * q;
        }
      }
      if (eps_c != 0) g[generator_registry::eps_id] = eps_c;
      for (auto it = g.begin(); it != g.end();)
        it = (it->second == 0) ? g.erase(it) : std::next(it);
      period tmp = from_scalar(padic::one(cfg_)).divided_by_form(std::move(g));
      r = r * tmp;
    }
    r.reduce();
    return r;
  }

  std::string str(const generator_registry& reg) const {
    auto sym_name = [&](int s) {
      return s == log_p_symbol ? std::string("log_p") : "l_" + reg.at(s).name;
    };
    auto poly_str = [&](const poly& p) {
      if (p.empty()) return std::string("0");
      std::string out;
      bool first = true;
      for (const auto& [m, c] : p) {
        if (!first) out += " + ";
        first = false;
        out += "(" + c.str() + ")";
        for (const auto& [s, e] : m) {
          out += "*" + sym_name(s);
          if (e > 1) out += "^" + std::to_string(e);
        }
      }
      return out;
    };
    std::string out = poly_str(num_);
    for (const auto& f : den_) {
      out += " / (";
      bool first = true;
      for (const auto& [s, q] : f) {
        if (!first) out += " + ";
        first = false;
        out += q.get_str() + "*" + sym_name(s);
      }
      out += ")";
    }
    return out;
  }

private:
  poly substituted_symbol(const galois_action& act, int s) const {
    poly r;
    monomial ms;
    ms[s] = 1;
    monomial me;
    me[generator_registry::eps_id] = 1;
    if (s == generator_registry::eps_id) {
      r[me] = padic::from_mpq(cfg_, act.unit());
      return r;
    }
    r[ms] = padic::one(cfg_);
    auto it = act.cocycle().find(s);
    if (it != act.cocycle().end() && it->second != 0)
      r[me] = padic::from_mpz(cfg_, it->second);
    return r;
  }

  static period add_impl(const period& x, const period& y, bool neg) {
    const field_ptr cfg = x.cfg_ ? x.cfg_ : y.cfg_;
    // shared denominator factors cancel syntactically
    std::vector<linear_form> shared, xa = x.den_, yb = y.den_;
    for (auto it = xa.begin(); it != xa.end();) {
      auto jt = std::find(yb.begin(), yb.end(), *it);
      if (jt != yb.end()) {
        shared.push_back(*it);
        yb.erase(jt);
        it = xa.erase(it);
      } else {
        ++it;
      }
    }
    poly xs = x.num_;
    for (const auto& f : yb) xs = poly_mul(cfg, xs, form_to_poly(cfg, f));
    poly ys = y.num_;
    for (const auto& f : xa) ys = poly_mul(cfg, ys, form_to_poly(cfg, f));
    if (neg) {
      for (auto& [m, c] : ys) c = -c;
    }
    period r(cfg);
    r.num_ = poly_add(xs, ys);
    r.den_ = shared;
    r.den_.insert(r.den_.end(), xa.begin(), xa.end());
    r.den_.insert(r.den_.end(), yb.begin(), yb.end());
    std::sort(r.den_.begin(), r.den_.end());
    r.reduce();
    return r;
  }

  // Cancel denominator forms dividing the numerator exactly.
  void reduce() {
    if (num_.empty()) {
      den_.clear();
      return;
    }
    bool progress = true;
    while (progress && !den_.empty()) {
      progress = false;
      for (size_t i = 0; i < den_.size(); ++i) {
        poly q;
        if (try_divide(num_, den_[i], q)) {
          num_ = std::move(q);
          den_.erase(den_.begin() + static_cast<long>(i));
          progress = true;
          break;
        }
      }
      if (num_.empty()) {
        den_.clear();
        return;
      }
    }
  }

  bool try_divide(const poly& f, const linear_form& l, poly& quotient) const {
    int pivot = l.begin()->first;
    padic cpiv = padic::from_mpq(cfg_, l.begin()->second);
    poly rem = f, q;
    while (true) {
      auto it = rem.end();
      for (auto jt = rem.begin(); jt != rem.end(); ++jt)
        if (jt->first.count(pivot)) {
          if (it == rem.end() || monomial_degree(jt->first) > monomial_degree(it->first)) it = jt;
        }
      if (it == rem.end()) break;
      monomial qm = it->first;
      if (--qm[pivot] == 0) qm.erase(pivot);
      padic qc = it->second / cpiv;
      q[qm] = q.find(qm) == q.end() ? qc : q[qm] + qc;
      poly sub = poly_mul(cfg_, poly{{qm, qc}}, form_to_poly(cfg_, l));
      for (auto& [m, c] : sub) c = -c;
      rem = poly_add(rem, sub);
    }
    for (const auto& [m, c] : rem)
      if (!small_to_precision(c)) return false;
    quotient = std::move(q);
    return true;
  }

  field_ptr cfg_;
  poly num_;
  std::vector<linear_form> den_;  // sorted, monic in least symbol
};

/// Formal logarithm of an arity-1 character: sum of q_g lambda_g over the
/// non-torsion generators; torsion contributes 0.
inline linear_form log_form(const generator_registry& reg, const character& x) {
  if (x.arity() != 1) throw calc_error(errc::arity_mismatch, "log wants arity 1");
  linear_form f;
  for (const auto& [g, q] : x.coord(0)) {
    if (reg.at(g).torsion || q == 0) continue;
    f[g] += q;
    if (f[g] == 0) f.erase(g);
  }
  return f;
}

inline period log_character(const generator_registry& reg, const character& x) {
  linear_form f = log_form(reg, x);
  period r(reg.config());
  period acc = period::zero(reg.config());
  for (const auto& [s, q] : f)
    acc = acc + period::symbol(reg.config(), s).scaled(padic::from_mpq(reg.config(), q));
  return acc;
}

inline period divide_by_log(const generator_registry& reg, const period& x, const character& c) {
  linear_form f = log_form(reg, c);
  if (f.empty()) throw calc_error(errc::torsion_divide, "dividing by the log of a torsion character");
  return x.divided_by_form(std::move(f));
}

/// Branch logarithm of a field element through the splitting
/// [teichmuller] x (1 + m) x p^Z: roots of unity to 0, plog on principal
/// units, and v * lambda_P on the p-power part when configured.
inline period branch_log(const generator_registry& reg, const padic& a, bool have_log_p) {
  const field_ptr& cfg = reg.config();
  if (a.is_zero()) throw calc_error(errc::domain_error, "branch log of 0");
  long v = a.valuation();
  period r = period::zero(cfg);
  if (v != 0) {
    if (!have_log_p)
      throw calc_error(errc::needs_log_p, "|x(q_k-1)| != 1 and no log p symbol configured");
    r = r + period::symbol(cfg, log_p_symbol).scaled(padic::from_long(cfg, v));
  }
  padic unit_part = a * padic::from_long(cfg, static_cast<long>(cfg->p)).pow_int(-v);
  unsigned long r0 =
      mpz_fdiv_ui(unit_part.unit().get_mpz_t(), cfg->p);
  padic omega = teichmuller(cfg, r0);
  padic principal = unit_part / omega;
  r = r + period::from_scalar(plog(principal));
  return r;
}

/// Reduced logarithm of an arity-1 character: log x - branch_log(x(q_k - 1)).
inline period reduced_log(const generator_registry& reg, const character& x,
                          bool have_log_p = false) {
  padic end = evaluate1(reg, x, mpq_class(static_cast<unsigned long>(reg.config()->n_k())));
  return log_character(reg, x) - branch_log(reg, end, have_log_p);
}

}  // namespace padcal
