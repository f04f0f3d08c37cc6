#pragma once

// Formal systems of roots ("characters").  A computation fixes a finite
// registry of generators; a character of arity n assigns each coordinate a
// finitely supported rational exponent vector over the registry.

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "padcal/scalar.hpp"

namespace padcal {

struct generator {
  std::string name;
  padic base;              // b_g in k^x
  bool torsion = false;    // restriction to Z[1/p] is torsion
  unsigned long order = 0; // m_g, only for torsion generators (m_g | q_k - 1)
};

/// Immutable table of generators.  Index 0 is always the distinguished system
/// eps of p-power roots of unity (base value 1, not torsion).
class generator_registry {
public:
  explicit generator_registry(field_ptr cfg) : cfg_(std::move(cfg)) {
    generator eps;
    eps.name = "eps";
    eps.base = padic::one(cfg_);
    gens_.push_back(eps);
  }

  const field_ptr& config() const { return cfg_; }

  int add(const std::string& name, const padic& base, bool torsion = false,
          unsigned long order = 0) {
    if (find(name)) throw calc_error(errc::domain_error, "duplicate generator name: " + name);
    if (torsion) {
      if (order == 0 || (cfg_->n_k() % order) != 0)
        throw calc_error(errc::domain_error, "torsion order must divide q_k - 1");
      if (!eq_to_precision(base.pow_int(static_cast<long>(order)), padic::one(cfg_)))
        throw calc_error(errc::domain_error, "torsion base fails b^m = 1");
    }
    generator g;
    g.name = name;
    g.base = base;
    g.torsion = torsion;
    g.order = order;
    gens_.push_back(g);
    return static_cast<int>(gens_.size()) - 1;
  }

  std::optional<int> find(const std::string& name) const {
    for (size_t i = 0; i < gens_.size(); ++i)
      if (gens_[i].name == name) return static_cast<int>(i);
    return std::nullopt;
  }

  const generator& at(int id) const { return gens_.at(static_cast<size_t>(id)); }
  int size() const { return static_cast<int>(gens_.size()); }
  static constexpr int eps_id = 0;

private:
  field_ptr cfg_;
  std::vector<generator> gens_;
};

using registry_ptr = std::shared_ptr<const generator_registry>;

/// One coordinate of a character: generator id -> rational exponent.
using exponent_vec = std::map<int, mpq_class>;

/// Element of E_{k,n}: an exponent vector per coordinate.
class character {
public:
  character() = default;
  explicit character(int arity) : coords_(static_cast<size_t>(arity)) {}

  static character identity(int arity) { return character(arity); }

  static character generator_power(int arity, int coord, int gen, const mpq_class& q) {
    character x(arity);
    if (q != 0) x.coords_[static_cast<size_t>(coord)][gen] = q;
    return x;
  }

  int arity() const { return static_cast<int>(coords_.size()); }
  const exponent_vec& coord(int i) const { return coords_.at(static_cast<size_t>(i)); }

  bool is_identity() const {
    for (const auto& c : coords_)
      if (!c.empty()) return false;
    return true;
  }

  /// The arity-1 character sitting in coordinate i.
  character slice(int i) const {
    character x(1);
    x.coords_[0] = coord(i);
    return x;
  }

  /// Drop coordinate i (the primed character of the simplex recursion).
  character drop_coord(int i) const {
    character x(arity() - 1);
    int k = 0;
    for (int j = 0; j < arity(); ++j) {
      if (j == i) continue;
      x.coords_[static_cast<size_t>(k++)] = coords_[static_cast<size_t>(j)];
    }
    return x;
  }

  character mul(const character& o) const {
    if (arity() != o.arity()) throw calc_error(errc::arity_mismatch, "character arity mismatch");
    character r = *this;
    for (int i = 0; i < arity(); ++i)
      for (const auto& [g, q] : o.coords_[static_cast<size_t>(i)]) {
        auto& c = r.coords_[static_cast<size_t>(i)];
        auto it = c.find(g);
        if (it == c.end()) {
          c[g] = q;
        } else {
          it->second += q;
          if (it->second == 0) c.erase(it);
        }
      }
    return r;
  }

  character inv() const { return pow(mpq_class(-1)); }

  character pow(const mpq_class& q) const {
    character r(arity());
    if (q == 0) return r;
    for (int i = 0; i < arity(); ++i)
      for (const auto& [g, e] : coords_[static_cast<size_t>(i)])
        r.coords_[static_cast<size_t>(i)][g] = e * q;
    return r;
  }

  /// Concatenate coordinates (tensor with a character on another factor).
  character concat(const character& o) const {
    character r(arity() + o.arity());
    for (int i = 0; i < arity(); ++i) r.coords_[static_cast<size_t>(i)] = coords_[static_cast<size_t>(i)];
    for (int i = 0; i < o.arity(); ++i)
      r.coords_[static_cast<size_t>(arity() + i)] = o.coords_[static_cast<size_t>(i)];
    return r;
  }

  friend bool operator<(const character& a, const character& b) { return a.coords_ < b.coords_; }
  friend bool operator==(const character& a, const character& b) { return a.coords_ == b.coords_; }

private:
  friend class galois_action;
  std::vector<exponent_vec> coords_;
};

/// True iff every non-torsion generator exponent vanishes; equivalently the
/// formal logarithm is 0 (kernel lemma).
inline bool is_torsion(const generator_registry& reg, const character& x) {
  for (int i = 0; i < x.arity(); ++i)
    for (const auto& [g, q] : x.coord(i))
      if (!reg.at(g).torsion && q != 0) return false;
  return true;
}

/// x(t) for rational t, defined only when every exponent times t_i is an
/// integer; torsion generators reduce the integer exponent mod m_g.
inline padic evaluate(const generator_registry& reg, const character& x,
                      const std::vector<mpq_class>& t) {
  if (static_cast<int>(t.size()) != x.arity())
    throw calc_error(errc::arity_mismatch, "evaluation point arity mismatch");
  const field_ptr& cfg = reg.config();
  padic r = padic::one(cfg);
  for (int i = 0; i < x.arity(); ++i) {
    for (const auto& [g, q] : x.coord(i)) {
      mpq_class e = q * t[static_cast<size_t>(i)];
      if (e.get_den() != 1)
        throw calc_error(errc::not_representable,
                         "character value needs a root outside Q_p");
      mpz_class ez = e.get_num();
      const generator& gen = reg.at(g);
      if (gen.torsion) {
        mpz_class m(static_cast<unsigned long>(gen.order));
        mpz_class red;
        mpz_mod(red.get_mpz_t(), ez.get_mpz_t(), m.get_mpz_t());
        r = r * gen.base.pow_int(red.get_si());
      } else {
        if (gen.base == padic::one(cfg)) continue;  // eps-like generator
        if (!mpz_fits_slong_p(ez.get_mpz_t()))
          throw calc_error(errc::domain_error, "exponent too large");
        r = r * gen.base.pow_int(ez.get_si());
      }
    }
  }
  return r;
}

inline padic evaluate1(const generator_registry& reg, const character& x, const mpq_class& t) {
  return evaluate(reg, x, {t});
}

/// Exponent e with |x(t)| = p^-e; exact rational, linear in t.
inline mpq_class norm_exponent_at(const generator_registry& reg, const character& x,
                                  const std::vector<mpq_class>& t) {
  mpq_class e = 0;
  for (int i = 0; i < x.arity(); ++i)
    for (const auto& [g, q] : x.coord(i)) {
      const padic& b = reg.at(g).base;
      if (b.is_zero()) throw calc_error(errc::domain_error, "zero base value");
      if (b.valuation() != 0) e += t[static_cast<size_t>(i)] * q * b.valuation();
    }
  return e;
}

/// Closedness on [0, N_k]: x(N_k) = 1 to precision.
inline bool is_closed(const generator_registry& reg, const character& x) {
  if (x.arity() != 1) throw calc_error(errc::arity_mismatch, "is_closed wants arity 1");
  padic v = evaluate1(reg, x, mpq_class(static_cast<unsigned long>(reg.config()->n_k())));
  return eq_to_precision(v, padic::one(reg.config()));
}

/// Galois twist data: a unit u acting on the eps exponent and Kummer cocycle
/// integers c_g with g . x_g = eps^{c_g} x_g.
class galois_action {
public:
  galois_action() = default;
  galois_action(mpq_class u, std::map<int, mpz_class> cocycle)
      : u_(std::move(u)), cocycle_(std::move(cocycle)) {}

  const mpq_class& unit() const { return u_; }
  const std::map<int, mpz_class>& cocycle() const { return cocycle_; }

  character apply(const character& x) const {
    character r = x;
    for (auto& c : r.coords_) {
      mpq_class eps_exp = 0;
      auto it = c.find(generator_registry::eps_id);
      if (it != c.end()) eps_exp = it->second;
      eps_exp *= u_;
      for (const auto& [g, cg] : cocycle_) {
        auto gt = c.find(g);
        if (gt != c.end()) eps_exp += mpq_class(cg) * gt->second;
      }
      if (eps_exp == 0)
        c.erase(generator_registry::eps_id);
      else
        c[generator_registry::eps_id] = eps_exp;
    }
    return r;
  }

private:
  mpq_class u_ = 1;
  std::map<int, mpz_class> cocycle_;
};

}  // namespace padcal
