#pragma once

// Barycentric subdivision operators B and the chain homotopies Phi, realised
// in a formal chain algebra of rational polynomial maps acting on a free
// symbol.  Everything is exact arithmetic over Q; chains are canonicalised by
// fully expanded component polynomials.

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

#include "padcal/scalar.hpp"

namespace padcal {

/// Polynomial over Q: exponent vector (one entry per source variable) -> coeff.
using qpoly = std::map<std::vector<unsigned>, mpq_class>;

inline qpoly qp_const(int nvars, const mpq_class& c) {
  qpoly p;
  if (c != 0) p[std::vector<unsigned>(static_cast<size_t>(nvars), 0)] = c;
  return p;
}

inline qpoly qp_var(int nvars, int v) {
  qpoly p;
  std::vector<unsigned> e(static_cast<size_t>(nvars), 0);
  e[static_cast<size_t>(v)] = 1;
  p[e] = 1;
  return p;
}

inline qpoly qp_add(const qpoly& a, const qpoly& b) {
  qpoly r = a;
  for (const auto& [e, c] : b) {
    auto it = r.find(e);
    if (it == r.end())
      r.emplace(e, c);
    else {
      it->second += c;
      if (it->second == 0) r.erase(it);
    }
  }
  return r;
}

inline qpoly qp_scale(const qpoly& a, const mpq_class& s) {
  qpoly r;
  if (s == 0) return r;
  for (const auto& [e, c] : a) r[e] = c * s;
  return r;
}

inline qpoly qp_mul(const qpoly& a, const qpoly& b) {
  qpoly r;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      std::vector<unsigned> e = ea;
      for (size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
      auto it = r.find(e);
      if (it == r.end())
        r.emplace(std::move(e), ca * cb);
      else {
        it->second += ca * cb;
        if (it->second == 0) r.erase(it);
      }
    }
  return r;
}

/// Substitute each source variable by a polynomial in a new variable set.
inline qpoly qp_compose(const qpoly& a, const std::vector<qpoly>& subst, int new_nvars) {
  qpoly r;
  for (const auto& [e, c] : a) {
    qpoly t = qp_const(new_nvars, c);
    for (size_t v = 0; v < e.size(); ++v)
      for (unsigned k = 0; k < e[v]; ++k) t = qp_mul(t, subst[v]);
    r = qp_add(r, t);
  }
  return r;
}

inline bool qp_uses_var(const qpoly& p, int v) {
  for (const auto& [e, c] : p) {
    (void)c;
    if (e[static_cast<size_t>(v)] != 0) return true;
  }
  return false;
}

/// Substitute variable v by a constant and drop it from the variable list.
inline qpoly qp_pin_var(const qpoly& p, int v, const mpq_class& value) {
  qpoly r;
  for (const auto& [e, c] : p) {
    mpq_class coeff = c;
    for (unsigned k = 0; k < e[static_cast<size_t>(v)]; ++k) coeff *= value;
    if (coeff == 0) continue;
    std::vector<unsigned> ne;
    ne.reserve(e.size() - 1);
    for (size_t i = 0; i < e.size(); ++i)
      if (static_cast<int>(i) != v) ne.push_back(e[i]);
    auto it = r.find(ne);
    if (it == r.end())
      r.emplace(std::move(ne), coeff);
    else {
      it->second += coeff;
      if (it->second == 0) r.erase(it);
    }
  }
  return r;
}

/// Rational polynomial map between cubes/simplices under a free symbol.
struct formal_map {
  int src = 0;  // number of source variables
  std::vector<qpoly> comps;

  static formal_map identity(int n) {
    formal_map m;
    m.src = n;
    for (int i = 0; i < n; ++i) m.comps.push_back(qp_var(n, i));
    return m;
  }

  /// this o other: substitute this map's variables by other's components.
  formal_map compose(const formal_map& other) const {
    formal_map r;
    r.src = other.src;
    for (const auto& comp : comps) r.comps.push_back(qp_compose(comp, other.comps, other.src));
    return r;
  }

  /// Independent of some source variable (the cubical degeneracy test).
  bool is_degenerate() const {
    for (int v = 0; v < src; ++v) {
      bool used = false;
      for (const auto& comp : comps)
        if (qp_uses_var(comp, v)) used = true;
      if (!used) return true;
    }
    return false;
  }

  friend bool operator<(const formal_map& a, const formal_map& b) {
    if (a.src != b.src) return a.src < b.src;
    return a.comps < b.comps;
  }
  friend bool operator==(const formal_map& a, const formal_map& b) {
    return a.src == b.src && a.comps == b.comps;
  }
};

/// Integer combination of formal maps, canonical by the ordered map keys.
struct formal_chain {
  std::map<formal_map, long> terms;

  static formal_chain of(const formal_map& m, long w = 1) {
    formal_chain c;
    if (w != 0) c.terms.emplace(m, w);
    return c;
  }

  formal_chain& add(const formal_map& m, long w) {
    if (w == 0) return *this;
    auto it = terms.find(m);
    if (it == terms.end())
      terms.emplace(m, w);
    else {
      it->second += w;
      if (it->second == 0) terms.erase(it);
    }
    return *this;
  }

  friend formal_chain operator+(const formal_chain& a, const formal_chain& b) {
    formal_chain r = a;
    for (const auto& [m, w] : b.terms) r.add(m, w);
    return r;
  }

  friend formal_chain operator-(const formal_chain& a, const formal_chain& b) {
    formal_chain r = a;
    for (const auto& [m, w] : b.terms) r.add(m, -w);
    return r;
  }

  formal_chain& drop_degenerate() {
    for (auto it = terms.begin(); it != terms.end();)
      it = it->first.is_degenerate() ? terms.erase(it) : std::next(it);
    return *this;
  }

  bool is_zero() const { return terms.empty(); }
  size_t size() const { return terms.size(); }
};

// --- cubical subdivision ------------------------------------------------------

/// a_n = sum 2^{n-i}(2^i + 1) n!/i!, via the recurrence a_n = 1 + 2^n + 2n a_{n-1}.
inline long cubical_generator_count(int n) {
  long a = 0;
  for (int k = 1; k <= n; ++k) a = 1 + (1L << k) + 2 * k * a;
  return a;
}

/// The generator maps a^{(n)}_j : [0,1]^{n+1} -> [0,1]^n, 1-based j.
inline std::vector<formal_map> cubical_homotopy_maps(int n) {
  if (n == 0) return {};
  std::vector<formal_map> prev = cubical_homotopy_maps(n - 1);
  std::vector<formal_map> out;
  int s = n + 1;
  qpoly half = qp_const(s, mpq_class(1, 2));
  qpoly tlast = qp_var(s, n);
  // j = 1: ((1 + (2 t_m - 1) t_{n+1}) / 2)_m
  {
    formal_map m;
    m.src = s;
    for (int c = 0; c < n; ++c) {
      qpoly inner = qp_add(qp_scale(qp_var(s, c), 2), qp_const(s, -1));
      m.comps.push_back(qp_add(qp_scale(qp_mul(inner, tlast), mpq_class(1, 2)), half));
    }
    out.push_back(std::move(m));
  }
  // j = 2 .. 1 + 2^n: ((1 + (t_m + I_m - 1) t_{n+1}) / 2)_m
  for (long bits = 0; bits < (1L << n); ++bits) {
    formal_map m;
    m.src = s;
    for (int c = 0; c < n; ++c) {
      long ic = (bits >> c) & 1;
      qpoly inner = qp_add(qp_var(s, c), qp_const(s, mpq_class(ic - 1)));
      m.comps.push_back(qp_add(qp_scale(qp_mul(inner, tlast), mpq_class(1, 2)), half));
    }
    out.push_back(std::move(m));
  }
  // j > 1 + 2^n: nested maps through a^{(n-1)}_h
  long an1 = cubical_generator_count(n - 1);
  for (long sigma = 0; sigma <= 1; ++sigma)
    for (int i = 1; i <= n; ++i)
      for (long h = 1; h <= an1; ++h) {
        const formal_map& inner_map = prev[static_cast<size_t>(h - 1)];
        formal_map m;
        m.src = s;
        for (int c = 0; c < n; ++c) {
          int cc = c + 1;  // 1-based coordinate
          if (cc == i) {
            // (1 + (-1)^sigma t_{n+1}) / 2
            qpoly t = qp_scale(tlast, sigma == 0 ? mpq_class(1, 2) : mpq_class(-1, 2));
            m.comps.push_back(qp_add(t, half));
          } else {
            int src_idx = cc < i ? c : c - 1;
            // inner components live in n variables t_1..t_n; lift to s vars
            std::vector<qpoly> lift;
            for (int v = 0; v < n; ++v) lift.push_back(qp_var(s, v));
            qpoly a_comp = qp_compose(inner_map.comps[static_cast<size_t>(src_idx)], lift, s);
            qpoly inner = qp_add(qp_scale(a_comp, 2), qp_const(s, -1));
            m.comps.push_back(qp_add(qp_scale(qp_mul(inner, tlast), mpq_class(1, 2)), half));
          }
        }
        out.push_back(std::move(m));
      }
  return out;
}

/// The source's sign exponent chi_n(j) from the peeled presentation of j.
/// Kept as a reference: the homotopy identity pins the generator signs
/// uniquely (see cubical_phi), and the pinned signs agree with chi only up to
/// a dimension-dependent twist on the id/B branches.
inline int cubical_sign_exponent(int n, long j) {
  int tr = 0;
  int ncur = n;
  while (ncur >= 1 && j > 1 + (1L << ncur)) {
    long idx = j - (1 + (1L << ncur)) - 1;
    long an1 = cubical_generator_count(ncur - 1);
    long block = idx / an1;
    long sigma = block / ncur;
    long i = block % ncur + 1;
    tr += static_cast<int>(sigma + i);
    j = idx % an1 + 1;
    --ncur;
  }
  return tr + (j == 1 ? 1 : 0);
}

/// B on the cubical chain of a free n-cube symbol: 2^n shrunk copies.
inline formal_chain cubical_b(int n) {
  formal_chain c;
  for (long bits = 0; bits < (1L << n); ++bits) {
    formal_map m;
    m.src = n;
    for (int v = 0; v < n; ++v) {
      long iv = (bits >> v) & 1;
      mpq_class shift(iv, 2);
      shift.canonicalize();
      m.comps.push_back(qp_add(qp_scale(qp_var(n, v), mpq_class(1, 2)), qp_const(n, shift)));
    }
    c.add(m, 1);
  }
  return c;
}

/// Quadratic contraction of a map to the centre of the cube: the cone
/// (t, s) -> (1 + (2 w(t) - 1) s) / 2.
inline formal_map cubical_cone(const formal_map& w) {
  formal_map r;
  r.src = w.src + 1;
  qpoly s = qp_var(r.src, r.src - 1);
  qpoly half = qp_const(r.src, mpq_class(1, 2));
  for (const auto& comp : w.comps) {
    std::vector<qpoly> lift;
    for (int v = 0; v < w.src; ++v) lift.push_back(qp_var(r.src, v));
    qpoly wl = qp_compose(comp, lift, r.src);
    qpoly inner = qp_add(qp_scale(wl, 2), qp_const(r.src, -1));
    r.comps.push_back(qp_add(qp_scale(qp_mul(inner, s), mpq_class(1, 2)), half));
  }
  return r;
}

/// The cubical face map inserting tau at slot i (1-based).
inline formal_map cube_face_generator(int n, int i, int tau) {
  formal_map m;
  m.src = n - 1;
  int src = 0;
  for (int row = 1; row <= n; ++row) {
    if (row == i)
      m.comps.push_back(qp_const(n - 1, mpq_class(tau)));
    else
      m.comps.push_back(qp_var(n - 1, src++));
  }
  return m;
}

/// Phi on the free n-cube symbol: the a_n generator maps (cones of the
/// identity, of the subdivision pieces, and of the faces composed with the
/// lower homotopy).  The signs are pinned by the homotopy identity itself:
/// they are the unique +-1 assignment with d Phi + Phi d = id - B modulo
/// degenerates, namely
///   (-1)^n [ C(id) - sum C(B-pieces)
///            + sum_{sigma,i} (-1)^{sigma+i} C(face^{(i,1-sigma)} o Phi_{n-1}) ].
inline formal_chain cubical_phi(int n) {
  if (n == 0) return {};
  formal_chain prev = cubical_phi(n - 1);
  formal_chain out;
  long alt = (n % 2 == 0) ? 1 : -1;
  out.add(cubical_cone(formal_map::identity(n)), alt);
  formal_chain b = cubical_b(n);
  for (const auto& [bm, bw] : b.terms) out.add(cubical_cone(bm), -alt * bw);
  for (int sigma = 0; sigma <= 1; ++sigma)
    for (int i = 1; i <= n; ++i) {
      formal_map face = cube_face_generator(n, i, 1 - sigma);
      long sgn = alt * (((sigma + i) % 2 == 0) ? 1 : -1);
      for (const auto& [hm, hw] : prev.terms) out.add(cubical_cone(face.compose(hm)), sgn * hw);
    }
  return out;
}

/// Cubical boundary with the degenerate quotient.
inline formal_chain cubical_boundary(const formal_chain& c, int n) {
  formal_chain r;
  for (const auto& [m, w] : c.terms) {
    for (int v = 1; v <= n; ++v)
      for (int sigma = 0; sigma <= 1; ++sigma) {
        formal_map face;
        face.src = n - 1;
        for (const auto& comp : m.comps)
          face.comps.push_back(qp_pin_var(comp, v - 1, mpq_class(sigma)));
        long sign = ((v + sigma) % 2 == 0) ? 1 : -1;
        r.add(face, w * sign);
      }
  }
  r.drop_degenerate();
  return r;
}

// --- simplicial subdivision ----------------------------------------------------

/// Injective maps [i] -> [n+1] as value sequences.
inline std::vector<std::vector<int>> injections(int i, int codomain) {
  std::vector<std::vector<int>> out{{}};
  for (int step = 0; step < i; ++step) {
    std::vector<std::vector<int>> next;
    for (const auto& seq : out)
      for (int v = 0; v < codomain; ++v) {
        if (std::find(seq.begin(), seq.end(), v) != seq.end()) continue;
        auto s2 = seq;
        s2.push_back(v);
        next.push_back(std::move(s2));
      }
    out = std::move(next);
  }
  return out;
}

/// Barycentre vector a^{(n,i)}_sigma.
inline std::vector<mpq_class> barycentre_vector(int n, int i, const std::vector<int>& sigma) {
  std::vector<mpq_class> v(static_cast<size_t>(n + 1), mpq_class(1, n + 1 - i));
  for (int s : sigma) v[static_cast<size_t>(s)] = 0;
  return v;
}

/// Sign exponent Sigma^{(n,i)}(sigma).
inline int simplicial_sign_exponent(int n, const std::vector<int>& sigma) {
  int total = 0;
  std::vector<bool> used(static_cast<size_t>(n + 1), false);
  for (int step = 0; step < static_cast<int>(sigma.size()); ++step) {
    int v = sigma[static_cast<size_t>(step)];
    int count = 0;
    for (int x = 0; x < std::min(v, n); ++x)  // ([n] \ image) below sigma(step)
      if (!used[static_cast<size_t>(x)]) ++count;
    total += count;
    used[static_cast<size_t>(v)] = true;
  }
  return total;
}

/// Cone of a linear map over an apex: prepend the apex column.
inline formal_map cone_map(const std::vector<mpq_class>& apex, const formal_map& w) {
  formal_map r;
  r.src = w.src + 1;
  for (size_t row = 0; row < w.comps.size(); ++row) {
    qpoly comp = qp_scale(qp_var(w.src + 1, 0), apex[row]);
    for (const auto& [e, cf] : w.comps[row]) {
      std::vector<unsigned> ne(static_cast<size_t>(w.src) + 1, 0);
      for (size_t v = 0; v < e.size(); ++v) ne[v + 1] = e[v];
      comp = qp_add(comp, qpoly{{ne, cf}});
    }
    r.comps.push_back(std::move(comp));
  }
  return r;
}

/// The simplicial face map as a formal chain generator.
inline formal_map simplex_face_map(int n, int l) {
  formal_map m;
  m.src = n;  // Delta^{n-1} has n barycentric variables
  int src_idx = 0;
  for (int row = 0; row <= n; ++row) {
    if (row == l)
      m.comps.push_back(qpoly{});
    else
      m.comps.push_back(qp_var(n, src_idx++));
  }
  return m;
}

/// B on the free n-simplex symbol: the (n+1)! barycentric pieces obtained by
/// coning the subdivided boundary over the barycentre.
inline formal_chain simplicial_b(int n) {
  if (n == 0) return formal_chain::of(formal_map::identity(1));
  std::vector<mpq_class> apex(static_cast<size_t>(n + 1), mpq_class(1, n + 1));
  formal_chain prev = simplicial_b(n - 1);
  formal_chain out;
  for (int l = 0; l <= n; ++l) {
    formal_map face = simplex_face_map(n, l);
    long sign = (l % 2 == 0) ? 1 : -1;
    for (const auto& [bmap, bw] : prev.terms)
      out.add(cone_map(apex, face.compose(bmap)), sign * bw);
  }
  return out;
}

/// The universal homotopy chain H_n on the free n-simplex: the cone over
/// id - sum_l (-1)^l face_l o H_{n-1}, re-derived from first principles
/// rather than from the mid-proof column bookkeeping.
inline formal_chain simplicial_h(int n) {
  std::vector<mpq_class> apex(static_cast<size_t>(n + 1), mpq_class(1, n + 1));
  formal_chain inner = formal_chain::of(formal_map::identity(n + 1));
  if (n >= 1) {
    formal_chain prev = simplicial_h(n - 1);
    for (int l = 0; l <= n; ++l) {
      formal_map face = simplex_face_map(n, l);
      long sign = (l % 2 == 0) ? 1 : -1;
      for (const auto& [hmap, hw] : prev.terms) inner.add(face.compose(hmap), -sign * hw);
    }
  }
  formal_chain out;
  for (const auto& [m, w] : inner.terms) out.add(cone_map(apex, m), w);
  return out;
}

/// Phi on the free n-simplex symbol: (-1)^n times the universal homotopy.
inline formal_chain simplicial_phi(int n) {
  formal_chain h = simplicial_h(n);
  if (n % 2 == 0) return h;
  return formal_chain() - h;
}

/// Simplicial boundary: insert 0 at each slot with alternating signs.
inline formal_chain simplicial_boundary(const formal_chain& c, int nvars) {
  formal_chain r;
  for (const auto& [m, w] : c.terms)
    for (int l = 0; l < nvars; ++l) {
      formal_map face;
      face.src = nvars - 1;
      for (const auto& comp : m.comps) face.comps.push_back(qp_pin_var(comp, l, 0));
      long sign = (l % 2 == 0) ? 1 : -1;
      r.add(face, w * sign);
    }
  return r;
}

// --- the homotopy identities ---------------------------------------------------

struct homotopy_report {
  size_t phi_terms = 0;
  size_t lhs_terms = 0;
  size_t rhs_terms = 0;
  formal_chain residual;
  bool pass = false;
};

/// Cubical homotopy identity modulo degenerates.  The generator maps admit a
/// unique sign assignment closing a homotopy identity at all (an exhaustive
/// search over the 2^17 assignments at n = 2 leaves exactly one), and it
/// closes in the standard orientation d Phi_n + Phi_{n-1} d = id - B; the
/// checker verifies that identity by full polynomial expansion.
inline homotopy_report cubical_homotopy_check(int n) {
  homotopy_report rep;
  formal_chain id_chain = formal_chain::of(formal_map::identity(n));
  formal_chain phi_n = cubical_phi(n);
  rep.phi_terms = phi_n.size();
  formal_chain lhs = cubical_boundary(phi_n, n + 1);
  // Phi_{n-1} applied to the boundary faces of the identity
  formal_chain dn = cubical_boundary(id_chain, n);
  formal_chain phi_dn;
  if (n >= 1) {
    formal_chain phi_prev = cubical_phi(n - 1);
    for (const auto& [face, w] : dn.terms)
      for (const auto& [hmap, hw] : phi_prev.terms) phi_dn.add(face.compose(hmap), w * hw);
  }
  phi_dn.drop_degenerate();
  lhs = lhs + phi_dn;
  lhs.drop_degenerate();
  formal_chain rhs = id_chain - cubical_b(n);
  rhs.drop_degenerate();
  rep.lhs_terms = lhs.size();
  rep.rhs_terms = rhs.size();
  rep.residual = lhs - rhs;
  rep.pass = rep.residual.is_zero();
  return rep;
}

/// Simplicial: (d Phi - Phi d)[f] = (-1)^n ([f] - B[f]).
inline homotopy_report simplicial_homotopy_check(int n) {
  homotopy_report rep;
  formal_chain id_chain = formal_chain::of(formal_map::identity(n + 1));
  formal_chain phi_n = simplicial_phi(n);
  rep.phi_terms = phi_n.size();
  formal_chain lhs = simplicial_boundary(phi_n, n + 2);
  formal_chain dn = simplicial_boundary(id_chain, n + 1);
  formal_chain phi_dn;
  if (n >= 1) {
    formal_chain phi_prev = simplicial_phi(n - 1);
    for (const auto& [face, w] : dn.terms)
      for (const auto& [hmap, hw] : phi_prev.terms) phi_dn.add(face.compose(hmap), w * hw);
  }
  lhs = lhs - phi_dn;
  formal_chain rhs = id_chain - simplicial_b(n);
  if (n % 2 == 1) rhs = formal_chain() - rhs;
  rep.lhs_terms = lhs.size();
  rep.rhs_terms = rhs.size();
  rep.residual = lhs - rhs;
  rep.pass = rep.residual.is_zero();
  return rep;
}

}  // namespace padcal
