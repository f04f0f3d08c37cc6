#pragma once

// Integer-inequality polytopes in R^n with exact rational vertex data, the
// lattice L(S) of integer affine forms vanishing on S, deterministic thick
// representatives, and the wedge/veebar covering algebra.

#include <gmpxx.h>

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "padcal/scalar.hpp"

namespace padcal {

using qvec = std::vector<mpq_class>;
using zvec = std::vector<mpz_class>;

/// Integer affine form a_1 t_1 + ... + a_n t_n + b.
struct linform {
  zvec a;
  mpz_class b;

  mpq_class eval(const qvec& t) const {
    mpq_class s = b;
    for (size_t i = 0; i < a.size(); ++i) s += mpq_class(a[i]) * t[i];
    return s;
  }
  friend bool operator==(const linform& x, const linform& y) { return x.a == y.a && x.b == y.b; }
  friend bool operator<(const linform& x, const linform& y) {
    return x.a != y.a ? x.a < y.a : x.b < y.b;
  }
};

/// Integral affine map t -> A t + b from R^n to R^m.
class affine_map {
public:
  affine_map() = default;
  affine_map(std::vector<zvec> mat, zvec shift) : a_(std::move(mat)), b_(std::move(shift)) {}

  static affine_map identity(int n) {
    std::vector<zvec> m(static_cast<size_t>(n), zvec(static_cast<size_t>(n), 0));
    for (int i = 0; i < n; ++i) m[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
    return affine_map(std::move(m), zvec(static_cast<size_t>(n), 0));
  }

  int rows() const { return static_cast<int>(a_.size()); }
  int cols() const { return a_.empty() ? cols_hint_ : static_cast<int>(a_[0].size()); }
  void set_cols_hint(int n) { cols_hint_ = n; }

  const mpz_class& at(int r, int c) const { return a_[static_cast<size_t>(r)][static_cast<size_t>(c)]; }
  const mpz_class& shift(int r) const { return b_[static_cast<size_t>(r)]; }

  qvec apply(const qvec& t) const {
    qvec r(a_.size());
    for (size_t i = 0; i < a_.size(); ++i) {
      mpq_class s = b_[i];
      for (size_t j = 0; j < a_[i].size(); ++j) s += mpq_class(a_[i][j]) * t[j];
      r[i] = s;
    }
    return r;
  }

  /// this o other (apply other first).
  affine_map compose(const affine_map& other) const {
    if (cols() != other.rows())
      throw calc_error(errc::dimension_mismatch, "affine map composition mismatch");
    int m = rows(), n = other.cols(), k = other.rows();
    std::vector<zvec> mat(static_cast<size_t>(m), zvec(static_cast<size_t>(n), 0));
    zvec shift(static_cast<size_t>(m), 0);
    for (int i = 0; i < m; ++i) {
      shift[static_cast<size_t>(i)] = b_[static_cast<size_t>(i)];
      for (int l = 0; l < k; ++l) {
        shift[static_cast<size_t>(i)] += at(i, l) * other.shift(l);
        for (int j = 0; j < n; ++j)
          mat[static_cast<size_t>(i)][static_cast<size_t>(j)] += at(i, l) * other.at(l, j);
      }
    }
    affine_map r(std::move(mat), std::move(shift));
    r.set_cols_hint(n);
    return r;
  }

  friend bool operator==(const affine_map& x, const affine_map& y) {
    return x.a_ == y.a_ && x.b_ == y.b_;
  }

private:
  std::vector<zvec> a_;
  zvec b_;
  int cols_hint_ = 0;
};

namespace detail {

// --- exact linear algebra helpers ------------------------------------------

inline int rank_of(std::vector<qvec> rows) {
  size_t n = rows.empty() ? 0 : rows[0].size();
  int rank = 0;
  size_t col = 0;
  for (size_t r = 0; r < rows.size() && col < n; ++col) {
    size_t piv = r;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][col] == 0) continue;
      mpq_class f = rows[i][col] / rows[r][col];
      for (size_t j = col; j < n; ++j) rows[i][j] -= f * rows[r][j];
    }
    ++r;
    ++rank;
  }
  return rank;
}

/// Saturated basis of the integer kernel {x : W x = 0} of an integer matrix,
/// via unimodular column elimination.
inline std::vector<zvec> integer_kernel(const std::vector<zvec>& w, int ncols) {
  std::vector<zvec> cols(static_cast<size_t>(ncols));
  std::vector<zvec> shadow(static_cast<size_t>(ncols), zvec(static_cast<size_t>(ncols), 0));
  for (int c = 0; c < ncols; ++c) {
    cols[static_cast<size_t>(c)].resize(w.size());
    for (size_t r = 0; r < w.size(); ++r) cols[static_cast<size_t>(c)][r] = w[r][static_cast<size_t>(c)];
    shadow[static_cast<size_t>(c)][static_cast<size_t>(c)] = 1;
  }
  size_t lead = 0;
  for (size_t row = 0; row < w.size() && lead < cols.size(); ++row) {
    // clear row entries right of `lead` into a single pivot column
    while (true) {
      size_t nz = cols.size();
      for (size_t c = lead; c < cols.size(); ++c)
        if (cols[c][row] != 0 && (nz == cols.size() || abs(cols[c][row]) < abs(cols[nz][row]))) nz = c;
      if (nz == cols.size()) break;
      std::swap(cols[lead], cols[nz]);
      std::swap(shadow[lead], shadow[nz]);
      bool done = true;
      for (size_t c = lead + 1; c < cols.size(); ++c) {
        if (cols[c][row] == 0) continue;
        mpz_class q = cols[c][row] / cols[lead][row];
        for (size_t r = 0; r < w.size(); ++r) cols[c][r] -= q * cols[lead][r];
        for (size_t r = 0; r < shadow[c].size(); ++r) shadow[c][r] -= q * shadow[lead][r];
        if (cols[c][row] != 0) done = false;
      }
      if (done) {
        ++lead;
        break;
      }
    }
  }
  std::vector<zvec> kernel;
  for (size_t c = 0; c < cols.size(); ++c) {
    bool zero = true;
    for (size_t r = 0; r < w.size(); ++r)
      if (cols[c][r] != 0) zero = false;
    if (zero) kernel.push_back(shadow[c]);
  }
  std::sort(kernel.begin(), kernel.end());
  return kernel;
}

/// Smith normal form diagonal of an integer matrix (destructive helper).
inline std::vector<mpz_class> snf_diagonal(std::vector<zvec> m) {
  std::vector<mpz_class> diag;
  size_t rows = m.size();
  if (rows == 0) return diag;
  size_t cols = m[0].size();
  size_t t = 0;
  while (t < rows && t < cols) {
    // find nonzero pivot
    size_t pr = rows, pc = cols;
    for (size_t i = t; i < rows; ++i)
      for (size_t j = t; j < cols; ++j)
        if (m[i][j] != 0 && (pr == rows || abs(m[i][j]) < abs(m[pr][pc]))) {
          pr = i;
          pc = j;
        }
    if (pr == rows) break;
    std::swap(m[t], m[pr]);
    for (size_t i = 0; i < rows; ++i) std::swap(m[i][t], m[i][pc]);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (size_t i = t + 1; i < rows; ++i) {
        if (m[i][t] == 0) continue;
        mpz_class q = m[i][t] / m[t][t];
        for (size_t j = 0; j < cols; ++j) m[i][j] -= q * m[t][j];
        if (m[i][t] != 0) {
          std::swap(m[t], m[i]);
          clean = false;
        }
      }
      for (size_t j = t + 1; j < cols; ++j) {
        if (m[t][j] == 0) continue;
        mpz_class q = m[t][j] / m[t][t];
        for (size_t i = 0; i < rows; ++i) m[i][j] -= q * m[i][t];
        if (m[t][j] != 0) {
          for (size_t i = 0; i < rows; ++i) std::swap(m[i][t], m[i][j]);
          clean = false;
        }
      }
    }
    diag.push_back(abs(m[t][t]));
    ++t;
  }
  return diag;
}

/// True iff the rows span a rank-k saturated sublattice (SNF divisors all 1).
inline bool saturated_full_rank(const std::vector<zvec>& rows) {
  auto d = snf_diagonal(rows);
  if (d.size() != rows.size()) return false;
  for (const auto& x : d)
    if (x != 1) return false;
  return true;
}

/// Inverse of a unimodular integer matrix (entries stay integral).
inline std::vector<zvec> unimodular_inverse(const std::vector<zvec>& u) {
  size_t n = u.size();
  std::vector<qvec> aug(n, qvec(2 * n, 0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) aug[i][j] = mpq_class(u[i][j]);
    aug[i][n + i] = 1;
  }
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && aug[piv][c] == 0) ++piv;
    if (piv == n) throw calc_error(errc::domain_error, "singular matrix");
    std::swap(aug[c], aug[piv]);
    mpq_class d = aug[c][c];
    for (size_t j = 0; j < 2 * n; ++j) aug[c][j] /= d;
    for (size_t i = 0; i < n; ++i) {
      if (i == c || aug[i][c] == 0) continue;
      mpq_class f = aug[i][c];
      for (size_t j = 0; j < 2 * n; ++j) aug[i][j] -= f * aug[c][j];
    }
  }
  std::vector<zvec> inv(n, zvec(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      mpq_class v = aug[i][n + j];
      if (v.get_den() != 1) throw calc_error(errc::domain_error, "matrix not unimodular");
      inv[i][j] = v.get_num();
    }
  return inv;
}

struct qineq {
  qvec a;
  mpq_class b;
};

/// One Fourier-Motzkin elimination step for variable `var`.
inline std::vector<qineq> fm_eliminate(const std::vector<qineq>& sys, size_t var) {
  std::vector<qineq> zero, pos, neg;
  for (const auto& q : sys) {
    if (q.a[var] == 0)
      zero.push_back(q);
    else if (q.a[var] > 0)
      pos.push_back(q);
    else
      neg.push_back(q);
  }
  for (const auto& pp : pos)
    for (const auto& nn : neg) {
      qineq c;
      c.a.assign(sys[0].a.size(), 0);
      mpq_class alpha = pp.a[var], beta = -nn.a[var];
      for (size_t j = 0; j < c.a.size(); ++j) c.a[j] = beta * pp.a[j] + alpha * nn.a[j];
      c.b = beta * pp.b + alpha * nn.b;
      c.a[var] = 0;
      zero.push_back(std::move(c));
    }
  return zero;
}

}  // namespace detail

class polytope;
using polytope_ptr = std::shared_ptr<const polytope>;

/// Thick-representative data: a thick polytope T of dimension m = dim S and a
/// mutually inverse pair of integral affine isomorphisms.
struct thick_rep {
  polytope_ptr t;
  affine_map to_thick;    // S -> T
  affine_map from_thick;  // T -> S
};

class polytope {
public:
  /// The empty polytope is a first-class value (k_empty = 0).
  static polytope_ptr empty(int n) {
    auto s = std::shared_ptr<polytope>(new polytope());
    s->n_ = n;
    s->empty_ = true;
    return s;
  }

  static polytope_ptr make(int n, std::vector<linform> ineqs) {
    auto s = std::shared_ptr<polytope>(new polytope());
    s->n_ = n;
    s->ineqs_ = std::move(ineqs);
    s->init();
    return s;
  }

  static polytope_ptr interval(long n_upper) { return box({{0, n_upper}}); }

  static polytope_ptr cube(int n, long side) {
    std::vector<std::pair<long, long>> b(static_cast<size_t>(n), {0, side});
    return box(b);
  }

  static polytope_ptr box(const std::vector<std::pair<long, long>>& bounds) {
    int n = static_cast<int>(bounds.size());
    if (n == 0) return make(0, {linform{{}, 0}});
    std::vector<linform> fs;
    for (int i = 0; i < n; ++i) {
      linform lo;
      lo.a.assign(static_cast<size_t>(n), 0);
      lo.a[static_cast<size_t>(i)] = 1;
      lo.b = -bounds[static_cast<size_t>(i)].first;
      fs.push_back(lo);
      linform hi;
      hi.a.assign(static_cast<size_t>(n), 0);
      hi.a[static_cast<size_t>(i)] = -1;
      hi.b = bounds[static_cast<size_t>(i)].second;
      fs.push_back(hi);
    }
    return make(n, std::move(fs));
  }

  /// Normalised simplex N * Delta^n in R^{n+1}: t_i >= 0, sum t_i = N.
  static polytope_ptr simplex(int n, long scale) {
    int amb = n + 1;
    std::vector<linform> fs;
    for (int i = 0; i < amb; ++i) {
      linform f;
      f.a.assign(static_cast<size_t>(amb), 0);
      f.a[static_cast<size_t>(i)] = 1;
      f.b = 0;
      fs.push_back(f);
    }
    linform up, dn;
    up.a.assign(static_cast<size_t>(amb), 1);
    up.b = -scale;
    dn.a.assign(static_cast<size_t>(amb), -1);
    dn.b = scale;
    fs.push_back(up);
    fs.push_back(dn);
    return make(amb, std::move(fs));
  }

  static polytope_ptr product(const polytope_ptr& s1, const polytope_ptr& s2) {
    if (s1->empty_ || s2->empty_) return empty(s1->n_ + s2->n_);
    int n = s1->n_ + s2->n_;
    std::vector<linform> fs;
    for (const auto& f : s1->ineqs_) {
      linform g;
      g.a = f.a;
      g.a.resize(static_cast<size_t>(n), 0);
      g.b = f.b;
      fs.push_back(std::move(g));
    }
    for (const auto& f : s2->ineqs_) {
      linform g;
      g.a.assign(static_cast<size_t>(n), 0);
      for (size_t j = 0; j < f.a.size(); ++j) g.a[static_cast<size_t>(s1->n_) + j] = f.a[j];
      g.b = f.b;
      fs.push_back(std::move(g));
    }
    return make(n, std::move(fs));
  }

  int ambient_dim() const { return n_; }
  bool is_empty() const { return empty_; }
  const std::vector<linform>& inequalities() const { return ineqs_; }
  const std::vector<qvec>& vertices() const { return verts_; }
  int dim() const { return dim_; }
  const std::vector<linform>& lattice_basis() const { return lattice_; }
  bool is_thick() const { return lattice_.empty(); }

  bool contains(const qvec& t) const {
    if (empty_) return false;
    for (const auto& f : ineqs_)
      if (f.eval(t) < 0) return false;
    return true;
  }

  /// Barycentre of the vertex set: a point of the relative interior.
  qvec relint_point() const {
    qvec c(static_cast<size_t>(n_), 0);
    for (const auto& v : verts_)
      for (size_t i = 0; i < v.size(); ++i) c[i] += v[i];
    for (auto& x : c) x /= static_cast<long>(verts_.size());
    return c;
  }

  /// Constraints that vanish identically on the polytope.
  bool is_implicit_equality(const linform& f) const {
    for (const auto& v : verts_)
      if (f.eval(v) != 0) return false;
    return true;
  }

  /// t lies in the relative interior: every non-implicit constraint is strict.
  bool relint_contains(const qvec& t) const {
    if (empty_) return false;
    for (const auto& f : ineqs_) {
      mpq_class v = f.eval(t);
      if (v < 0) return false;
      if (v == 0 && !is_implicit_equality(f)) return false;
    }
    return true;
  }

  const thick_rep& thick() const { return thick_; }

  /// Point sets agree (compared through canonical vertex lists + dimension).
  friend bool same_polytope(const polytope& a, const polytope& b) {
    if (a.empty_ || b.empty_) return a.empty_ == b.empty_;
    return a.n_ == b.n_ && a.verts_ == b.verts_;
  }

private:
  polytope() = default;

  void init() {
    if (ineqs_.empty()) throw calc_error(errc::domain_error, "a polytope needs inequalities");
    check_bounded_nonempty();
    enumerate_vertices();
    if (verts_.empty()) throw calc_error(errc::domain_error, "empty polytope in constructor");
    compute_dim();
    compute_lattice();
    compute_thick();
  }

  void check_bounded_nonempty() {
    using detail::qineq;
    std::vector<qineq> sys;
    for (const auto& f : ineqs_) {
      qineq q;
      q.a.resize(static_cast<size_t>(n_));
      for (int j = 0; j < n_; ++j) q.a[static_cast<size_t>(j)] = mpq_class(f.a[static_cast<size_t>(j)]);
      q.b = mpq_class(f.b);
      sys.push_back(std::move(q));
    }
    // feasibility: eliminate everything, constants must stay >= 0
    {
      auto cur = sys;
      for (int v = 0; v < n_; ++v) cur = detail::fm_eliminate(cur, static_cast<size_t>(v));
      for (const auto& q : cur)
        if (q.b < 0) throw calc_error(errc::domain_error, "polytope is empty");
    }
    // boundedness: each coordinate must acquire both bounds after eliminating the rest
    for (int keep = 0; keep < n_; ++keep) {
      auto cur = sys;
      for (int v = 0; v < n_; ++v)
        if (v != keep) cur = detail::fm_eliminate(cur, static_cast<size_t>(v));
      bool has_upper = false, has_lower = false;
      for (const auto& q : cur) {
        if (q.a[static_cast<size_t>(keep)] > 0) has_lower = true;
        if (q.a[static_cast<size_t>(keep)] < 0) has_upper = true;
      }
      if (!(has_upper && has_lower))
        throw calc_error(errc::domain_error, "polytope is unbounded");
    }
  }

  void enumerate_vertices() {
    std::set<qvec> found;
    int m = static_cast<int>(ineqs_.size());
    std::vector<int> idx(static_cast<size_t>(n_), 0);
    std::vector<int> comb;
    enumerate_combinations(m, n_, comb, found);
    verts_.assign(found.begin(), found.end());
  }

  void enumerate_combinations(int m, int k, std::vector<int>& comb, std::set<qvec>& out) {
    if (n_ == 0) {
      qvec v;  // R^0: the single point
      if (contains(v)) out.insert(v);
      return;
    }
    if (static_cast<int>(comb.size()) == k) {
      solve_active_set(comb, out);
      return;
    }
    int start = comb.empty() ? 0 : comb.back() + 1;
    for (int i = start; i < m; ++i) {
      comb.push_back(i);
      enumerate_combinations(m, k, comb, out);
      comb.pop_back();
    }
  }

  void solve_active_set(const std::vector<int>& comb, std::set<qvec>& out) {
    std::vector<qvec> aug(static_cast<size_t>(n_), qvec(static_cast<size_t>(n_) + 1, 0));
    for (int r = 0; r < n_; ++r) {
      const linform& f = ineqs_[static_cast<size_t>(comb[static_cast<size_t>(r)])];
      for (int c = 0; c < n_; ++c) aug[static_cast<size_t>(r)][static_cast<size_t>(c)] = mpq_class(f.a[static_cast<size_t>(c)]);
      aug[static_cast<size_t>(r)][static_cast<size_t>(n_)] = mpq_class(-f.b);
    }
    // unique solution via Gaussian elimination
    for (int c = 0; c < n_; ++c) {
      int piv = -1;
      for (int r = c; r < n_; ++r)
        if (aug[static_cast<size_t>(r)][static_cast<size_t>(c)] != 0) {
          piv = r;
          break;
        }
      if (piv < 0) return;  // singular: no isolated intersection point
      std::swap(aug[static_cast<size_t>(c)], aug[static_cast<size_t>(piv)]);
      mpq_class d = aug[static_cast<size_t>(c)][static_cast<size_t>(c)];
      for (int j = c; j <= n_; ++j) aug[static_cast<size_t>(c)][static_cast<size_t>(j)] /= d;
      for (int r = 0; r < n_; ++r) {
        if (r == c || aug[static_cast<size_t>(r)][static_cast<size_t>(c)] == 0) continue;
        mpq_class f = aug[static_cast<size_t>(r)][static_cast<size_t>(c)];
        for (int j = c; j <= n_; ++j)
          aug[static_cast<size_t>(r)][static_cast<size_t>(j)] -= f * aug[static_cast<size_t>(c)][static_cast<size_t>(j)];
      }
    }
    qvec v(static_cast<size_t>(n_));
    for (int i = 0; i < n_; ++i) v[static_cast<size_t>(i)] = aug[static_cast<size_t>(i)][static_cast<size_t>(n_)];
    if (contains(v)) out.insert(v);
  }

  void compute_dim() {
    std::vector<qvec> diffs;
    for (size_t i = 1; i < verts_.size(); ++i) {
      qvec d(static_cast<size_t>(n_));
      for (int j = 0; j < n_; ++j)
        d[static_cast<size_t>(j)] = verts_[i][static_cast<size_t>(j)] - verts_[0][static_cast<size_t>(j)];
      diffs.push_back(std::move(d));
    }
    dim_ = diffs.empty() ? 0 : detail::rank_of(diffs);
  }

  void compute_lattice() {
    // integer kernel of the matrix with rows (v | 1), one per vertex
    std::vector<zvec> w;
    for (const auto& v : verts_) {
      mpz_class den = 1;
      for (const auto& x : v) den = lcm(den, x.get_den());
      zvec row(static_cast<size_t>(n_) + 1);
      for (int j = 0; j < n_; ++j) {
        mpq_class scaled = v[static_cast<size_t>(j)] * mpq_class(den);
        row[static_cast<size_t>(j)] = scaled.get_num();
      }
      row[static_cast<size_t>(n_)] = den;
      w.push_back(std::move(row));
    }
    auto kernel = detail::integer_kernel(w, n_ + 1);
    lattice_.clear();
    for (const auto& k : kernel) {
      linform f;
      f.a.assign(k.begin(), k.end() - 1);
      f.b = k.back();
      // sign convention: first nonzero coefficient positive
      for (size_t j = 0; j <= static_cast<size_t>(n_); ++j) {
        mpz_class lead = j < static_cast<size_t>(n_) ? f.a[j] : f.b;
        if (lead == 0) continue;
        if (lead < 0) {
          for (auto& x : f.a) x = -x;
          f.b = -f.b;
        }
        break;
      }
      lattice_.push_back(std::move(f));
    }
    std::sort(lattice_.begin(), lattice_.end());
  }

  void compute_thick();

  int n_ = 0;
  bool empty_ = false;
  std::vector<linform> ineqs_;
  std::vector<qvec> verts_;
  int dim_ = 0;
  std::vector<linform> lattice_;
  thick_rep thick_;
};

inline void polytope::compute_thick() {
  int r = static_cast<int>(lattice_.size());
  int nn = n_ + 1;
  if (r == 0) {
    thick_.t = nullptr;  // self
    thick_.to_thick = affine_map::identity(n_);
    thick_.from_thick = affine_map::identity(n_);
    return;
  }
  // complete [L basis; ...; (0,..,0,1)] to a unimodular basis of Z^{n+1},
  // preferring the coordinate forms t_1, t_2, ... in order
  std::vector<zvec> rows;
  for (const auto& f : lattice_) {
    zvec row(f.a.begin(), f.a.end());
    row.push_back(f.b);
    rows.push_back(std::move(row));
  }
  zvec unit_row(static_cast<size_t>(nn), 0);
  unit_row[static_cast<size_t>(nn - 1)] = 1;
  std::vector<zvec> middle;
  for (int i = 0; i < n_ && static_cast<int>(middle.size()) < n_ - r; ++i) {
    zvec cand(static_cast<size_t>(nn), 0);
    cand[static_cast<size_t>(i)] = 1;
    std::vector<zvec> test = rows;
    test.insert(test.end(), middle.begin(), middle.end());
    test.push_back(cand);
    test.push_back(unit_row);
    if (detail::saturated_full_rank(test)) middle.push_back(cand);
  }
  if (static_cast<int>(middle.size()) < n_ - r)
    throw calc_error(errc::domain_error, "thick representative basis completion failed");
  std::vector<zvec> u = rows;
  u.insert(u.end(), middle.begin(), middle.end());
  u.push_back(unit_row);
  std::vector<zvec> f = detail::unimodular_inverse(u);

  int m = n_ - r;
  // a: S -> T given by the middle forms
  std::vector<zvec> amat(static_cast<size_t>(m), zvec(static_cast<size_t>(n_)));
  zvec ashift(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n_; ++i) amat[static_cast<size_t>(j)][static_cast<size_t>(i)] = middle[static_cast<size_t>(j)][static_cast<size_t>(i)];
    ashift[static_cast<size_t>(j)] = middle[static_cast<size_t>(j)][static_cast<size_t>(n_)];
  }
  affine_map a(std::move(amat), std::move(ashift));
  a.set_cols_hint(n_);

  // a_inv: T -> S expressing t_i in the completed basis with e_L = 0, e_last = 1
  std::vector<zvec> bmat(static_cast<size_t>(n_), zvec(static_cast<size_t>(m)));
  zvec bshift(static_cast<size_t>(n_));
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < m; ++j) bmat[static_cast<size_t>(i)][static_cast<size_t>(j)] = f[static_cast<size_t>(i)][static_cast<size_t>(r + j)];
    bshift[static_cast<size_t>(i)] = f[static_cast<size_t>(i)][static_cast<size_t>(nn - 1)];
  }
  affine_map ainv(std::move(bmat), std::move(bshift));
  ainv.set_cols_hint(m);

  // T: pull the inequalities of S through a_inv
  std::vector<linform> tineqs;
  for (const auto& fi : ineqs_) {
    linform g;
    g.a.assign(static_cast<size_t>(m), 0);
    g.b = fi.b;
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < m; ++j) g.a[static_cast<size_t>(j)] += fi.a[static_cast<size_t>(i)] * ainv.at(i, j);
      g.b += fi.a[static_cast<size_t>(i)] * ainv.shift(i);
    }
    bool trivial = g.b >= 0;
    for (const auto& c : g.a)
      if (c != 0) trivial = false;
    if (!trivial) tineqs.push_back(std::move(g));
  }
  if (tineqs.empty()) {
    // zero-dimensional thick representative: a single point in R^0
    thick_.t = polytope::make(0, {linform{{}, 0}});
  } else {
    thick_.t = polytope::make(m, std::move(tineqs));
  }
  thick_.to_thick = a;
  thick_.from_thick = ainv;
  if (!thick_.t->is_thick())
    throw calc_error(errc::domain_error, "thick representative is not thick");
}

/// Resolve the thick representative (identity for thick polytopes).
inline polytope_ptr thick_of(const polytope_ptr& s) {
  return s->thick().t ? s->thick().t : s;
}

/// S ^ T: the closure of the intersection of relative interiors.
inline polytope_ptr wedge(const polytope_ptr& s, const polytope_ptr& t) {
  if (s->is_empty() || t->is_empty()) return polytope::empty(s->ambient_dim());
  if (s->ambient_dim() != t->ambient_dim())
    throw calc_error(errc::dimension_mismatch, "wedge in different ambient spaces");
  std::vector<linform> fs = s->inequalities();
  fs.insert(fs.end(), t->inequalities().begin(), t->inequalities().end());
  polytope_ptr inter;
  try {
    inter = polytope::make(s->ambient_dim(), std::move(fs));
  } catch (const calc_error&) {
    return polytope::empty(s->ambient_dim());
  }
  qvec c = inter->relint_point();
  if (s->relint_contains(c) && t->relint_contains(c)) return inter;
  return polytope::empty(s->ambient_dim());
}

/// Subpolytope test: equidimensional inclusion.
inline bool is_subpolytope(const polytope_ptr& piece, const polytope_ptr& whole) {
  if (piece->is_empty()) return false;
  for (const auto& v : piece->vertices())
    if (!whole->contains(v)) return false;
  return piece->dim() == whole->dim();
}

namespace detail {

inline bool covered_by_pieces(const polytope_ptr& cell, const std::vector<polytope_ptr>& pieces,
                              const std::vector<linform>& cuts, size_t next) {
  for (size_t i = next; i < cuts.size(); ++i) {
    const linform& h = cuts[i];
    linform neg;
    neg.a = h.a;
    for (auto& x : neg.a) x = -x;
    neg.b = -h.b;
    auto half = [&](const linform& f) {
      std::vector<linform> fs = cell->inequalities();
      fs.push_back(f);
      try {
        return polytope::make(cell->ambient_dim(), std::move(fs));
      } catch (const calc_error&) {
        return polytope_ptr();
      }
    };
    polytope_ptr plus = half(h), minus = half(neg);
    bool plus_splits = plus && plus->dim() == cell->dim() && !same_polytope(*plus, *cell);
    bool minus_splits = minus && minus->dim() == cell->dim() && !same_polytope(*minus, *cell);
    if (plus_splits && minus_splits)
      return covered_by_pieces(plus, pieces, cuts, i + 1) &&
             covered_by_pieces(minus, pieces, cuts, i + 1);
  }
  qvec c = cell->relint_point();
  for (const auto& p : pieces)
    if (p->contains(c)) return true;
  return false;
}

}  // namespace detail

/// Exact check of S = S_1 veebar ... veebar S_m: pieces are subpolytopes and
/// their interiors cover Int(S).
inline bool veebar_check(const polytope_ptr& s, const std::vector<polytope_ptr>& pieces) {
  if (pieces.empty()) return false;
  for (const auto& p : pieces)
    if (!is_subpolytope(p, s)) return false;
  std::vector<linform> cuts;
  for (const auto& p : pieces)
    for (const auto& f : p->inequalities()) cuts.push_back(f);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return detail::covered_by_pieces(s, pieces, cuts, 0);
}

// --- simplicial and cubical structure maps ----------------------------------

/// Simplicial face N Delta^{n-1} -> N Delta^n inserting 0 at slot i.
inline affine_map simplex_face(int n, int i) {
  std::vector<zvec> m(static_cast<size_t>(n + 1), zvec(static_cast<size_t>(n), 0));
  int src = 0;
  for (int row = 0; row <= n; ++row) {
    if (row == i) continue;
    m[static_cast<size_t>(row)][static_cast<size_t>(src++)] = 1;
  }
  affine_map r(std::move(m), zvec(static_cast<size_t>(n + 1), 0));
  r.set_cols_hint(n);
  return r;
}

/// Simplicial degeneracy N Delta^n -> N Delta^{n-1} adding slots i, i+1.
inline affine_map simplex_degeneracy(int n, int i) {
  std::vector<zvec> m(static_cast<size_t>(n), zvec(static_cast<size_t>(n + 1), 0));
  for (int row = 0; row < n; ++row) {
    if (row < i) {
      m[static_cast<size_t>(row)][static_cast<size_t>(row)] = 1;
    } else if (row == i) {
      m[static_cast<size_t>(row)][static_cast<size_t>(row)] = 1;
      m[static_cast<size_t>(row)][static_cast<size_t>(row + 1)] = 1;
    } else {
      m[static_cast<size_t>(row)][static_cast<size_t>(row + 1)] = 1;
    }
  }
  affine_map r(std::move(m), zvec(static_cast<size_t>(n), 0));
  r.set_cols_hint(n + 1);
  return r;
}

/// Cubical face [0,N]^{n-1} -> [0,N]^n inserting N*sigma at slot i (1-based i).
inline affine_map cube_face(int n, int i, int sigma, long scale) {
  std::vector<zvec> m(static_cast<size_t>(n), zvec(static_cast<size_t>(n - 1), 0));
  zvec b(static_cast<size_t>(n), 0);
  int src = 0;
  for (int row = 1; row <= n; ++row) {
    if (row == i) {
      b[static_cast<size_t>(row - 1)] = scale * sigma;
    } else {
      m[static_cast<size_t>(row - 1)][static_cast<size_t>(src++)] = 1;
    }
  }
  affine_map r(std::move(m), std::move(b));
  r.set_cols_hint(n - 1);
  return r;
}

/// Cubical projection [0,N]^n -> [0,N]^{n-1} dropping slot i (1-based).
inline affine_map cube_projection(int n, int i) {
  std::vector<zvec> m(static_cast<size_t>(n - 1), zvec(static_cast<size_t>(n), 0));
  int row = 0;
  for (int col = 1; col <= n; ++col) {
    if (col == i) continue;
    m[static_cast<size_t>(row++)][static_cast<size_t>(col - 1)] = 1;
  }
  affine_map r(std::move(m), zvec(static_cast<size_t>(n - 1), 0));
  r.set_cols_hint(n);
  return r;
}

/// Convex hull of the images of the vertices (exact, desk scale).
inline polytope_ptr image_polytope(const affine_map& a, const polytope_ptr& s) {
  if (s->is_empty()) return polytope::empty(a.rows());
  std::set<qvec> pts_set;
  for (const auto& v : s->vertices()) pts_set.insert(a.apply(v));
  std::vector<qvec> pts(pts_set.begin(), pts_set.end());
  int m = a.rows();
  // integer forms vanishing on subsets of points supply candidate facets and
  // the affine hull
  std::vector<linform> cands;
  std::vector<int> subset;
  std::vector<std::vector<int>> subsets;
  std::function<void(int, int)> rec = [&](int start, int need) {
    if (need == 0) {
      subsets.push_back(subset);
      return;
    }
    for (int i = start; i + need <= static_cast<int>(pts.size()); ++i) {
      subset.push_back(i);
      rec(i + 1, need - 1);
      subset.pop_back();
    }
  };
  for (int size = std::min<int>(m, static_cast<int>(pts.size())); size >= 1; --size) rec(0, size);
  if (pts.size() == 1) {
    // a single point: equality pairs
    std::vector<linform> fs;
    mpz_class den = 1;
    for (const auto& x : pts[0]) den = lcm(den, x.get_den());
    for (int i = 0; i < m; ++i) {
      linform f;
      f.a.assign(static_cast<size_t>(m), 0);
      f.a[static_cast<size_t>(i)] = den;
      mpq_class c = pts[0][static_cast<size_t>(i)] * mpq_class(den);
      f.b = -c.get_num();
      fs.push_back(f);
      linform g = f;
      for (auto& x : g.a) x = -x;
      g.b = -g.b;
      fs.push_back(g);
    }
    if (m == 0) fs.push_back(linform{{}, 0});
    return polytope::make(m, std::move(fs));
  }
  for (const auto& sub : subsets) {
    std::vector<zvec> w;
    for (int i : sub) {
      mpz_class den = 1;
      for (const auto& x : pts[static_cast<size_t>(i)]) den = lcm(den, x.get_den());
      zvec row(static_cast<size_t>(m) + 1);
      for (int j = 0; j < m; ++j) {
        mpq_class sc = pts[static_cast<size_t>(i)][static_cast<size_t>(j)] * mpq_class(den);
        row[static_cast<size_t>(j)] = sc.get_num();
      }
      row[static_cast<size_t>(m)] = den;
      w.push_back(std::move(row));
    }
    for (const auto& k : detail::integer_kernel(w, m + 1)) {
      linform f;
      f.a.assign(k.begin(), k.end() - 1);
      f.b = k.back();
      bool nonneg = true, nonpos = true;
      for (const auto& p : pts) {
        mpq_class v = f.eval(p);
        if (v < 0) nonneg = false;
        if (v > 0) nonpos = false;
      }
      if (nonpos) {
        for (auto& x : f.a) x = -x;
        f.b = -f.b;
        std::swap(nonneg, nonpos);
      }
      if (nonneg) cands.push_back(f);
      if (nonpos && nonneg) {  // equality: keep both directions
        linform g = f;
        for (auto& x : g.a) x = -x;
        g.b = -g.b;
        cands.push_back(g);
      }
    }
  }
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  auto hull = polytope::make(m, std::move(cands));
  return hull;
}

}  // namespace padcal
