#pragma once

// Exact arithmetic in k = Q_p at a fixed relative precision M.
// A nonzero scalar is p^v * u with v an exact integer valuation and u a unit
// residue known modulo p^M.  Zero is a separate state (v = +infinity).

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>

namespace padcal {

enum class errc {
  precision_loss,
  division_by_zero,
  domain_error,
  arity_mismatch,
  not_representable,
  polytope_mismatch,
  dimension_mismatch,
  torsion_divide,
  not_graded,
  needs_log_p,
  budget_too_small,
  tail_budget,
  incompatible_sections,
  not_gluable,
  constraint_violation,
  not_a_cycle,
  degree_overflow,
  parse_error,
};

class calc_error : public std::runtime_error {
public:
  calc_error(errc c, const std::string& what) : std::runtime_error(what), code_(c) {}
  errc code() const { return code_; }

private:
  errc code_;
};

inline bool is_prime_u(unsigned long n) {
  if (n < 2) return false;
  for (unsigned long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Shared configuration of the base field: the prime p, the working relative
/// precision M, and the derived residue data q_k = p, N_k = q_k - 1.
struct field_config {
  unsigned long p = 5;
  unsigned long precision = 40;  // M
  bool strict_cancellation = false;
  mpz_class p_pow_m;  // p^M

  unsigned long q_k() const { return p; }
  unsigned long n_k() const { return p - 1; }

  static std::shared_ptr<const field_config> make(unsigned long p, unsigned long m,
                                                  bool strict = false) {
    if (!is_prime_u(p)) throw calc_error(errc::domain_error, "p must be prime");
    if (m < 8) throw calc_error(errc::domain_error, "precision must be >= 8");
    auto cfg = std::make_shared<field_config>();
    cfg->p = p;
    cfg->precision = m;
    cfg->strict_cancellation = strict;
    mpz_ui_pow_ui(cfg->p_pow_m.get_mpz_t(), p, m);
    return cfg;
  }
};

using field_ptr = std::shared_ptr<const field_config>;

/// Element of Q_p: zero, or p^v * u with u in (Z/p^M)^x.
class padic {
public:
  padic() = default;
  explicit padic(field_ptr cfg) : cfg_(std::move(cfg)) {}

  static padic zero(field_ptr cfg) { return padic(std::move(cfg)); }

  static padic one(field_ptr cfg) { return from_mpz(std::move(cfg), 1); }

  static padic from_mpz(field_ptr cfg, mpz_class n) {
    padic r(cfg);
    if (n == 0) return r;
    r.zero_ = false;
    r.v_ = 0;
    mpz_class p(static_cast<unsigned long>(cfg->p));
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
      n /= p;
      ++r.v_;
    }
    mpz_mod(r.u_.get_mpz_t(), n.get_mpz_t(), cfg->p_pow_m.get_mpz_t());
    return r;
  }

  static padic from_long(field_ptr cfg, long n) { return from_mpz(std::move(cfg), mpz_class(n)); }

  static padic from_mpq(field_ptr cfg, const mpq_class& q) {
    padic num = from_mpz(cfg, q.get_num());
    padic den = from_mpz(cfg, q.get_den());
    return num / den;
  }

  /// p^v * u with u given as an exact integer unit (reduced mod p^M).
  static padic from_parts(field_ptr cfg, long v, mpz_class u) {
    padic r(cfg);
    mpz_mod(u.get_mpz_t(), u.get_mpz_t(), cfg->p_pow_m.get_mpz_t());
    if (u == 0) throw calc_error(errc::domain_error, "unit part must be nonzero mod p^M");
    if (mpz_divisible_ui_p(u.get_mpz_t(), cfg->p))
      throw calc_error(errc::domain_error, "unit part must be coprime to p");
    r.zero_ = false;
    r.v_ = v;
    r.u_ = std::move(u);
    return r;
  }

  const field_ptr& config() const { return cfg_; }
  bool is_zero() const { return zero_; }
  long valuation() const {
    if (zero_) throw calc_error(errc::domain_error, "valuation of 0 is +infinity");
    return v_;
  }
  const mpz_class& unit() const {
    if (zero_) throw calc_error(errc::domain_error, "zero has no unit part");
    return u_;
  }

  padic operator-() const {
    if (zero_) return *this;
    padic r = *this;
    r.u_ = cfg_->p_pow_m - r.u_;
    return r;
  }

  friend padic operator+(const padic& a, const padic& b) { return add_impl(a, b, false); }
  friend padic operator-(const padic& a, const padic& b) { return add_impl(a, b, true); }

  friend padic operator*(const padic& a, const padic& b) {
    check_same(a, b);
    if (a.zero_ || b.zero_) return zero(a.cfg_ ? a.cfg_ : b.cfg_);
    padic r(a.cfg_);
    r.zero_ = false;
    r.v_ = a.v_ + b.v_;
    r.u_ = a.u_ * b.u_;
    mpz_mod(r.u_.get_mpz_t(), r.u_.get_mpz_t(), a.cfg_->p_pow_m.get_mpz_t());
    return r;
  }

  padic inverse() const {
    if (zero_) throw calc_error(errc::division_by_zero, "inverse of 0");
    padic r(cfg_);
    r.zero_ = false;
    r.v_ = -v_;
    if (mpz_invert(r.u_.get_mpz_t(), u_.get_mpz_t(), cfg_->p_pow_m.get_mpz_t()) == 0)
      throw calc_error(errc::division_by_zero, "unit not invertible");
    return r;
  }

  friend padic operator/(const padic& a, const padic& b) { return a * b.inverse(); }

  padic pow_int(long e) const {
    if (zero_) {
      if (e <= 0) throw calc_error(errc::division_by_zero, "0 to nonpositive power");
      return *this;
    }
    padic base = e < 0 ? inverse() : *this;
    unsigned long n = static_cast<unsigned long>(e < 0 ? -e : e);
    padic r(cfg_);
    r.zero_ = false;
    r.v_ = base.v_ * static_cast<long>(n);
    mpz_powm_ui(r.u_.get_mpz_t(), base.u_.get_mpz_t(), n, cfg_->p_pow_m.get_mpz_t());
    return r;
  }

  /// Exact valuation of a - b clipped at v(a) + M; +infinity encoded as LONG_MAX.
  friend long valuation_of_difference(const padic& a, const padic& b) {
    padic d = a - b;
    if (d.is_zero()) return std::numeric_limits<long>::max();
    return d.valuation();
  }

  /// Equality to precision: the difference vanishes or has valuation at least
  /// min(v(a), v(b)) + M - slack.
  friend bool eq_to_precision(const padic& a, const padic& b, unsigned long slack = 2) {
    padic d = a - b;
    if (d.is_zero()) return true;
    const field_ptr& cfg = a.cfg_ ? a.cfg_ : b.cfg_;
    long base = a.zero_ ? b.v_ : (b.zero_ ? a.v_ : std::min(a.v_, b.v_));
    return d.v_ >= base + static_cast<long>(cfg->precision - slack);
  }

  /// Absolute smallness: zero, or valuation at least M - slack.
  friend bool small_to_precision(const padic& a, unsigned long slack = 2) {
    if (a.zero_) return true;
    return a.v_ >= static_cast<long>(a.cfg_->precision - slack);
  }

  friend bool operator==(const padic& a, const padic& b) {
    if (a.zero_ != b.zero_) return false;
    if (a.zero_) return true;
    return a.v_ == b.v_ && a.u_ == b.u_;
  }

  /// Textual form "p^v * u".
  std::string str() const {
    if (zero_) return "0";
    return "p^" + std::to_string(v_) + " * " + u_.get_str();
  }

private:
  static void check_same(const padic& a, const padic& b) {
    if (a.cfg_ && b.cfg_ && a.cfg_->p != b.cfg_->p)
      throw calc_error(errc::domain_error, "mixed primes");
  }

  static padic add_impl(const padic& a, const padic& b, bool negate_b) {
    check_same(a, b);
    field_ptr cfg = a.cfg_ ? a.cfg_ : b.cfg_;
    if (a.zero_ && b.zero_) return zero(cfg);
    if (a.zero_) return negate_b ? -b : b;
    if (b.zero_) return a;
    long v0 = std::min(a.v_, b.v_);
    long m = static_cast<long>(cfg->precision);
    mpz_class pa = shifted_unit(a, v0, cfg);
    mpz_class pb = shifted_unit(b, v0, cfg);
    mpz_class s = negate_b ? mpz_class(pa - pb) : mpz_class(pa + pb);
    mpz_mod(s.get_mpz_t(), s.get_mpz_t(), cfg->p_pow_m.get_mpz_t());
    if (s == 0) {
      // cancellation of at least M digits: indistinguishable from exact zero
      if (cfg->strict_cancellation)
        throw calc_error(errc::precision_loss, "cancellation of >= M digits in add/sub");
      return zero(cfg);
    }
    padic r(cfg);
    r.zero_ = false;
    long w = 0;
    mpz_class p(static_cast<unsigned long>(cfg->p));
    while (mpz_divisible_p(s.get_mpz_t(), p.get_mpz_t()) && w < m) {
      s /= p;
      ++w;
    }
    r.v_ = v0 + w;
    r.u_ = s;
    return r;
  }

  static mpz_class shifted_unit(const padic& x, long v0, const field_ptr& cfg) {
    long d = x.v_ - v0;
    if (d >= static_cast<long>(cfg->precision)) return 0;
    mpz_class f;
    mpz_ui_pow_ui(f.get_mpz_t(), cfg->p, static_cast<unsigned long>(d));
    mpz_class r = x.u_ * f;
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), cfg->p_pow_m.get_mpz_t());
    return r;
  }

  field_ptr cfg_;
  bool zero_ = true;
  long v_ = 0;
  mpz_class u_ = 0;
};

/// Branch logarithm on 1 + p Z_p via the alternating series, truncated so the
/// omitted terms have valuation >= M.
inline padic plog(const padic& a) {
  const field_ptr& cfg = a.config();
  padic x = a - padic::one(cfg);
  if (x.is_zero()) return padic::zero(cfg);
  if (x.valuation() < 1) throw calc_error(errc::domain_error, "plog needs v(a-1) >= 1");
  long m = static_cast<long>(cfg->precision);
  long vx = x.valuation();
  padic sum = padic::zero(cfg);
  padic pw = padic::one(cfg);
  for (long i = 1;; ++i) {
    // every omitted term i' >= i has valuation >= i' vx - log_p(i'), which is
    // increasing, so the floor-log bound makes the cut monotone
    long li = 0;
    for (long t = i; t >= static_cast<long>(cfg->p); t /= static_cast<long>(cfg->p)) ++li;
    if (i * vx - li >= m && i > 1) break;
    pw = pw * x;
    padic term = pw / padic::from_long(cfg, i);
    sum = (i % 2 == 1) ? sum + term : sum - term;
  }
  return sum;
}

/// Teichmuller lift: the unique (p-1)-st root of unity congruent to r mod p,
/// computed as the limit of r^(p^n).
inline padic teichmuller(field_ptr cfg, unsigned long r) {
  r %= cfg->p;
  if (r == 0) throw calc_error(errc::domain_error, "teichmuller lift of 0");
  mpz_class a(static_cast<unsigned long>(r));
  for (unsigned long i = 0; i < cfg->precision + 1; ++i) {
    mpz_class b;
    mpz_powm_ui(b.get_mpz_t(), a.get_mpz_t(), cfg->p, cfg->p_pow_m.get_mpz_t());
    if (b == a) break;
    a = b;
  }
  return padic::from_parts(std::move(cfg), 0, a);
}

}  // namespace padcal
