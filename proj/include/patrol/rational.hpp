#pragma once

// Exact rational numbers in canonical form.
//
// Values whose numerator and denominator fit in a signed 64-bit word are kept
// inline; everything else lives in a heap-allocated GMP mpq. The representation
// is canonical (small whenever the value fits), so equality is a field
// comparison and never has to consult GMP for mixed operands.

#include <gmpxx.h>

#include <climits>
#include <compare>
#include <concepts>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "patrol/error.hpp"

namespace patrol {

namespace detail {

using i128 = __int128;
using u128 = unsigned __int128;

inline constexpr std::int64_t kSmallMax = INT64_MAX;

inline bool fits_small(i128 v) { return v >= -kSmallMax && v <= kSmallMax; }

inline u128 uabs128(i128 v) { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

inline mpz_class mpz_from_i128(i128 v) {
  const u128 mag = uabs128(v);
  const std::uint64_t words[2] = {static_cast<std::uint64_t>(mag),
                                  static_cast<std::uint64_t>(mag >> 64)};
  mpz_class z;
  mpz_import(z.get_mpz_t(), 2, -1, sizeof(std::uint64_t), 0, 0, words);
  if (v < 0) z = -z;
  return z;
}

inline mpz_class mpz_from_i64(std::int64_t v) {
  static_assert(sizeof(long) == sizeof(std::int64_t), "LP64 platform expected");
  return mpz_class(static_cast<long>(v));
}

inline bool mpz_fits_small(const mpz_class& z) {
  return mpz_fits_slong_p(z.get_mpz_t()) != 0 && z != LONG_MIN;
}

}  // namespace detail

class Rational {
 public:
  Rational() noexcept : num_(0), den_(1) {}

  template <std::integral I>
  Rational(I value) : num_(0), den_(1) {  // NOLINT(google-explicit-constructor)
    if constexpr (std::is_signed_v<I>) {
      init_from_i128(static_cast<detail::i128>(value), 1);
    } else {
      init_from_i128(static_cast<detail::i128>(static_cast<std::uint64_t>(value)), 1);
    }
  }

  Rational(std::int64_t numerator, std::int64_t denominator) : num_(0), den_(1) {
    if (denominator == 0) throw Error(ErrorCode::ZeroDenominator, "denominator is zero");
    init_from_i128(numerator, denominator);
  }

  explicit Rational(mpq_class value) : num_(0), den_(1) {
    value.canonicalize();
    adopt(std::move(value));
  }

  /// Builds n/d from arbitrary-precision parts; d must be nonzero.
  static Rational from_parts(const mpz_class& n, const mpz_class& d) {
    if (d == 0) throw Error(ErrorCode::ZeroDenominator, "denominator is zero");
    return Rational(mpq_class(n, d));
  }

  Rational(const Rational& other) : num_(other.num_), den_(other.den_) {
    if (other.is_big()) big_ = new mpq_class(*other.big_);
  }

  Rational(Rational&& other) noexcept : num_(other.num_), den_(other.den_) {
    other.num_ = 0;
    other.den_ = 1;
  }

  Rational& operator=(const Rational& other) {
    if (this != &other) {
      Rational copy(other);
      swap(copy);
    }
    return *this;
  }

  Rational& operator=(Rational&& other) noexcept {
    if (this != &other) {
      release();
      num_ = other.num_;
      den_ = other.den_;
      other.num_ = 0;
      other.den_ = 1;
    }
    return *this;
  }

  ~Rational() { release(); }

  void swap(Rational& other) noexcept {
    std::swap(num_, other.num_);
    std::swap(den_, other.den_);
  }

  bool is_big() const noexcept { return den_ == 0; }

  mpz_class numerator() const {
    return is_big() ? mpz_class(big_->get_num()) : detail::mpz_from_i64(num_);
  }

  mpz_class denominator() const {
    return is_big() ? mpz_class(big_->get_den()) : detail::mpz_from_i64(den_);
  }

  mpq_class to_mpq() const {
    if (is_big()) return *big_;
    return mpq_class(detail::mpz_from_i64(num_), detail::mpz_from_i64(den_));
  }

  int sign() const noexcept {
    if (is_big()) return sgn(*big_);
    return (num_ > 0) - (num_ < 0);
  }

  bool is_integer() const noexcept { return !is_big() && den_ == 1; }

  double to_double() const { return is_big() ? big_->get_d() : static_cast<double>(num_) / static_cast<double>(den_); }

  std::string str() const {
    if (is_big()) return big_->get_str();
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (!a.is_big() && !b.is_big()) {
      // a/b + c/d with g = gcd(b, d): keeps intermediates within 127 bits.
      const std::int64_t g = static_cast<std::int64_t>(std::gcd(static_cast<std::uint64_t>(a.den_),
                                                                static_cast<std::uint64_t>(b.den_)));
      const std::int64_t bd = a.den_ / g;
      const std::int64_t dd = b.den_ / g;
      const detail::i128 t = static_cast<detail::i128>(a.num_) * dd + static_cast<detail::i128>(b.num_) * bd;
      if (t == 0) return Rational();
      const std::int64_t rem = static_cast<std::int64_t>(t % g);
      const std::int64_t g2 = static_cast<std::int64_t>(std::gcd(static_cast<std::uint64_t>(rem < 0 ? -rem : rem),
                                                                 static_cast<std::uint64_t>(g)));
      Rational r;
      r.init_reduced(t / g2, static_cast<detail::i128>(bd) * (b.den_ / g2));
      return r;
    }
    return Rational(a.to_mpq() + b.to_mpq());
  }

  friend Rational operator-(const Rational& a) {
    if (!a.is_big()) {
      Rational r;
      r.num_ = -a.num_;
      r.den_ = a.den_;
      return r;
    }
    return Rational(mpq_class(-*a.big_));
  }

  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

  friend Rational operator*(const Rational& a, const Rational& b) {
    if (!a.is_big() && !b.is_big()) {
      if (a.num_ == 0 || b.num_ == 0) return Rational();
      const std::int64_t g1 = gcd64(a.num_, b.den_);
      const std::int64_t g2 = gcd64(b.num_, a.den_);
      Rational r;
      r.init_reduced(static_cast<detail::i128>(a.num_ / g1) * (b.num_ / g2),
                     static_cast<detail::i128>(a.den_ / g2) * (b.den_ / g1));
      return r;
    }
    return Rational(a.to_mpq() * b.to_mpq());
  }

  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.sign() == 0) throw Error(ErrorCode::DivisionByZero, "division by zero");
    if (!b.is_big()) {
      Rational inv;
      inv.num_ = b.num_ < 0 ? -b.den_ : b.den_;
      inv.den_ = b.num_ < 0 ? -b.num_ : b.num_;
      return a * inv;
    }
    return Rational(a.to_mpq() / b.to_mpq());
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    if (a.is_big() != b.is_big()) return false;
    if (a.is_big()) return *a.big_ == *b.big_;
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (!a.is_big() && !b.is_big()) {
      const detail::i128 lhs = static_cast<detail::i128>(a.num_) * b.den_;
      const detail::i128 rhs = static_cast<detail::i128>(b.num_) * a.den_;
      return lhs <=> rhs;
    }
    const int c = cmp(a.to_mpq(), b.to_mpq());
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  static std::int64_t gcd64(std::int64_t a, std::int64_t b) {
    const auto g = std::gcd(static_cast<std::uint64_t>(a < 0 ? -a : a), static_cast<std::uint64_t>(b < 0 ? -b : b));
    return g == 0 ? 1 : static_cast<std::int64_t>(g);
  }

  void release() noexcept {
    if (is_big()) {
      delete big_;
      num_ = 0;
      den_ = 1;
    }
  }

  void init_from_i128(detail::i128 n, detail::i128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const detail::u128 g = gcd128(detail::uabs128(n), static_cast<detail::u128>(d));
    if (g > 1) {
      n /= static_cast<detail::i128>(g);
      d /= static_cast<detail::i128>(g);
    }
    init_reduced(n, d);
  }

  // n/d already in lowest terms with d > 0.
  void init_reduced(detail::i128 n, detail::i128 d) {
    if (detail::fits_small(n) && d <= detail::kSmallMax) {
      num_ = static_cast<std::int64_t>(n);
      den_ = static_cast<std::int64_t>(d);
      return;
    }
    mpq_class q(detail::mpz_from_i128(n), detail::mpz_from_i128(d));
    big_ = new mpq_class(std::move(q));
    den_ = 0;
  }

  void adopt(mpq_class&& q) {
    if (detail::mpz_fits_small(q.get_num()) && detail::mpz_fits_small(q.get_den())) {
      num_ = q.get_num().get_si();
      den_ = q.get_den().get_si();
      return;
    }
    big_ = new mpq_class(std::move(q));
    den_ = 0;
  }

  static detail::u128 gcd128(detail::u128 a, detail::u128 b) {
    while (b != 0) {
      const detail::u128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  union {
    std::int64_t num_;
    mpq_class* big_;
  };
  std::int64_t den_;  // 0 marks the big representation
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

inline std::string to_string(const Rational& r) { return r.str(); }

/// Largest integer <= r.
inline Rational floor(const Rational& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.numerator().get_mpz_t(), r.denominator().get_mpz_t());
  return Rational::from_parts(q, 1);
}

inline Rational ceil(const Rational& r) { return -floor(-r); }

/// r reduced into [0, m) for m > 0.
inline Rational mod(const Rational& r, const Rational& m) { return r - m * floor(r / m); }

/// Parses `-?DIGITS(/DIGITS)?` into canonical form.
inline Rational parse_rational(std::string_view text) {
  auto digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
      if (c < '0' || c > '9') return false;
    }
    return true;
  };
  std::string_view body = text;
  if (!body.empty() && body.front() == '-') body.remove_prefix(1);
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!digits(num) || !digits(den)) {
    throw Error(ErrorCode::MalformedNumber, "not a rational literal: '" + std::string(text) + "'");
  }
  mpz_class n(std::string(num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw Error(ErrorCode::ZeroDenominator, "zero denominator in '" + std::string(text) + "'");
  if (text.front() == '-') n = -n;
  return Rational::from_parts(n, d);
}

/// Smallest positive r with r/a and r/b both integers.
inline Rational rational_lcm(const Rational& a, const Rational& b) {
  if (a.sign() <= 0 || b.sign() <= 0) {
    throw Error(ErrorCode::NonpositiveInput, "lcm needs positive inputs, got " + a.str() + " and " + b.str());
  }
  mpz_class l;
  mpz_class g;
  mpz_lcm(l.get_mpz_t(), a.numerator().get_mpz_t(), b.numerator().get_mpz_t());
  mpz_gcd(g.get_mpz_t(), a.denominator().get_mpz_t(), b.denominator().get_mpz_t());
  return Rational::from_parts(l, g);
}

/// Exact sum using a balanced reduction tree; keeps operand sizes even when
/// summing many terms with distinct denominators.
inline Rational sum_exact(std::span<const Rational> values) {
  if (values.empty()) return Rational();
  if (values.size() == 1) return values.front();
  const std::size_t mid = values.size() / 2;
  return sum_exact(values.first(mid)) + sum_exact(values.subspan(mid));
}

/// Unreduced sum of 1/i for i in [lo, hi] as (P, Q) by binary splitting.
inline std::pair<mpz_class, mpz_class> harmonic_sum_unreduced(std::uint64_t lo, std::uint64_t hi) {
  if (lo > hi) return {mpz_class(0), mpz_class(1)};
  if (hi - lo < 8) {
    mpz_class p = 0;
    mpz_class q = 1;
    for (std::uint64_t i = lo; i <= hi; ++i) {
      const mpz_class iz(static_cast<unsigned long>(i));
      p = p * iz + q;
      q *= iz;
    }
    return {p, q};
  }
  const std::uint64_t mid = lo + (hi - lo) / 2;
  auto [p1, q1] = harmonic_sum_unreduced(lo, mid);
  auto [p2, q2] = harmonic_sum_unreduced(mid + 1, hi);
  return {p1 * q2 + p2 * q1, q1 * q2};
}

/// Sum of 1/i for i in [lo, hi].
inline Rational harmonic_sum(std::uint64_t lo, std::uint64_t hi) {
  auto [p, q] = harmonic_sum_unreduced(lo, hi);
  return Rational::from_parts(p, q);
}

}  // namespace patrol
