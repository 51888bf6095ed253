#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stablecut {

// Exact fraction, always in lowest terms with a positive denominator.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(int n) : v_(n) {}
  Rational(long n) : v_(n) {}
  Rational(long long n) : v_(static_cast<long>(n)) {}
  Rational(unsigned n) : v_(n) {}
  Rational(unsigned long n) : v_(n) {}
  Rational(const mpz_class& n) : v_(n) {}
  Rational(const mpz_class& n, const mpz_class& d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    v_ = mpq_class(n, d);
    v_.canonicalize();
  }
  Rational(long n, long d) : Rational(mpz_class(n), mpz_class(d)) {}
  explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

  // Accepts "p/q", "p" and optional leading sign. Anything else throws.
  static Rational parse(std::string_view s) {
    auto bad = [&] { return std::invalid_argument("not a rational: '" + std::string(s) + "'"); };
    if (s.empty()) throw bad();
    auto slash = s.find('/');
    auto digits_ok = [](std::string_view t, bool allow_sign) {
      if (!t.empty() && allow_sign && (t[0] == '-' || t[0] == '+')) t.remove_prefix(1);
      if (t.empty()) return false;
      for (char c : t)
        if (c < '0' || c > '9') return false;
      return true;
    };
    std::string_view num = s.substr(0, slash);
    if (!digits_ok(num, true)) throw bad();
    std::string ns(num);
    if (ns[0] == '+') ns.erase(0, 1);
    mpz_class n(ns, 10);
    if (slash == std::string_view::npos) return Rational(n);
    std::string_view den = s.substr(slash + 1);
    if (!digits_ok(den, false)) throw bad();
    mpz_class d(std::string(den), 10);
    if (d == 0) throw bad();
    return Rational(n, d);
  }

  const mpq_class& mpq() const { return v_; }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }

  bool is_integer() const { return v_.get_den() == 1; }
  bool is_zero() const { return sgn(v_) == 0; }
  int sign() const { return sgn(v_); }
  double to_double() const { return v_.get_d(); }

  // Always "p/q", including integers ("4/1"), so files never change shape.
  std::string str() const { return v_.get_num().get_str() + "/" + v_.get_den().get_str(); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  mpq_class v_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }
inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

// Smallest integer >= r.
inline mpz_class ceil(const Rational& r) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), r.num().get_mpz_t(), r.den().get_mpz_t());
  return q;
}

inline Rational pow(Rational base, unsigned e) {
  Rational out(1);
  while (e) {
    if (e & 1u) out *= base;
    base *= base;
    e >>= 1u;
  }
  return out;
}

// Rational or +infinity. Used for stability margins where x/0 is unbounded.
class ExtRational {
 public:
  ExtRational() : inf_(true) {}
  ExtRational(Rational v) : inf_(false), v_(std::move(v)) {}
  static ExtRational infinity() { return ExtRational(); }

  bool is_infinite() const { return inf_; }
  const Rational& value() const {
    if (inf_) throw std::logic_error("value() of infinite ExtRational");
    return v_;
  }
  std::string str() const { return inf_ ? std::string("inf") : v_.str(); }

  friend bool operator==(const ExtRational& a, const ExtRational& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.v_ == b.v_);
  }
  friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
    if (a.inf_ && b.inf_) return std::strong_ordering::equal;
    if (a.inf_) return std::strong_ordering::greater;
    if (b.inf_) return std::strong_ordering::less;
    return a.v_ <=> b.v_;
  }
  friend std::ostream& operator<<(std::ostream& os, const ExtRational& r) { return os << r.str(); }

 private:
  bool inf_;
  Rational v_;
};

// a / b with x/0 = +inf. b must be nonnegative.
inline ExtRational ratio(const Rational& a, const Rational& b) {
  if (b.is_zero()) return ExtRational::infinity();
  return ExtRational(a / b);
}

}  // namespace stablecut

template <>
struct std::hash<stablecut::Rational> {
  std::size_t operator()(const stablecut::Rational& r) const {
    return std::hash<std::string>()(r.str());
  }
};
