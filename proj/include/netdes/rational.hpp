#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace netdes {

// Exact rational number. Always stored in lowest terms with a positive
// denominator; arithmetic never rounds.
class Rational {
 public:
  Rational() = default;
  template <std::integral I>
  Rational(I n) : v_(static_cast<long>(n)) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den);
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  // Accepts "p/q", "p", or a finite decimal such as "-1.25".
  static Rational parse(std::string_view text);

  // Best rational approximation with denominator <= max_den, by continued
  // fractions.
  static Rational from_double(double x, long max_den = 1'000'000);

  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }
  const mpq_class& raw() const { return v_; }

  double to_double() const { return v_.get_d(); }
  std::string to_string() const { return v_.get_str(); }

  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }

  Rational floor() const;
  Rational ceil() const;
  // this - floor(this), in [0, 1).
  Rational frac() const { return *this - floor(); }
  Rational abs() const { return Rational(mpq_class(::abs(v_))); }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.to_string();
  }

  std::size_t hash() const;

 private:
  mpq_class v_;
};

inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

// Least common multiple of the denominators.
mpz_class common_denominator(const std::vector<Rational>& values);

}  // namespace netdes

template <>
struct std::hash<netdes::Rational> {
  std::size_t operator()(const netdes::Rational& r) const { return r.hash(); }
};
