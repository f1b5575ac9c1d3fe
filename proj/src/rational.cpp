#include "netdes/rational.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace netdes {

Rational::Rational(long num, long den) : v_(num, den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  v_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) throw std::invalid_argument("empty rational");

  const auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos) {
      throw std::invalid_argument("malformed rational: " + s);
    }
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    const std::size_t scale = s.size() - dot - 1;
    mpz_class num;
    if (digits.empty() || digits == "-" || num.set_str(digits, 10) != 0) {
      throw std::invalid_argument("malformed rational: " + s);
    }
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, scale);
    return Rational(mpq_class(num, den));
  }

  mpq_class q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational: " + s);
  if (q.get_den() == 0) throw std::invalid_argument("rational with zero denominator: " + s);
  return Rational(std::move(q));
}

Rational Rational::from_double(double x, long max_den) {
  if (!std::isfinite(x)) throw std::invalid_argument("cannot rationalize a non-finite value");
  const bool negative = x < 0;
  double rest = std::fabs(x);
  // Convergents h/k of the continued fraction expansion.
  mpz_class h_prev = 1, h = static_cast<long>(std::floor(rest));
  mpz_class k_prev = 0, k = 1;
  double frac = rest - std::floor(rest);
  for (int iter = 0; iter < 64 && frac > 1e-15; ++iter) {
    rest = 1.0 / frac;
    const double a_d = std::floor(rest);
    if (a_d > 1e15) break;
    const mpz_class a = static_cast<long>(a_d);
    const mpz_class h_next = a * h + h_prev;
    const mpz_class k_next = a * k + k_prev;
    if (k_next > max_den) break;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
    frac = rest - a_d;
  }
  mpq_class q(negative ? mpz_class(-h) : h, k);
  return Rational(std::move(q));
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("rational division by zero");
  v_ /= o.v_;
  return *this;
}

Rational Rational::floor() const {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return Rational(mpq_class(q));
}

Rational Rational::ceil() const {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return Rational(mpq_class(q));
}

std::size_t Rational::hash() const {
  const std::size_t a = std::hash<std::string>{}(v_.get_num().get_str(16));
  const std::size_t b = std::hash<std::string>{}(v_.get_den().get_str(16));
  return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
}

mpz_class common_denominator(const std::vector<Rational>& values) {
  mpz_class l = 1;
  for (const auto& v : values) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.raw().get_den_mpz_t());
  }
  return l;
}

}  // namespace netdes
