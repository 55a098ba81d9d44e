#include "fourvertex/rational.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace fourvertex {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

Integer ten_pow(unsigned long k) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, k);
  return r;
}

double log_abs(const Integer& z) {
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto bad = [&] { return std::invalid_argument("not a rational number: '" + std::string(text) + "'"); };
  if (text.empty()) throw bad();

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_rational(text.substr(0, slash));
    std::string_view den_text = text.substr(slash + 1);
    if (!all_digits(den_text)) throw bad();
    Integer den{std::string(den_text)};
    if (den == 0) throw bad();
    Rational q = num / Rational(den);
    q.canonicalize();
    return q;
  }

  std::string_view s = text;
  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = s.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6) throw bad();
    exponent = std::stol(std::string(exp_text));
    if (exp_negative) exponent = -exponent;
    s = s.substr(0, e);
  }

  std::string_view int_part = s;
  std::string_view frac_part;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    int_part = s.substr(0, dot);
    frac_part = s.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) throw bad();
  if (!int_part.empty() && !all_digits(int_part)) throw bad();
  if (!frac_part.empty() && !all_digits(frac_part)) throw bad();

  Integer digits(std::string(int_part) + std::string(frac_part));
  exponent -= static_cast<long>(frac_part.size());
  Rational q(digits);
  if (exponent > 0) q *= Rational(ten_pow(static_cast<unsigned long>(exponent)));
  if (exponent < 0) q /= Rational(ten_pow(static_cast<unsigned long>(-exponent)));
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

std::string to_string(const Rational& q) {
  Rational c(q);
  c.canonicalize();
  return c.get_str();
}

Rational pow(const Rational& q, long k) {
  if (k < 0) {
    if (q == 0) throw std::domain_error("zero to a negative power");
    return pow(Rational(1) / q, -k);
  }
  Rational num, den;
  mpz_pow_ui(num.get_num_mpz_t(), q.get_num_mpz_t(), static_cast<unsigned long>(k));
  mpz_pow_ui(den.get_num_mpz_t(), q.get_den_mpz_t(), static_cast<unsigned long>(k));
  Rational r(num.get_num(), den.get_num());
  r.canonicalize();
  return r;
}

double log(const Rational& q) {
  if (q <= 0) throw std::domain_error("log of a non-positive rational");
  return log_abs(q.get_num()) - log_abs(q.get_den());
}

}  // namespace fourvertex
