#include "disco/rational.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <limits>

#include <boost/multiprecision/gmp.hpp>

#include "disco/error.hpp"

namespace disco {
namespace {

using boost::multiprecision::mpz_int;

[[noreturn]] void malformed(std::string_view text) {
  throw Error(ErrorKind::TypeMismatch, "not a rational number: '" + std::string(text) + "'");
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Rational parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = s.substr(e + 1);
    s = s.substr(0, e);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
      exp_negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    if (!all_digits(exp_part) || exp_part.size() > 6) malformed(text);
    exponent = std::stol(std::string(exp_part));
    if (exp_negative) exponent = -exponent;
  }

  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if (whole.empty() && frac.empty()) malformed(text);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac))) {
      malformed(text);
    }
    digits = std::string(whole) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
  } else {
    if (!all_digits(s)) malformed(text);
    digits = std::string(s);
  }

  // mpz_int reads a leading 0 as an octal prefix
  digits.erase(0, digits.find_first_not_of('0'));
  mpz_int mantissa(digits.empty() ? std::string("0") : digits);
  if (negative) mantissa = -mantissa;
  mpz_int scale = boost::multiprecision::pow(mpz_int(10), static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
  if (exponent >= 0) return Rational(mantissa * scale);
  return Rational(mantissa, scale);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) malformed(text);

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_decimal(text.substr(0, slash));
    Rational den = parse_decimal(text.substr(slash + 1));
    if (den == 0) malformed(text);
    return num / den;
  }
  return parse_decimal(text);
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::TypeMismatch, "non-finite number");
  }
  return parse_decimal(shortest_double(value));
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

std::string to_fraction_string(const Rational& value) {
  auto num = boost::multiprecision::numerator(value);
  auto den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string format_double(double value, int significant_digits) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.*g", significant_digits, value);
  return buf.data();
}

std::string format_probability(const Rational& value, int significant_digits) {
  return format_double(to_double(value), significant_digits);
}

std::string shortest_double(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

}  // namespace disco
