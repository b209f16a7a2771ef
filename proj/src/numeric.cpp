#include "conekit/numeric.hpp"

#include <charconv>
#include <cctype>

namespace conekit {

Vec<Rational> primitive_integer(const Vec<Rational>& v) {
  Integer lcm_den = 1;
  for (const auto& x : v) {
    if (x.is_zero()) continue;
    lcm_den = boost::multiprecision::lcm(lcm_den, Integer(boost::multiprecision::denominator(x)));
  }
  std::vector<Integer> ints;
  ints.reserve(v.size());
  Integer g = 0;
  for (const auto& x : v) {
    Integer n = boost::multiprecision::numerator(x) * (lcm_den / boost::multiprecision::denominator(x));
    g = boost::multiprecision::gcd(g, n);
    ints.push_back(std::move(n));
  }
  if (g == 0) return v;
  g = boost::multiprecision::abs(g);
  Vec<Rational> out;
  out.reserve(v.size());
  for (auto& n : ints) out.emplace_back(n / g);
  return out;
}

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) throw ValidationError("empty number");
  if (auto slash = s.find('/'); slash != std::string::npos) {
    const Rational num = parse_rational(s.substr(0, slash));
    const Rational den = parse_rational(s.substr(slash + 1));
    if (den.is_zero()) throw ValidationError("zero denominator in '" + text + "'");
    return num / den;
  }
  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  Integer mantissa = 0;
  long exponent = 0;
  bool digits = false;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
    mantissa = mantissa * 10 + (s[pos++] - '0');
    digits = true;
  }
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      mantissa = mantissa * 10 + (s[pos++] - '0');
      --exponent;
      digits = true;
    }
  }
  if (!digits) throw ValidationError("malformed number '" + text + "'");
  if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
    ++pos;
    long e = 0;
    auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + s.size(), e);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw ValidationError("malformed exponent in '" + text + "'");
    exponent += e;
    pos = s.size();
  }
  if (pos != s.size()) throw ValidationError("malformed number '" + text + "'");
  if (exponent < -4000 || exponent > 4000) throw ValidationError("exponent out of range in '" + text + "'");
  Rational q(mantissa);
  Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(std::labs(exponent)));
  if (exponent >= 0)
    q *= Rational(scale);
  else
    q /= Rational(scale);
  return negative ? Rational(-q) : q;
}

Rational rational_from_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw ValidationError("cannot convert number");
  return parse_rational(std::string(buf, ptr));
}

std::string to_string(const Rational& q) {
  if (boost::multiprecision::denominator(q) == 1) return boost::multiprecision::numerator(q).str();
  return q.str();
}

}  // namespace conekit
