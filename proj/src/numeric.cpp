#include "entroflow/numeric.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

#include "entroflow/errors.hpp"

namespace entroflow {

namespace {

BigInt pow10(unsigned e) {
  BigInt r;
  mpz_ui_pow_ui(r.backend().data(), 10, e);
  return r;
}

// a * 10^k for signed k, where negative k is moved to the other side by the caller.
bool less_scaled(const BigInt& a, const BigInt& b, long e) {
  // a < b * 10^e ?
  if (e >= 0) return a < b * pow10(static_cast<unsigned>(e));
  return a * pow10(static_cast<unsigned>(-e)) < b;
}

std::string strip_zeros(std::string s) {
  if (s.find('.') == std::string::npos) return s;
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

BigInt pow3(unsigned e) {
  BigInt r;
  mpz_ui_pow_ui(r.backend().data(), 3, e);
  return r;
}

BigInt pow2(unsigned e) {
  BigInt r = 1;
  return r << e;
}

std::string to_wire(const Rational& q) {
  return boost::multiprecision::numerator(q).str() + "/" +
         boost::multiprecision::denominator(q).str();
}

std::string to_wire(const BigInt& n) { return n.str(); }

Rational parse_rational(std::string_view text) {
  auto fail = [&] { throw FormatError("not a rational number: '" + std::string(text) + "'"); };
  if (text.empty()) fail();
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_rational(text.substr(0, slash));
    Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw FormatError("zero denominator in '" + std::string(text) + "'");
    return num / den;
  }
  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') negative = text[i++] == '-';
  std::string digits;
  long frac = 0;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_point) ++frac;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (digits.empty()) fail();
  long exponent = 0;
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') fail();
    ++i;
    bool eneg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) eneg = text[i++] == '-';
    if (i >= text.size()) fail();
    long e = 0;
    for (; i < text.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) fail();
      e = e * 10 + (text[i] - '0');
      if (e > 100000) fail();
    }
    exponent = eneg ? -e : e;
  }
  BigInt num(digits);
  long scale = exponent - frac;
  Rational r = scale >= 0 ? Rational(num * pow10(static_cast<unsigned>(scale)))
                          : Rational(num, pow10(static_cast<unsigned>(-scale)));
  return negative ? Rational(-r) : r;
}

Rational snap12(double x) {
  if (!std::isfinite(x)) throw FormatError("cannot snap a non-finite value");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.11e", x);
  return parse_rational(buf);
}

std::string format_sig(const Rational& q, int digits) {
  if (q == 0) return "0";
  BigInt a = boost::multiprecision::numerator(q);
  const BigInt b = boost::multiprecision::denominator(q);
  const bool negative = a < 0;
  if (negative) a = -a;

  long e = static_cast<long>(mpz_sizeinbase(a.backend().data(), 10)) -
           static_cast<long>(mpz_sizeinbase(b.backend().data(), 10));
  while (less_scaled(a, b, e)) --e;
  while (!less_scaled(a, b, e + 1)) ++e;

  // mantissa = round(a * 10^(digits-1-e) / b)
  long shift = digits - 1 - e;
  BigInt n = a, d = b;
  if (shift >= 0) n *= pow10(static_cast<unsigned>(shift));
  else d *= pow10(static_cast<unsigned>(-shift));
  BigInt m = (2 * n + d) / (2 * d);
  if (m >= pow10(static_cast<unsigned>(digits))) {
    m /= 10;
    ++e;
  }
  std::string md = m.str();
  std::string out;
  if (e < -5 || e >= digits) {
    out = md.substr(0, 1) + "." + md.substr(1);
    out = strip_zeros(out);
    char ebuf[32];
    std::snprintf(ebuf, sizeof ebuf, "e%c%02ld", e < 0 ? '-' : '+', e < 0 ? -e : e);
    out += ebuf;
  } else if (e >= 0) {
    out = md.substr(0, static_cast<std::size_t>(e) + 1) + "." + md.substr(static_cast<std::size_t>(e) + 1);
    out = strip_zeros(out);
  } else {
    out = "0." + std::string(static_cast<std::size_t>(-e - 1), '0') + md;
    out = strip_zeros(out);
  }
  return negative ? "-" + out : out;
}

std::string format_sig(double x, int digits) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

BigInt floor_of(const Rational& q) {
  BigInt n = boost::multiprecision::numerator(q);
  const BigInt& d = boost::multiprecision::denominator(q);
  BigInt f;
  mpz_fdiv_q(f.backend().data(), n.backend().data(), d.backend().data());
  return f;
}

double to_double(const Rational& q) { return mpq_get_d(q.backend().data()); }

}  // namespace entroflow
