// treemax: exact arithmetic aliases and small helpers.
//
// All quantitative results in the library are exact rationals; floating point
// appears only in report columns explicitly marked as such. Arbitrary
// precision matters here: column-sum constants already have ~2^230
// denominators at modest cut-offs.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace treemax {

// Plain-value (non-expression-template) instantiations: abs/min/max and mixed
// arithmetic then behave like ordinary value types.
using Int = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                          boost::multiprecision::et_off>;
using Rat =
    boost::multiprecision::number<boost::multiprecision::rational_adaptor<
                                      boost::multiprecision::cpp_int_backend<>>,
                                  boost::multiprecision::et_off>;

// 2^e as a big integer (e >= 0).
inline Int pow2(long long e) {
  if (e < 0) throw std::invalid_argument("pow2: negative exponent");
  return Int(1) << static_cast<unsigned>(e);
}

// n^e as a big integer (e >= 0).
inline Int ipow(Int base, long long e) {
  if (e < 0) throw std::invalid_argument("ipow: negative exponent");
  Int r = 1;
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

// q^e for integer e (negative exponents allowed when q != 0).
inline Rat rpow(const Rat& q, long long e) {
  if (e < 0) {
    if (q == 0) throw std::invalid_argument("rpow: 0 to a negative power");
    return Rat(ipow(denominator(q), -e), ipow(numerator(q), -e));
  }
  return Rat(ipow(numerator(q), e), ipow(denominator(q), e));
}

// Canonical "num/den" rendering; the denominator is always present ("3/1"),
// which keeps CSV and JSON cells unambiguous and byte-stable.
inline std::string rat_to_string(const Rat& q) {
  return numerator(q).str() + "/" + denominator(q).str();
}

inline std::string rat_num_string(const Rat& q) { return numerator(q).str(); }
inline std::string rat_den_string(const Rat& q) { return denominator(q).str(); }

// Parses "n", "n/d" or decimal strings like "0.25" into an exact rational.
inline std::optional<Rat> parse_rational(const std::string& s) {
  if (s.empty()) return std::nullopt;
  auto digits_ok = [](const std::string& t, bool allow_sign) {
    if (t.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (t[0] == '-' || t[0] == '+')) i = 1;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  try {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
      std::string num = s.substr(0, slash), den = s.substr(slash + 1);
      if (!digits_ok(num, true) || !digits_ok(den, false)) return std::nullopt;
      Int d(den);
      if (d == 0) return std::nullopt;
      return Rat(Int(num), d);
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
      std::string head = s.substr(0, dot), frac = s.substr(dot + 1);
      if (head.empty() || head == "-" || head == "+") head += "0";
      if (!digits_ok(head, true) || (!frac.empty() && !digits_ok(frac, false)))
        return std::nullopt;
      Rat r{Int(head)};
      if (!frac.empty()) {
        Rat f(Int(frac), ipow(10, static_cast<long long>(frac.size())));
        r += (head[0] == '-') ? -f : f;
      }
      return r;
    }
    if (!digits_ok(s, true)) return std::nullopt;
    return Rat(Int(s));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

inline double to_double(const Rat& q) { return q.convert_to<double>(); }

}  // namespace treemax
