#ifndef TIGHTPOW_RATIONAL_HPP
#define TIGHTPOW_RATIONAL_HPP

#include <cstdint>
#include <sstream>
#include <string>

#include <boost/rational.hpp>

#include "errors.hpp"

namespace tightpow {

using Rational = boost::rational<std::int64_t>;

inline std::string to_string(const Rational& q) {
  std::ostringstream os;
  os << q.numerator();
  if (q.denominator() != 1) os << '/' << q.denominator();
  return os.str();
}

// Accepts "a", "a/b" or a finite decimal such as "0.23".
inline Rational parse_rational(const std::string& text) {
  try {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
      std::size_t used = 0;
      const auto num = std::stoll(text.substr(0, slash), &used);
      if (used != slash) throw InvalidArgument("bad numerator");
      const auto rest = text.substr(slash + 1);
      const auto den = std::stoll(rest, &used);
      if (used != rest.size() || den == 0) throw InvalidArgument("bad denominator");
      return Rational(num, den);
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) {
      std::size_t used = 0;
      const auto v = std::stoll(text, &used);
      if (used != text.size()) throw InvalidArgument("bad integer");
      return Rational(v);
    }
    const std::string whole = text.substr(0, dot);
    const std::string frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 15 || frac.find_first_not_of("0123456789") != std::string::npos)
      throw InvalidArgument("bad decimal");
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const bool neg = !whole.empty() && whole[0] == '-';
    const std::int64_t w = whole.empty() || whole == "-" ? 0 : std::stoll(whole);
    const std::int64_t f = std::stoll(frac);
    return Rational(w) + Rational(neg ? -f : f, den);
  } catch (const std::logic_error&) {
    throw InvalidArgument("cannot parse rational '" + text + "'");
  }
}

inline double to_double(const Rational& q) {
  return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

}  // namespace tightpow

#endif  // TIGHTPOW_RATIONAL_HPP
