#include "stagedtree/algebra/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace staged::algebra {

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  bool neg = false;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
    neg = text[0] == '-';
    text.remove_prefix(1);
  }
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw std::invalid_argument("bad rational: " + std::string(text));
  mpz_class n(std::string(num), 10), d(std::string(den), 10);
  if (d == 0) throw std::invalid_argument("zero denominator");
  Rational q(n, d);
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

}  // namespace staged::algebra
