#include "stagedtree/algebra/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace staged::algebra {

Polynomial::Polynomial(VarSetPtr vars) : vars_(std::move(vars)) {
  if (!vars_) throw StructuralError("null variable set");
}

Polynomial::Polynomial(VarSetPtr vars, const Rational& c) : Polynomial(std::move(vars)) {
  if (!algebra::is_zero(c)) terms_.emplace(Monomial(vars_->size()), c);
}

Polynomial::Polynomial(VarSetPtr vars, const Monomial& m, const Rational& c)
    : Polynomial(std::move(vars)) {
  if (m.size() != vars_->size()) throw StructuralError("monomial length does not match variables");
  if (!algebra::is_zero(c)) terms_.emplace(m, c);
}

Polynomial Polynomial::variable(VarSetPtr vars, std::size_t index) {
  std::size_t n = vars->size();
  if (index >= n) throw StructuralError("variable index out of range");
  return Polynomial(std::move(vars), Monomial::variable(n, index), 1);
}

Polynomial Polynomial::variable(VarSetPtr vars, std::string_view name) {
  auto idx = vars->index(name);
  if (!idx) throw StructuralError("unknown variable: " + std::string(name));
  return variable(std::move(vars), *idx);
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (m.size() != vars_->size()) throw StructuralError("monomial length does not match variables");
  if (algebra::is_zero(c)) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (algebra::is_zero(it->second)) terms_.erase(it);
  }
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m.degree()));
  return d;
}

bool Polynomial::is_homogeneous() const {
  if (terms_.empty()) return true;
  int d = terms_.begin()->first.degree();
  for (const auto& [m, c] : terms_)
    if (m.degree() != d) return false;
  return true;
}

bool Polynomial::is_homogeneous(const std::vector<int>& weights) const {
  if (weights.empty()) return is_homogeneous();
  long first = -1;
  for (const auto& [m, c] : terms_) {
    long w = 0;
    for (std::size_t i = 0; i < m.size(); ++i) w += static_cast<long>(weights[i]) * m[i];
    if (first < 0) first = w;
    else if (w != first) return false;
  }
  return true;
}

std::vector<std::pair<Monomial, Rational>> Polynomial::terms_sorted(const MonomialOrder& order) const {
  std::vector<std::pair<Monomial, Rational>> out(terms_.begin(), terms_.end());
  std::sort(out.begin(), out.end(),
            [&](const auto& a, const auto& b) { return order.compare(a.first, b.first) > 0; });
  return out;
}

Monomial Polynomial::leading_monomial(const MonomialOrder& order) const {
  if (terms_.empty()) throw StructuralError("zero polynomial has no leading monomial");
  const Monomial* best = &terms_.begin()->first;
  for (const auto& [m, c] : terms_)
    if (order.compare(m, *best) > 0) best = &m;
  return *best;
}

Rational Polynomial::leading_coefficient(const MonomialOrder& order) const {
  return terms_.at(leading_monomial(order));
}

Polynomial Polynomial::monic(const MonomialOrder& order) const {
  if (terms_.empty()) return *this;
  Rational lc = leading_coefficient(order);
  return *this * Rational(1 / lc);
}

void Polynomial::check_same(const Polynomial& o) const {
  if (!same_varset(vars_, o.vars_)) throw StructuralError("polynomials over different variable sets");
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r(*this);
  r += o;
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  Polynomial r(*this);
  r -= o;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  check_same(o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  check_same(o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  check_same(o);
  Polynomial r(vars_);
  for (const auto& [m1, c1] : terms_)
    for (const auto& [m2, c2] : o.terms_) r.add_term(m1 * m2, c1 * c2);
  return r;
}

Polynomial Polynomial::operator*(const Rational& c) const {
  Polynomial r(vars_);
  if (algebra::is_zero(c)) return r;
  for (const auto& [m, a] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, a * c);
  return r;
}

Polynomial Polynomial::operator-() const { return *this * Rational(-1); }

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result(vars_, Rational(1));
  Polynomial base(*this);
  while (e) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e) base = base * base;
  }
  return result;
}

Polynomial Polynomial::mul_monomial(const Monomial& m, const Rational& c) const {
  Polynomial r(vars_);
  if (algebra::is_zero(c)) return r;
  for (const auto& [t, a] : terms_) r.terms_.emplace(t * m, a * c);
  return r;
}

Polynomial Polynomial::substitute(const std::vector<Polynomial>& images, const VarSetPtr& target) const {
  if (images.size() != vars_->size()) throw StructuralError("substitution arity mismatch");
  Polynomial r(target);
  // cache powers per variable
  std::vector<std::vector<Polynomial>> powers(images.size());
  auto power = [&](std::size_t i, int e) -> const Polynomial& {
    auto& p = powers[i];
    if (p.empty()) p.emplace_back(target, Rational(1));
    while (static_cast<int>(p.size()) <= e) p.push_back(p.back() * images[i]);
    return p[e];
  };
  for (const auto& [m, c] : terms_) {
    Polynomial t(target, c);
    for (std::size_t i = 0; i < m.size() && !t.is_zero(); ++i)
      if (m[i] > 0) t = t * power(i, m[i]);
    r += t;
  }
  return r;
}

Polynomial Polynomial::rebase(const VarSetPtr& target) const {
  if (same_varset(vars_, target)) {
    Polynomial r(*this);
    r.vars_ = target;
    return r;
  }
  std::vector<std::size_t> map(vars_->size(), SIZE_MAX);
  for (std::size_t i = 0; i < vars_->size(); ++i) {
    if (auto j = target->index(vars_->name(i))) map[i] = *j;
  }
  Polynomial r(target);
  for (const auto& [m, c] : terms_) {
    Monomial t(target->size());
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (map[i] == SIZE_MAX) throw StructuralError("variable " + vars_->name(i) + " missing in target");
      t.set(map[i], m[i]);
    }
    r.add_term(t, c);
  }
  return r;
}

bool Polynomial::operator==(const Polynomial& o) const {
  return same_varset(vars_, o.vars_) && terms_ == o.terms_;
}

std::string monomial_to_string(const Monomial& m, const VarSet& vars) {
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += vars.name(i);
    if (m[i] > 1) out += '^' + std::to_string(m[i]);
  }
  return out.empty() ? "1" : out;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_sorted(MonomialOrder::degrevlex())) {
    Rational a = abs(c);
    bool neg = sgn(c) < 0;
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    first = false;
    if (m.is_one()) {
      out += algebra::to_string(a);
    } else {
      if (a != 1) out += algebra::to_string(a) + "*";
      out += monomial_to_string(m, *vars_);
    }
  }
  return out;
}

namespace {

class PolyParser {
 public:
  PolyParser(std::string_view s, const VarSetPtr& vars) : s_(s), vars_(vars) {}

  Polynomial parse() {
    Polynomial result(vars_);
    skip();
    if (pos_ == s_.size()) fail("empty polynomial");
    bool first = true;
    while (true) {
      skip();
      if (pos_ == s_.size()) break;
      int sign = 1;
      if (s_[pos_] == '+' || s_[pos_] == '-') {
        sign = s_[pos_] == '-' ? -1 : 1;
        ++pos_;
        skip();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      auto [m, c] = term();
      result.add_term(m, c * sign);
    }
    return result;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw std::invalid_argument("polynomial parse error at column " + std::to_string(pos_ + 1) + ": " + msg);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  std::pair<Monomial, Rational> term() {
    Monomial m(vars_->size());
    Rational c(1);
    while (true) {
      skip();
      if (pos_ == s_.size()) fail("expected factor");
      char ch = s_[pos_];
      if (std::isdigit(static_cast<unsigned char>(ch))) {
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/'))
          ++pos_;
        c *= parse_rational(s_.substr(start, pos_ - start));
      } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
          ++pos_;
        std::string_view name = s_.substr(start, pos_ - start);
        auto idx = vars_->index(name);
        if (!idx) fail("unknown variable '" + std::string(name) + "'");
        int e = 1;
        skip();
        if (pos_ < s_.size() && s_[pos_] == '^') {
          ++pos_;
          skip();
          std::size_t st = pos_;
          while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
          if (st == pos_) fail("expected exponent");
          e = std::stoi(std::string(s_.substr(st, pos_ - st)));
        }
        m.set(*idx, m[*idx] + e);
      } else {
        fail(std::string("unexpected character '") + ch + "'");
      }
      skip();
      if (pos_ < s_.size() && s_[pos_] == '*') {
        ++pos_;
        continue;
      }
      break;
    }
    return {m, c};
  }

  std::string_view s_;
  VarSetPtr vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, const VarSetPtr& vars) {
  return PolyParser(text, vars).parse();
}

}  // namespace staged::algebra
