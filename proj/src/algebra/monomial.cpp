#include "stagedtree/algebra/monomial.hpp"

#include <algorithm>
#include <stdexcept>

#include "stagedtree/algebra/varset.hpp"

namespace staged::algebra {

Monomial::Monomial(std::vector<Exponent> exps) : exps_(std::move(exps)) {
  for (Exponent e : exps_) {
    if (e < 0) throw StructuralError("negative exponent");
    degree_ += e;
  }
}

Monomial Monomial::variable(std::size_t nvars, std::size_t index, Exponent power) {
  Monomial m(nvars);
  m.set(index, power);
  return m;
}

void Monomial::set(std::size_t i, Exponent e) {
  if (e < 0) throw StructuralError("negative exponent");
  degree_ += e - exps_.at(i);
  exps_[i] = e;
}

bool Monomial::divides(const Monomial& other) const {
  if (degree_ > other.degree_) return false;
  for (std::size_t i = 0; i < exps_.size(); ++i)
    if (exps_[i] > other.exps_[i]) return false;
  return true;
}

bool Monomial::coprime(const Monomial& other) const {
  for (std::size_t i = 0; i < exps_.size(); ++i)
    if (exps_[i] > 0 && other.exps_[i] > 0) return false;
  return true;
}

Monomial Monomial::operator*(const Monomial& other) const {
  if (exps_.size() != other.exps_.size()) throw StructuralError("monomial length mismatch");
  Monomial r(*this);
  for (std::size_t i = 0; i < exps_.size(); ++i) r.exps_[i] += other.exps_[i];
  r.degree_ = degree_ + other.degree_;
  return r;
}

Monomial Monomial::operator/(const Monomial& divisor) const {
  if (!divisor.divides(*this)) throw StructuralError("monomial does not divide");
  Monomial r(*this);
  for (std::size_t i = 0; i < exps_.size(); ++i) r.exps_[i] -= divisor.exps_[i];
  r.degree_ = degree_ - divisor.degree_;
  return r;
}

Monomial Monomial::lcm(const Monomial& other) const {
  Monomial r(exps_.size());
  for (std::size_t i = 0; i < exps_.size(); ++i) r.exps_[i] = std::max(exps_[i], other.exps_[i]);
  r.degree_ = 0;
  for (Exponent e : r.exps_) r.degree_ += e;
  return r;
}

Monomial Monomial::gcd(const Monomial& other) const {
  Monomial r(exps_.size());
  for (std::size_t i = 0; i < exps_.size(); ++i) r.exps_[i] = std::min(exps_[i], other.exps_[i]);
  r.degree_ = 0;
  for (Exponent e : r.exps_) r.degree_ += e;
  return r;
}

std::size_t Monomial::hash() const {
  std::size_t h = 1469598103934665603ull;
  for (Exponent e : exps_) {
    h ^= static_cast<std::size_t>(e) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

}  // namespace staged::algebra
