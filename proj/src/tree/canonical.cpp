#include "stagedtree/tree/canonical.hpp"

#include "stagedtree/tree/ops.hpp"

namespace staged::tree {

Canonicalizer::Canonicalizer(const StagedTree& t) : vars_(t.label_vars()) {
  const std::size_t nv = vars_->size();
  const std::size_t z = nv - 1;
  Polynomial zp = Polynomial::variable(vars_, z);
  eliminated_.assign(nv, false);
  for (std::size_t i = 0; i < nv; ++i) subst_.push_back(Polynomial::variable(vars_, i));
  for (std::size_t i = 0; i < nv; ++i) {
    auto [s, pos] = t.label_owner()[i];
    if (s < 0 || pos != 0) continue;
    Polynomial r = zp;
    for (std::size_t j = 1; j < t.stage(s).arity(); ++j) r -= Polynomial::variable(vars_, i + j);
    subst_[i] = r;
    eliminated_[i] = true;
  }
  for (const auto& m : atom_images(t)) atoms_.push_back(reduce(m));
}

Polynomial Canonicalizer::reduce(const Polynomial& f) const { return f.substitute(subst_, vars_); }

Polynomial Canonicalizer::reduce(const Monomial& m) const { return reduce(Polynomial(vars_, m)); }

Polynomial Canonicalizer::image(const LinearForm& f) const {
  Polynomial r(vars_);
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] != 0) r += atoms_.at(i) * f[i];
  return r;
}

}  // namespace staged::tree
