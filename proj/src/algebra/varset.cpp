#include "stagedtree/algebra/varset.hpp"

namespace staged::algebra {

VarSet::VarSet(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i].empty()) throw StructuralError("empty variable name");
    if (!lookup_.emplace(names_[i], i).second)
      throw StructuralError("duplicate variable name: " + names_[i]);
  }
}

std::optional<std::size_t> VarSet::index(std::string_view name) const {
  auto it = lookup_.find(std::string(name));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

VarSetPtr make_varset(std::vector<std::string> names) {
  return std::make_shared<const VarSet>(std::move(names));
}

VarSetPtr indexed_varset(const std::string& prefix, std::size_t n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) names.push_back(prefix + std::to_string(i));
  return make_varset(std::move(names));
}

bool same_varset(const VarSetPtr& a, const VarSetPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

}  // namespace staged::algebra
