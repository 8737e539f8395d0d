#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace staged::algebra {

/// Raised when operands live over incompatible variable sets or a contract
/// on shapes/indices is broken.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Ordered list of distinct variable names. The order is the comparison
/// order used by every monomial order (variable 0 is the largest).
class VarSet {
 public:
  explicit VarSet(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> index(std::string_view name) const;

  bool operator==(const VarSet& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

using VarSetPtr = std::shared_ptr<const VarSet>;

VarSetPtr make_varset(std::vector<std::string> names);

/// p1, ..., pn
VarSetPtr indexed_varset(const std::string& prefix, std::size_t n);

bool same_varset(const VarSetPtr& a, const VarSetPtr& b);

}  // namespace staged::algebra
