#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stagedtree/algebra/polynomial.hpp"
#include "stagedtree/tree/linear_form.hpp"

namespace staged::minors {

using algebra::Monomial;
using algebra::Polynomial;
using tree::LinearForm;

/// Linear forms l1..ln with monomial images and binomial generators of an
/// ideal J with I_T ⊆ J ⊆ ker φ_T.
struct ToricCertificate {
  std::vector<LinearForm> forms;
  /// Over the tree's label variables (labels then z).
  std::vector<Monomial> monomial_images;
  /// Reduced DegRevLex basis of J in the variables l1..ln.
  std::vector<Polynomial> binomial_generators;
  bool verified = false;
  /// "i", "ii" or "iii" when not verified.
  std::string failing_clause;
  std::string detail;

  /// How the forms were found: "supplied", "random", "sip", "hybrid", "binary".
  std::string method = "supplied";
  std::optional<std::uint64_t> seed;
  std::optional<int> trial;
  /// Stage id to 1-based SIP index.
  std::map<std::string, int> sip_index;
  /// Vertex names of a hybrid cut.
  std::vector<std::string> frontier;
};

}  // namespace staged::minors
