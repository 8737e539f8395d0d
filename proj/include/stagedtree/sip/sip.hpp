#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stagedtree/minors/minors.hpp"
#include "stagedtree/tree/tree.hpp"

namespace staged::sip {

using minors::ToricCertificate;
using tree::LinearForm;
using tree::StagedTree;

/// Stage s, vertex v and child i such that T(v_i) does not contain T(v_c)
/// for the candidate index c. All indices 0-based.
struct SipWitness {
  int stage = -1;
  int vertex = -1;
  int child = -1;
  int candidate = -1;
};

struct SipResult {
  bool sip = true;
  /// Stage index to the least valid child index (0-based).
  std::map<int, int> index;
  std::optional<SipWitness> witness;
};

/// True when T(b) contains a copy of T(a) rooted at b: same stages and
/// labels along matched edges.
bool embeds(const StagedTree& t, int a, int b);

/// Least valid index of one stage, or the witness for candidate 0.
std::optional<int> sip_index(const StagedTree& t, int stage, SipWitness* witness = nullptr);

/// Every valid index of one stage, ascending.
std::vector<int> valid_sip_indices(const StagedTree& t, int stage);

SipResult detect_sip(const StagedTree& t);

/// T with each stage's labels and children rotated so the SIP index is first.
StagedTree sip_reorder(const StagedTree& t, const SipResult& r);

struct Stratified {
  StagedTree tree;
  /// New label to the label of T it replaces.
  std::map<std::string, std::string> substitution;
};

/// Same tree; vertices share a stage when they did in T and sit at the same
/// depth. Stage ids and labels get the suffix "_d<depth>".
Stratified stratify(const StagedTree& t);

class NotSip : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidCut : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Forms whose stratified images are the leaf paths with every SIP-index
/// edge label below the cut replaced by z. Also the SIP index per stage id.
ToricCertificate sip_change_of_variables(const StagedTree& t, const minors::VerifyConfig& cfg = {});

/// Cut given by frontier vertices v_1..v_m. Checks that the prefix S is
/// balanced, that S and the subtrees below the cut share no stage, and that
/// every stage below the cut has the subtree-inclusion property. A failing
/// hypothesis gives an unverified certificate with clause "hybrid-1/2/3".
ToricCertificate hybrid_certificate(const StagedTree& t, const std::vector<int>& frontier,
                                    const minors::VerifyConfig& cfg = {});

/// Depth cuts t = 0..d (shallower leaves included); first verified result.
std::optional<ToricCertificate> hybrid_search(const StagedTree& t, const minors::VerifyConfig& cfg = {});

/// The vertices at depth k together with the leaves above depth k.
std::vector<int> depth_cut(const StagedTree& t, int k);

}  // namespace staged::sip
