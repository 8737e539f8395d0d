#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stagedtree/algebra/groebner.hpp"
#include "stagedtree/kernel/kernel.hpp"
#include "stagedtree/minors/certificate.hpp"
#include "stagedtree/tree/tree.hpp"

namespace staged::minors {

using algebra::Rational;
using algebra::VarSetPtr;
using tree::StagedTree;

/// Rows are the stage's labels, columns its vertices. Entry (i, j) is
/// p_[u_i] for the j-th column vertex u.
struct StageMatrix {
  int stage = -1;
  /// Column vertices: deepest first, depth-first order within a depth.
  std::vector<int> columns;
  std::vector<std::vector<LinearForm>> entries;

  std::size_t rows() const { return entries.size(); }
  std::size_t cols() const { return entries.empty() ? 0 : entries.front().size(); }
  const LinearForm& at(std::size_t i, std::size_t j) const { return entries[i][j]; }
  LinearForm& at(std::size_t i, std::size_t j) { return entries[i][j]; }
};

/// Generators p_[u_i]p_[v] - p_[u]p_[v_i] of I_T, sign-normalised.
std::vector<Polynomial> model_invariants(const StagedTree& t);

StageMatrix stage_matrix(const StagedTree& t, int stage);
/// One per stage, in stage order.
std::vector<StageMatrix> stage_matrices(const StagedTree& t);

/// Nonzero 2x2 minors expanded in p1..pn, sign-normalised.
std::vector<Polynomial> matrix_minors(const StageMatrix& m, const VarSetPtr& pvars);
/// J_T: minors of every stage matrix, deduplicated.
std::vector<Polynomial> ideal_of_minors(const StagedTree& t);

/// Line `target` becomes keep * target + add * source.
struct ElementaryOp {
  enum class Kind { Row, Column };
  Kind kind = Kind::Row;
  int target = 0;
  int source = 0;
  Rational keep = 1;
  Rational add = 1;
};

class InvalidOperation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

StageMatrix row_col_transform(const StageMatrix& m, const std::vector<ElementaryOp>& ops);

/// A monomial m over the label variables with f - m in <θ - z>, or nothing.
/// Throws std::invalid_argument when f is not homogeneous.
std::optional<Monomial> monomial_representative(const StagedTree& t, const Polynomial& f);

struct VerifyConfig {
  algebra::Budget budget{5000, 64, 20000, 2000000};
};

/// Checks linear independence, monomial images, and that J_gens generate a
/// binomial ideal in the new variables with I_T ⊆ J ⊆ ker φ_T.
ToricCertificate verify_certificate(const StagedTree& t, const std::vector<LinearForm>& forms,
                                    const std::vector<Polynomial>& J_gens, const VerifyConfig& cfg = {});

/// Kernel of l_i -> m_i, expressed in p1..pn (reduced DegRevLex basis).
std::vector<Polynomial> certificate_kernel(const StagedTree& t, const ToricCertificate& c,
                                           const algebra::Budget& budget = {});

/// Inverse of the coefficient matrix of the forms; throws on singular input.
std::vector<std::vector<Rational>> inverse_forms(const std::vector<LinearForm>& forms);

/// f(p) rewritten in variables l1..ln given by the forms.
Polynomial to_new_variables(const Polynomial& f, const std::vector<std::vector<Rational>>& inverse,
                            const VarSetPtr& lvars);

/// One form per line, '#' comments. A line is either n coefficients or a
/// linear polynomial in p1..pn.
std::vector<LinearForm> parse_forms(const std::string& text, std::size_t n);
std::vector<LinearForm> load_forms(const std::string& path, std::size_t n);

/// Seeded search over random row/column operations on the stage matrices.
/// Trial 0 tries the unchanged matrices, and on a balanced tree the
/// p-variables with J generated by the quadratic basis. Nothing when all
/// trials fail.
std::optional<ToricCertificate> random_search(const StagedTree& t, std::uint64_t seed, int trials,
                                              const VerifyConfig& cfg = {});

}  // namespace staged::minors
