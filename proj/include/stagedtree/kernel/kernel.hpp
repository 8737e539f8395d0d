#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "stagedtree/algebra/groebner.hpp"
#include "stagedtree/tree/tree.hpp"

namespace staged::kernel {

using algebra::Budget;
using algebra::BudgetExceeded;
using algebra::GroebnerBasis;
using algebra::Polynomial;
using tree::StagedTree;

struct KernelConfig {
  std::size_t max_leaves = 16;
  std::size_t max_labels = 10;  // not counting z
  /// Largest number of p-monomials in one graded piece.
  std::size_t max_graded_monomials = 20000;
  Budget budget{5000, 64, 20000, 2000000};
};

/// Reduced DegRevLex basis of ker φ_T over p1..pn, by eliminating the labels
/// and z from <p_r - atom_r> + <sum of stage labels - z>. Throws
/// BudgetExceeded beyond the configured size.
GroebnerBasis kernel_ideal(const StagedTree& t, const KernelConfig& cfg = {});

/// As kernel_ideal, reading and writing a text cache keyed by a hash of the
/// canonical serialization. cache_only returns nothing on a miss.
std::optional<GroebnerBasis> kernel_ideal_cached(const StagedTree& t, const std::string& cache_dir,
                                                 bool cache_only, const KernelConfig& cfg = {});
std::string cache_key(const StagedTree& t);

/// Basis of the degree-D part of ker φ_T, by linear algebra on the canonical
/// images of all degree-D monomials in p.
std::vector<Polynomial> graded_kernel_piece(const StagedTree& t, int D, const KernelConfig& cfg = {});

/// Degrees of a minimal homogeneous generating set, ascending with
/// multiplicity. Throws std::invalid_argument on inhomogeneous input.
std::vector<int> minimal_generator_degrees(const GroebnerBasis& B, const Budget& budget = {});
/// The generators selected by minimal_generator_degrees.
std::vector<Polynomial> minimal_generators(const GroebnerBasis& B, const Budget& budget = {});

/// Every element of gens reduces to zero modulo the basis.
bool ideal_contains(const GroebnerBasis& B, const std::vector<Polynomial>& gens);

/// Mutual containment of <A> and <B>. Empty lists denote the zero ideal.
bool ideal_equal(const std::vector<Polynomial>& A, const std::vector<Polynomial>& B, const Budget& budget = {});

/// Number of p-monomials of degree D in n variables.
std::size_t monomial_count(std::size_t n, int D);

}  // namespace staged::kernel
