#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "stagedtree/algebra/rational.hpp"

namespace staged::algebra {

using Vector = std::vector<Rational>;

/// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Vector> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r, Vector(c, Rational(0))) {}
  static Matrix from_rows(const std::vector<Vector>& rows, std::size_t cols);

  Rational& at(std::size_t i, std::size_t j) { return data[i][j]; }
  const Rational& at(std::size_t i, std::size_t j) const { return data[i][j]; }
  Vector multiply(const Vector& v) const;
};

/// Reduced row echelon form in place; returns pivot columns. Pivots are the
/// leftmost nonzero column, rows taken top to bottom.
std::vector<std::size_t> rref(Matrix& m);

std::size_t rank(Matrix m);

/// Basis of {v : M v = 0}. One vector per free column, with a 1 in that
/// column (standard RREF basis).
std::vector<Vector> null_space(const Matrix& m);

/// A solution of A x = b, or nothing.
std::optional<Vector> solve(const Matrix& a, const Vector& b);

struct SpanMembership {
  bool member = false;
  Vector coefficients;  // one per vector of S, when member
};
SpanMembership in_span(const Vector& v, const std::vector<Vector>& S);

/// Rank of a list of vectors of equal length.
std::size_t rank_of(const std::vector<Vector>& vectors, std::size_t dim);

}  // namespace staged::algebra
