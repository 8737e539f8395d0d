#include "stagedtree/algebra/linalg.hpp"

#include <stdexcept>

#include "stagedtree/algebra/varset.hpp"

namespace staged::algebra {

Matrix Matrix::from_rows(const std::vector<Vector>& rows, std::size_t cols) {
  Matrix m;
  m.rows = rows.size();
  m.cols = cols;
  for (const auto& r : rows) {
    if (r.size() != cols) throw StructuralError("ragged matrix");
    m.data.push_back(r);
  }
  return m;
}

Vector Matrix::multiply(const Vector& v) const {
  if (v.size() != cols) throw StructuralError("matrix-vector size mismatch");
  Vector out(rows, Rational(0));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (!is_zero(data[i][j]) && !is_zero(v[j])) out[i] += data[i][j] * v[j];
  return out;
}

std::vector<std::size_t> rref(Matrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
    std::size_t sel = row;
    while (sel < m.rows && is_zero(m.data[sel][col])) ++sel;
    if (sel == m.rows) continue;
    std::swap(m.data[sel], m.data[row]);
    Rational inv = 1 / m.data[row][col];
    for (std::size_t j = col; j < m.cols; ++j)
      if (!is_zero(m.data[row][j])) m.data[row][j] *= inv;
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == row || is_zero(m.data[i][col])) continue;
      Rational f = m.data[i][col];
      for (std::size_t j = col; j < m.cols; ++j)
        if (!is_zero(m.data[row][j])) m.data[i][j] -= f * m.data[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::size_t rank(Matrix m) { return rref(m).size(); }

std::vector<Vector> null_space(const Matrix& m) {
  Matrix r = m;
  auto pivots = rref(r);
  std::vector<bool> is_pivot(m.cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<Vector> basis;
  for (std::size_t free = 0; free < m.cols; ++free) {
    if (is_pivot[free]) continue;
    Vector v(m.cols, Rational(0));
    v[free] = 1;
    for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -r.data[k][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Vector> solve(const Matrix& a, const Vector& b) {
  if (b.size() != a.rows) throw StructuralError("right-hand side length mismatch");
  Matrix aug(a.rows, a.cols + 1);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < a.cols; ++j) aug.data[i][j] = a.data[i][j];
    aug.data[i][a.cols] = b[i];
  }
  auto pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == a.cols) return std::nullopt;
  Vector x(a.cols, Rational(0));
  for (std::size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = aug.data[k][a.cols];
  return x;
}

SpanMembership in_span(const Vector& v, const std::vector<Vector>& S) {
  SpanMembership out;
  std::size_t dim = v.size();
  Matrix a(dim, S.size());
  for (std::size_t j = 0; j < S.size(); ++j) {
    if (S[j].size() != dim) throw StructuralError("span vectors of different dimension");
    for (std::size_t i = 0; i < dim; ++i) a.data[i][j] = S[j][i];
  }
  auto x = solve(a, v);
  if (!x) return out;
  out.member = true;
  out.coefficients = std::move(*x);
  return out;
}

std::size_t rank_of(const std::vector<Vector>& vectors, std::size_t dim) {
  return rank(Matrix::from_rows(vectors, dim));
}

}  // namespace staged::algebra
