#include "lamg/sparse.hpp"

#include <algorithm>

#include "lamg/error.hpp"

namespace lamg {

SparseMatrix SparseMatrix::identity(Index n) {
  SparseMatrix m;
  m.rows = m.cols = n;
  m.row_ptr.resize(static_cast<std::size_t>(n) + 1);
  m.col.resize(n);
  m.val.assign(n, 1.0);
  for (Index i = 0; i < n; ++i) {
    m.row_ptr[i + 1] = static_cast<std::size_t>(i) + 1;
    m.col[i] = i;
  }
  return m;
}

double SparseMatrix::at(Index i, Index j) const {
  for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
    if (col[k] == j) return val[k];
  }
  return 0.0;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != static_cast<std::size_t>(cols) || y.size() != static_cast<std::size_t>(rows)) {
    throw Error("SparseMatrix::multiply: length mismatch");
  }
  for (Index i = 0; i < rows; ++i) {
    double s = 0.0;
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k] * x[col[k]];
    y[i] = s;
  }
}

void SparseMatrix::multiply_transpose(std::span<const double> x, std::span<double> y) const {
  if (x.size() != static_cast<std::size_t>(rows) || y.size() != static_cast<std::size_t>(cols)) {
    throw Error("SparseMatrix::multiply_transpose: length mismatch");
  }
  std::fill(y.begin(), y.end(), 0.0);
  for (Index i = 0; i < rows; ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) y[col[k]] += val[k] * xi;
  }
}

SparseMatrix SparseMatrix::product(const SparseMatrix& rhs) const {
  if (cols != rhs.rows) throw Error("SparseMatrix::product: dimension mismatch");
  SparseMatrix out;
  out.rows = rows;
  out.cols = rhs.cols;
  out.row_ptr.assign(static_cast<std::size_t>(rows) + 1, 0);
  std::vector<double> acc(rhs.cols, 0.0);
  std::vector<char> marked(rhs.cols, 0);
  std::vector<Index> touched;
  for (Index i = 0; i < rows; ++i) {
    touched.clear();
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      const Index j = col[k];
      for (std::size_t l = rhs.row_ptr[j]; l < rhs.row_ptr[j + 1]; ++l) {
        const Index c = rhs.col[l];
        if (!marked[c]) {
          marked[c] = 1;
          touched.push_back(c);
        }
        acc[c] += val[k] * rhs.val[l];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (Index c : touched) {
      if (acc[c] != 0.0) {
        out.col.push_back(c);
        out.val.push_back(acc[c]);
      }
      acc[c] = 0.0;
      marked[c] = 0;
    }
    out.row_ptr[i + 1] = out.col.size();
  }
  return out;
}

}  // namespace lamg
