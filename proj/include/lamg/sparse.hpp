#pragma once

#include <span>
#include <vector>

#include "lamg/laplacian.hpp"

namespace lamg {

/// Rectangular CSR matrix used for transfer operators.
struct SparseMatrix {
  Index rows = 0;
  Index cols = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<Index> col;
  std::vector<double> val;

  static SparseMatrix identity(Index n);

  std::size_t nonzeros() const { return col.size(); }
  double at(Index i, Index j) const;

  /// y = M x
  void multiply(std::span<const double> x, std::span<double> y) const;
  /// y = M^T x
  void multiply_transpose(std::span<const double> x, std::span<double> y) const;
  /// this * rhs
  SparseMatrix product(const SparseMatrix& rhs) const;
};

}  // namespace lamg
