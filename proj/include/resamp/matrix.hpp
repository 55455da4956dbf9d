#pragma once

#include <utility>
#include <vector>

#include "resamp/space.hpp"

namespace resamp {

// Square sparse matrix over exact rationals, stored by rows. Each row is a
// column-sorted list of nonzero entries; absent rows are zero. Transition
// matrices of flaws are substochastic: rows on the flaw's support sum to 1,
// all other rows are zero.
struct SparseMatrix {
  int n = 0;
  std::vector<std::vector<std::pair<int, Rat>>> rows;

  static SparseMatrix zero(int n);
  static SparseMatrix identity(int n);

  Rat at(int r, int c) const;
  void set(int r, int c, const Rat& v);  // inserts/overwrites; drops zeros
  void normalize();                      // sort columns, drop zero entries
  bool row_empty(int r) const { return rows[r].empty(); }
  Rat row_sum(int r) const;
  int nnz() const;

  bool operator==(const SparseMatrix& o) const;
};

SparseMatrix mat_mul(const SparseMatrix& a, const SparseMatrix& b);

// A * v.
ExactVec mat_apply(const SparseMatrix& a, const ExactVec& v);

// v^T * A (returned as a plain vector).
ExactVec mat_apply_left(const ExactVec& v, const SparseMatrix& a);

SparseMatrix mat_scale(const SparseMatrix& a, const Rat& c);

// Largest column index count per column <= 1 (used for injectivity checks).
int max_column_nnz(const SparseMatrix& a);

}  // namespace resamp
